//! The interpolating curve between compressions and its integral certificate.
//!
//! For Hermitian `A`, `B` and a direct rotation path `U(t)` from `range(X)`
//! onto `range(Y)`, the curve `γ(t) = Y_r(t)* L(t) Y_r(t)` with
//! `Y_r(t) = U(t) X` and `L(t) = (1-t) A + t B` joins `X*AX` to `Y_r*BY_r`.
//! Its derivative has the closed form
//!
//! ```text
//! γ'(t) = X* U(t)* (B - A) U(t) X + X* (A(t) U'(0) - U'(0) A(t)) X,
//! A(t)  = U(t)* L(t) U(t),
//! ```
//!
//! and the singular values of any smooth curve's endpoint difference are
//! submajorized by the integral of `s(γ'(t))`. The derivative is always
//! evaluated analytically; finite differences appear only in tests.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::digest::{digest_inputs, DigestPart};
use crate::spectra::{singular_values_of, ComplexMatrix, HermitianMatrix};
use crate::subspace::{decompose_pair, direct_rotation, DirectRotation, Isometry};
use crate::vecmaj::OrderedSpectrum;

use super::{require_same_ambient, resolve_tolerance, BoundReport, BoundsError, CheckOptions};

/// One evaluation of the curve: `γ(t)`, the analytic `γ'(t)`, and `s(γ'(t))`.
#[derive(Debug, Clone)]
pub struct CurveSample {
    pub t: f64,
    pub gamma: HermitianMatrix,
    pub gamma_prime: HermitianMatrix,
    pub s_gamma_prime: OrderedSpectrum,
}

/// Evaluates the curve and its analytic derivative at `t ∈ [0, 1]`.
pub fn curve_gamma(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    rot: &DirectRotation,
    x: &Isometry,
    t: f64,
) -> Result<CurveSample, BoundsError> {
    require_same_ambient(a, x)?;
    require_same_ambient(b, x)?;
    let u_t = rot.path(t)?;
    let l_t = a.as_matrix().scale(1.0 - t) + b.as_matrix().scale(t);
    let y_rt = &u_t * x.as_matrix();
    let gamma = HermitianMatrix::new(y_rt.adjoint() * &l_t * &y_rt)?;

    let diff = b.as_matrix() - a.as_matrix();
    let first = x.as_matrix().adjoint() * u_t.adjoint() * &diff * &u_t * x.as_matrix();

    let a_t = u_t.adjoint() * &l_t * &u_t;
    let gen = rot.generator();
    let commutator = &a_t * &gen - &gen * &a_t;
    let second = x.as_matrix().adjoint() * commutator * x.as_matrix();

    let gamma_prime = HermitianMatrix::new(first + second)?;
    let s_gamma_prime = singular_values_of(gamma_prime.as_matrix())?;
    Ok(CurveSample {
        t,
        gamma,
        gamma_prime,
        s_gamma_prime,
    })
}

/// Composite Simpson weights for `n` nodes (odd, `n ≥ 3`) on `[0, 1]`.
fn simpson_weights(n: usize) -> Vec<f64> {
    let h = 1.0 / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let w = if i == 0 || i == n - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect()
}

/// Curve-integral certificate (CLI name `curve`):
/// `s(γ(1) - γ(0)) ≺_w ∫₀¹ s(γ'(t)) dt`, the integral evaluated entrywise on
/// the sorted singular-value vectors by composite Simpson quadrature.
///
/// The verdict tolerance includes a quadrature allowance of
/// `1e-6 * (1 + ‖B - A‖_F + ‖A‖_F * θ_max)`.
pub fn check_curve_integral(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    x: &Isometry,
    y: &Isometry,
    n_points: usize,
    opts: &CheckOptions,
) -> Result<BoundReport, BoundsError> {
    if n_points < 3 || n_points.is_multiple_of(2) {
        return Err(BoundsError::BadQuadrature { points: n_points });
    }
    require_same_ambient(a, x)?;
    require_same_ambient(b, y)?;
    let dec = decompose_pair(x, y, opts.tol_int, opts.tol_perp)?;
    let rot = direct_rotation(&dec)?;
    let k = x.sub_dim();

    let weights = simpson_weights(n_points);
    let mut integral = vec![0.0; k];
    let mut first: Option<DMatrix<Complex64>> = None;
    let mut last: Option<DMatrix<Complex64>> = None;
    for (i, w) in weights.iter().enumerate() {
        let t = i as f64 / (n_points - 1) as f64;
        let sample = curve_gamma(a, b, &rot, x, t)?;
        for (acc, s) in integral.iter_mut().zip(sample.s_gamma_prime.values()) {
            *acc += w * s;
        }
        if i == 0 {
            first = Some(sample.gamma.as_matrix().clone());
        }
        if i == n_points - 1 {
            last = Some(sample.gamma.as_matrix().clone());
        }
    }
    let endpoint_diff = last.expect("n >= 3") - first.expect("n >= 3");
    let lhs = singular_values_of(&endpoint_diff)?;
    let rhs = crate::vecmaj::sort_desc(&integral)?;

    let theta_max = dec.angles().max_angle();
    let diff_norm = ComplexMatrix::new(b.as_matrix() - a.as_matrix())?.frobenius_norm();
    let allowance = 1e-6 * (1.0 + diff_norm + a.frobenius_norm() * theta_max);
    let tol = resolve_tolerance(opts, &lhs, &rhs) + allowance;

    let mut tolerances = BTreeMap::new();
    tolerances.insert("quadrature_allowance".to_string(), allowance);
    tolerances.insert("quadrature_points".to_string(), n_points as f64);
    let digest = digest_inputs(&[
        DigestPart { role: "A", matrix: a.as_matrix() },
        DigestPart { role: "B", matrix: b.as_matrix() },
        DigestPart { role: "X", matrix: x.as_matrix() },
        DigestPart { role: "Y", matrix: y.as_matrix() },
    ]);
    Ok(BoundReport::build("curve", lhs, rhs, tol, tolerances, digest, false)?)
}
