//! Ritz values, residuals, and evaluators for the perturbation inequalities.
//!
//! Each `check_*` function computes both sides of one inequality from scratch
//! and returns a [`BoundReport`]: the compared spectra, the submajorization
//! verdict with partial-sum margins, an optional entrywise ratio profile, the
//! tolerances in force, and a digest of the inputs.

mod checks;
mod curve;

pub use checks::{
    check_compression_bound, check_invariant_compression_bound, check_residual_tangent,
    check_ritz_variation, check_sine_conjecture,
};
pub use curve::{check_curve_integral, curve_gamma, CurveSample};

use std::collections::BTreeMap;

use serde_json::json;
use thiserror::Error;

use crate::spectra::{
    eigenvalues_desc, ComplexMatrix, HermitianMatrix, SpectraError,
};
use crate::subspace::{Isometry, SubspaceError};
use crate::vecmaj::{
    default_tolerance, sort_desc, submajorizes, MajorizationVerdict, OrderedSpectrum, VecMajError,
};

/// Names of the inequality checks this module provides, as exposed on the CLI.
pub const CHECK_NAMES: &[&str] = &[
    "thm31",
    "thm32",
    "ritz",
    "ritz-invariant",
    "conj1",
    "conj2",
    "residual-tangent",
    "curve",
];

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },
    #[error("subspace is not invariant: residual norm {residual:.3e} exceeds {tolerance:.3e}")]
    NotInvariant { residual: f64, tolerance: f64 },
    #[error("pair is not acute: largest principal angle {angle} is within {tolerance:.3e} of π/2")]
    NotAcute { angle: f64, tolerance: f64 },
    #[error("quadrature needs an odd node count >= 3, got {points}")]
    BadQuadrature { points: usize },
    #[error("rotated representative changed the Ritz values by {gap:.3e} (tolerance {tolerance:.3e})")]
    RitzConsistency { gap: f64, tolerance: f64 },
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Vector(#[from] VecMajError),
}

/// Knobs shared by all bound checks.
#[derive(Debug, Clone)]
pub struct CheckOptions {
    /// Absolute partial-sum tolerance; `None` uses the scale-aware default
    /// `1e-10 * (1 + max |entry|)`.
    pub tolerance: Option<f64>,
    /// Classification band for intersection cosines.
    pub tol_int: f64,
    /// Classification band for perpendicular cosines.
    pub tol_perp: f64,
    /// Invariance is accepted when `‖AX - X(X*AX)‖_max ≤ factor * (1 + ‖A‖_max)`.
    pub invariance_tol_factor: f64,
    /// Angles must stay below `π/2 - acute_tol` for tangent-based bounds.
    pub acute_tol: f64,
    /// Truncate the full-matrix singular-value term to its largest `k`
    /// entries (the sharper but unpadded variant of the two-matrix bound).
    pub strict_truncation: bool,
    /// Simpson node count for curve integrals (odd, ≥ 3).
    pub quadrature_points: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            tolerance: None,
            tol_int: crate::subspace::DEFAULT_CLASSIFY_TOL,
            tol_perp: crate::subspace::DEFAULT_CLASSIFY_TOL,
            invariance_tol_factor: 1e-8,
            acute_tol: 1e-8,
            strict_truncation: false,
            quadrature_points: 201,
        }
    }
}

/// Ritz values of `A` on `range(X)`: the non-increasing spectrum of the
/// compression `X*AX`.
pub fn ritz_values(a: &HermitianMatrix, x: &Isometry) -> Result<OrderedSpectrum, BoundsError> {
    Ok(eigenvalues_desc(&compression(a, x)?)?)
}

/// The compression `X*AX` as a validated Hermitian matrix.
pub fn compression(a: &HermitianMatrix, x: &Isometry) -> Result<HermitianMatrix, BoundsError> {
    require_same_ambient(a, x)?;
    Ok(HermitianMatrix::new(
        x.as_matrix().adjoint() * a.as_matrix() * x.as_matrix(),
    )?)
}

/// Residual `R_X = AX - X(X*AX)`; zero exactly when `range(X)` is invariant
/// under `A`. Satisfies the Galerkin identity `X* R_X = 0`.
pub fn residual(a: &HermitianMatrix, x: &Isometry) -> Result<ComplexMatrix, BoundsError> {
    require_same_ambient(a, x)?;
    let ax = a.as_matrix() * x.as_matrix();
    let compressed = x.as_matrix().adjoint() * &ax;
    Ok(ComplexMatrix::new(&ax - x.as_matrix() * compressed)?)
}

pub(crate) fn require_same_ambient(
    a: &HermitianMatrix,
    x: &Isometry,
) -> Result<(), BoundsError> {
    if a.dim() != x.ambient_dim() {
        return Err(BoundsError::DimensionMismatch {
            left: format!("{0}x{0}", a.dim()),
            right: format!("{}x{}", x.ambient_dim(), x.sub_dim()),
        });
    }
    Ok(())
}

/// `|u - v|` entrywise on two equal-length spectra, sorted non-increasingly.
pub(crate) fn abs_diff_desc(
    u: &OrderedSpectrum,
    v: &OrderedSpectrum,
) -> Result<OrderedSpectrum, VecMajError> {
    if u.len() != v.len() {
        return Err(VecMajError::LengthMismatch {
            len_x: u.len(),
            len_y: v.len(),
        });
    }
    sort_desc(
        &u.values()
            .iter()
            .zip(v.values())
            .map(|(a, b)| (a - b).abs())
            .collect::<Vec<_>>(),
    )
}

/// LHS/RHS spectra of one inequality plus the audited verdict.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub check_name: String,
    /// The compared spectra as handed to the submajorization predicate
    /// (sorted, before common-length padding).
    pub lhs: OrderedSpectrum,
    pub rhs: OrderedSpectrum,
    pub verdict: MajorizationVerdict,
    /// Entrywise `lhs / rhs` over the padded sorted vectors, restricted to
    /// positions with positive `rhs`; `None` when no position qualifies.
    pub ratio_profile: Option<Vec<f64>>,
    pub tolerances: BTreeMap<String, f64>,
    pub inputs_digest: String,
    /// Conjectural bounds report violations instead of asserting them.
    pub conjectural: bool,
}

impl BoundReport {
    pub(crate) fn build(
        check_name: &str,
        lhs: OrderedSpectrum,
        rhs: OrderedSpectrum,
        tolerance: f64,
        mut tolerances: BTreeMap<String, f64>,
        inputs_digest: String,
        conjectural: bool,
    ) -> Result<Self, VecMajError> {
        let lhs = lhs.sorted();
        let rhs = rhs.sorted();
        let verdict = submajorizes(&lhs, &rhs, tolerance)?;
        let ratios: Vec<f64> = verdict
            .lhs_sorted
            .iter()
            .zip(&verdict.rhs_sorted)
            .filter(|(_, r)| **r > 0.0)
            .map(|(l, r)| l / r)
            .collect();
        tolerances.insert("submajorization".to_string(), tolerance);
        Ok(Self {
            check_name: check_name.to_string(),
            lhs,
            rhs,
            verdict,
            ratio_profile: if ratios.is_empty() { None } else { Some(ratios) },
            tolerances,
            inputs_digest,
            conjectural,
        })
    }

    pub fn holds(&self) -> bool {
        self.verdict.holds
    }

    /// The report serialization used everywhere (CLI output and fuzz streams).
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "check": self.check_name,
            "lhs": self.verdict.lhs_sorted,
            "rhs": self.verdict.rhs_sorted,
            "partial_sums_lhs": self.verdict.partial_sums_lhs,
            "partial_sums_rhs": self.verdict.partial_sums_rhs,
            "worst_margin": self.verdict.worst_margin,
            "holds": self.verdict.holds,
            "ratio_profile": self.ratio_profile,
            "tolerances": self.tolerances,
            "inputs_digest": self.inputs_digest,
        })
    }
}

pub(crate) fn resolve_tolerance(
    opts: &CheckOptions,
    lhs: &OrderedSpectrum,
    rhs: &OrderedSpectrum,
) -> f64 {
    opts.tolerance
        .unwrap_or_else(|| default_tolerance(&[lhs.values(), rhs.values()]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::HermitianMatrix;
    use crate::subspace::tests::{random_isometry, tilted_plane};
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> HermitianMatrix {
        let g = crate::subspace::tests::random_complex(rng, d, d);
        HermitianMatrix::new((&g + g.adjoint()).scale(0.5)).unwrap()
    }

    /// Diagonal 4x4 with entries (a, b, 0, 0); the first two axes are invariant.
    pub(crate) fn invariant_diagonal(a: f64, b: f64) -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[
            vec![a, 0.0, 0.0, 0.0],
            vec![0.0, b, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0],
        ])
        .unwrap()
    }

    /// 4x4 coupling with eigenvalues (a, b, -b, -a) whose compression to the
    /// first two axes vanishes.
    pub(crate) fn antidiagonal_coupling(a: f64, b: f64) -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[
            vec![0.0, 0.0, a, 0.0],
            vec![0.0, 0.0, 0.0, b],
            vec![a, 0.0, 0.0, 0.0],
            vec![0.0, b, 0.0, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn ritz_values_of_the_closed_form_families() {
        let x = Isometry::coordinate(4, 2).unwrap();

        let a = invariant_diagonal(2.0, 1.0);
        let ritz = ritz_values(&a, &x).unwrap();
        assert!((ritz.values()[0] - 2.0).abs() < 1e-14);
        assert!((ritz.values()[1] - 1.0).abs() < 1e-14);

        let a = antidiagonal_coupling(2.0, 1.0);
        let ritz = ritz_values(&a, &x).unwrap();
        assert!(ritz.values().iter().all(|v| v.abs() < 1e-14));

        let id = HermitianMatrix::identity(4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_isometry(&mut rng, 4, 3);
        let ritz = ritz_values(&id, &x).unwrap();
        for v in ritz.values() {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_vanishes_on_invariant_subspaces() {
        let a = invariant_diagonal(2.0, 1.0);
        let x = Isometry::coordinate(4, 2).unwrap();
        assert!(residual(&a, &x).unwrap().max_abs() < 1e-14);

        // eigenvector-spanned subspaces of a random Hermitian matrix
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_hermitian(&mut rng, 6);
        let eig = crate::spectra::eigen_desc(&m).unwrap();
        let x = Isometry::new(eig.vectors.columns(1, 3).into_owned()).unwrap();
        assert!(residual(&m, &x).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn residual_satisfies_galerkin_orthogonality() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let d = rng.gen_range(2..=8);
            let k = rng.gen_range(1..=d - 1);
            let a = random_hermitian(&mut rng, d);
            let x = random_isometry(&mut rng, d, k);
            let r = residual(&a, &x).unwrap();
            let overlap = x.as_matrix().adjoint() * r.as_matrix();
            let max = overlap.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            assert!(max < 1e-13, "X* R_X = 0");
        }
    }

    #[test]
    fn tilted_plane_compression_matches_closed_form() {
        let theta = 0.4;
        let a = antidiagonal_coupling(2.0, 1.0);
        let y = tilted_plane(theta);
        let comp = compression(&a, &y).unwrap();
        let want = DMatrix::<Complex64>::from_fn(2, 2, |i, j| {
            if i == j {
                let scale = if i == 0 { 2.0 } else { 1.0 };
                Complex64::new(scale * (2.0 * theta).sin(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let diff = comp.as_matrix() - want;
        assert!(diff.iter().fold(0.0f64, |m, z| m.max(z.norm())) < 1e-13);
    }

    #[test]
    fn report_json_matches_schema() {
        let lhs = OrderedSpectrum::raw(vec![1.0, 0.5]).unwrap();
        let rhs = OrderedSpectrum::raw(vec![2.0, 1.0, 0.0]).unwrap();
        let report = BoundReport::build(
            "demo",
            lhs,
            rhs,
            1e-10,
            BTreeMap::new(),
            "abc123".to_string(),
            false,
        )
        .unwrap();
        let value = report.to_json();
        let object = value.as_object().unwrap();
        for key in [
            "check",
            "lhs",
            "rhs",
            "partial_sums_lhs",
            "partial_sums_rhs",
            "worst_margin",
            "holds",
            "ratio_profile",
            "tolerances",
            "inputs_digest",
        ] {
            assert!(object.contains_key(key), "missing key {key}");
        }
        assert_eq!(object["check"], "demo");
        assert_eq!(object["holds"], true);
        assert_eq!(object["lhs"].as_array().unwrap().len(), 3, "padded length");
        // ratio profile only covers positive rhs entries
        assert_eq!(object["ratio_profile"].as_array().unwrap().len(), 2);
        assert!(object["tolerances"]["submajorization"].as_f64().unwrap() > 0.0);
    }
}
