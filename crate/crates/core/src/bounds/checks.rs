//! Evaluators for the angle/spread perturbation inequalities.

use std::collections::BTreeMap;

use crate::digest::{digest_inputs, DigestPart};
use crate::spectra::{
    singular_values, spectral_spread, HermitianMatrix, SpectralSpread,
};
use crate::subspace::{
    decompose_pair, direct_rotation, principal_angles, DirectRotation, Isometry,
    PairDecomposition,
};
use crate::vecmaj::{padded_add, padded_mul, OrderedSpectrum};

use super::{
    abs_diff_desc, compression, require_same_ambient, residual, resolve_tolerance, ritz_values,
    BoundReport, BoundsError, CheckOptions,
};

fn require_pair(
    a: &HermitianMatrix,
    x: &Isometry,
    y: &Isometry,
) -> Result<(), BoundsError> {
    require_same_ambient(a, x)?;
    require_same_ambient(a, y)?;
    if x.sub_dim() != y.sub_dim() {
        return Err(BoundsError::DimensionMismatch {
            left: format!("{}x{}", x.ambient_dim(), x.sub_dim()),
            right: format!("{}x{}", y.ambient_dim(), y.sub_dim()),
        });
    }
    Ok(())
}

fn rotated_representative(
    x: &Isometry,
    y: &Isometry,
    opts: &CheckOptions,
) -> Result<(PairDecomposition, DirectRotation, Isometry), BoundsError> {
    let dec = decompose_pair(x, y, opts.tol_int, opts.tol_perp)?;
    let rot = direct_rotation(&dec)?;
    let y_r = rot.apply_to(x)?;
    Ok((dec, rot, y_r))
}

fn require_invariant(
    a: &HermitianMatrix,
    x: &Isometry,
    opts: &CheckOptions,
) -> Result<f64, BoundsError> {
    let r = residual(a, x)?.max_abs();
    let tolerance = opts.invariance_tol_factor * (1.0 + a.max_abs());
    if r > tolerance {
        return Err(BoundsError::NotInvariant {
            residual: r,
            tolerance,
        });
    }
    Ok(r)
}

/// Entrywise average of two spectral spreads of equal dimension.
fn average_spread(
    a: &SpectralSpread,
    b: &SpectralSpread,
) -> Result<OrderedSpectrum, BoundsError> {
    Ok(padded_add(a.spectrum(), b.spectrum())?.map(|v| 0.5 * v)?.sorted())
}

/// Two-matrix compression bound (CLI name `thm31`):
/// `s(X*AX - Y_r*BY_r) ≺_w s(A-B) + Θ↓ · (Spr⁺(A) + Spr⁺(B))/2`
/// with `Y_r = UX` for the direct rotation `U` of `range(X)` onto `range(Y)`.
///
/// With `strict_truncation` set, the `s(A-B)` term keeps only its largest
/// `k` entries before padding (the sharper variant that appears when the
/// bound is derived on the k-dimensional curve).
pub fn check_compression_bound(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    x: &Isometry,
    y: &Isometry,
    opts: &CheckOptions,
) -> Result<BoundReport, BoundsError> {
    require_pair(a, x, y)?;
    require_same_ambient(b, x)?;
    let (dec, _rot, y_r) = rotated_representative(x, y, opts)?;
    let k = x.sub_dim();

    let diff = compression(a, x)?
        .as_matrix()
        .clone()
        - compression(b, &y_r)?.as_matrix();
    let lhs = crate::spectra::singular_values(&crate::spectra::ComplexMatrix::new(diff)?)?;

    let s_diff = singular_values(&crate::spectra::ComplexMatrix::new(
        a.as_matrix() - b.as_matrix(),
    )?)?;
    let s_diff = if opts.strict_truncation {
        OrderedSpectrum::non_increasing(s_diff.values()[..k.min(s_diff.len())].to_vec())?
    } else {
        s_diff
    };
    let angle_term = padded_mul(
        dec.angles().spectrum(),
        &average_spread(&spectral_spread(a)?, &spectral_spread(b)?)?,
    )?
    .sorted();
    let rhs = padded_add(&s_diff, &angle_term)?.sorted();

    let tol = resolve_tolerance(opts, &lhs, &rhs);
    let mut tolerances = BTreeMap::new();
    tolerances.insert("tol_int".to_string(), opts.tol_int);
    tolerances.insert("tol_perp".to_string(), opts.tol_perp);
    if opts.strict_truncation {
        tolerances.insert("strict_truncation".to_string(), 1.0);
    }
    let digest = digest_inputs(&[
        DigestPart { role: "A", matrix: a.as_matrix() },
        DigestPart { role: "B", matrix: b.as_matrix() },
        DigestPart { role: "X", matrix: x.as_matrix() },
        DigestPart { role: "Y", matrix: y.as_matrix() },
    ]);
    Ok(BoundReport::build("thm31", lhs, rhs, tol, tolerances, digest, false)?)
}

/// Invariant-subspace compression bound (CLI name `thm32`):
/// `s(X*AX - Y_r*AY_r) ≺_w Θ²↓ · Spr⁺(A)`, requiring `range(X)` to be
/// invariant under `A` up to the invariance tolerance.
pub fn check_invariant_compression_bound(
    a: &HermitianMatrix,
    x: &Isometry,
    y: &Isometry,
    opts: &CheckOptions,
) -> Result<BoundReport, BoundsError> {
    require_pair(a, x, y)?;
    let res = require_invariant(a, x, opts)?;
    let (dec, _rot, y_r) = rotated_representative(x, y, opts)?;

    let diff = compression(a, x)?.as_matrix().clone() - compression(a, &y_r)?.as_matrix();
    let lhs = singular_values(&crate::spectra::ComplexMatrix::new(diff)?)?;
    let rhs = padded_mul(
        &dec.angles().squared(),
        spectral_spread(a)?.spectrum(),
    )?
    .sorted();

    let tol = resolve_tolerance(opts, &lhs, &rhs);
    let mut tolerances = BTreeMap::new();
    tolerances.insert("invariance_residual".to_string(), res);
    tolerances.insert("tol_int".to_string(), opts.tol_int);
    tolerances.insert("tol_perp".to_string(), opts.tol_perp);
    let digest = digest_inputs(&[
        DigestPart { role: "A", matrix: a.as_matrix() },
        DigestPart { role: "X", matrix: x.as_matrix() },
        DigestPart { role: "Y", matrix: y.as_matrix() },
    ]);
    Ok(BoundReport::build("thm32", lhs, rhs, tol, tolerances, digest, false)?)
}

/// Shared body of the Ritz-variation checks; `rhs_angles` picks the angle
/// weight (Θ, Θ², sin Θ, sin² Θ).
#[allow(clippy::too_many_arguments)]
fn ritz_variation_report(
    name: &str,
    a: &HermitianMatrix,
    x: &Isometry,
    y: &Isometry,
    invariant_mode: bool,
    conjectural: bool,
    rhs_angles: impl Fn(&PairDecomposition) -> OrderedSpectrum,
    opts: &CheckOptions,
) -> Result<BoundReport, BoundsError> {
    require_pair(a, x, y)?;
    let mut tolerances = BTreeMap::new();
    if invariant_mode {
        let res = require_invariant(a, x, opts)?;
        tolerances.insert("invariance_residual".to_string(), res);
    }
    let (dec, _rot, y_r) = rotated_representative(x, y, opts)?;

    let ritz_x = ritz_values(a, x)?;
    let ritz_y = ritz_values(a, y)?;

    // the rotated representative shares the range of Y, so its Ritz values
    // must agree with those of Y itself
    let ritz_y_r = ritz_values(a, &y_r)?;
    let gap = ritz_y
        .values()
        .iter()
        .zip(ritz_y_r.values())
        .map(|(u, v)| (u - v).abs())
        .fold(0.0, f64::max);
    let consistency_tol = 1e-8 * (1.0 + a.max_abs());
    if gap > consistency_tol {
        return Err(BoundsError::RitzConsistency {
            gap,
            tolerance: consistency_tol,
        });
    }
    tolerances.insert("ritz_consistency_gap".to_string(), gap);

    let lhs = abs_diff_desc(&ritz_x, &ritz_y)?;
    let rhs = padded_mul(&rhs_angles(&dec), spectral_spread(a)?.spectrum())?.sorted();

    let tol = resolve_tolerance(opts, &lhs, &rhs);
    let digest = digest_inputs(&[
        DigestPart { role: "A", matrix: a.as_matrix() },
        DigestPart { role: "X", matrix: x.as_matrix() },
        DigestPart { role: "Y", matrix: y.as_matrix() },
    ]);
    Ok(BoundReport::build(name, lhs, rhs, tol, tolerances, digest, conjectural)?)
}

/// Absolute Ritz-value variation bound (CLI names `ritz` / `ritz-invariant`):
/// `|λ(X*AX) - λ(Y*AY)| ≺_w Θ · Spr⁺(A)`, or `Θ² · Spr⁺(A)` in invariant
/// mode (which requires `range(X)` to be `A`-invariant).
pub fn check_ritz_variation(
    a: &HermitianMatrix,
    x: &Isometry,
    y: &Isometry,
    invariant_mode: bool,
    opts: &CheckOptions,
) -> Result<BoundReport, BoundsError> {
    let name = if invariant_mode { "ritz-invariant" } else { "ritz" };
    ritz_variation_report(
        name,
        a,
        x,
        y,
        invariant_mode,
        false,
        |dec| {
            if invariant_mode {
                dec.angles().squared()
            } else {
                dec.angles().spectrum().clone()
            }
        },
        opts,
    )
}

/// Conjectural sine-weighted variants (CLI names `conj1` / `conj2`):
/// `|λ(X*AX) - λ(Y*AY)| ≺_w sin(Θ) · Spr⁺(A)` (resp. `sin²(Θ) · Spr⁺(A)` in
/// invariant mode). A violation is a candidate counterexample to an open
/// conjecture, so reports are flagged conjectural and never treated as bugs.
pub fn check_sine_conjecture(
    a: &HermitianMatrix,
    x: &Isometry,
    y: &Isometry,
    invariant_mode: bool,
    opts: &CheckOptions,
) -> Result<BoundReport, BoundsError> {
    let name = if invariant_mode { "conj2" } else { "conj1" };
    ritz_variation_report(
        name,
        a,
        x,
        y,
        invariant_mode,
        true,
        |dec| {
            if invariant_mode {
                dec.angles().sin_squared()
            } else {
                dec.angles().sin()
            }
        },
        opts,
    )
}

/// Residual-tangent bound (CLI name `residual-tangent`), for pairs in acute
/// position (every angle below `π/2 - acute_tol`):
/// `|λ(X*AX) - λ(Y*AY)| ≺_w [s(P R_X) + s(P R_Y)] · tan(Θ)`
/// where `P` projects onto `range(X) + range(Y)`.
pub fn check_residual_tangent(
    a: &HermitianMatrix,
    x: &Isometry,
    y: &Isometry,
    opts: &CheckOptions,
) -> Result<BoundReport, BoundsError> {
    require_pair(a, x, y)?;
    let angles = principal_angles(x, y)?;
    let limit = std::f64::consts::FRAC_PI_2 - opts.acute_tol;
    if angles.max_angle() >= limit {
        return Err(BoundsError::NotAcute {
            angle: angles.max_angle(),
            tolerance: opts.acute_tol,
        });
    }

    // orthonormal basis of range(X) + range(Y)
    let d = x.ambient_dim();
    let k = x.sub_dim();
    let mut joined = nalgebra::DMatrix::<num_complex::Complex64>::zeros(d, 2 * k);
    joined.view_mut((0, 0), (d, k)).copy_from(x.as_matrix());
    joined.view_mut((0, k), (d, k)).copy_from(y.as_matrix());
    let (svals, u, _) = crate::spectra::svd_parts(&joined)?;
    let threshold = 1e-10 * 1.0f64.max(svals.first().copied().unwrap_or(0.0));
    let rank = svals.iter().filter(|&&s| s > threshold).count();
    let basis = u.columns(0, rank).into_owned();
    let projector = &basis * basis.adjoint();

    let r_x = residual(a, x)?;
    let r_y = residual(a, y)?;
    let s_x = crate::spectra::singular_values_of(&(&projector * r_x.as_matrix()))?;
    let s_y = crate::spectra::singular_values_of(&(&projector * r_y.as_matrix()))?;
    let rhs = padded_mul(&padded_add(&s_x, &s_y)?.sorted(), &angles.tan())?.sorted();
    let lhs = abs_diff_desc(&ritz_values(a, x)?, &ritz_values(a, y)?)?;

    let tol = resolve_tolerance(opts, &lhs, &rhs);
    let mut tolerances = BTreeMap::new();
    tolerances.insert("acute_tol".to_string(), opts.acute_tol);
    let digest = digest_inputs(&[
        DigestPart { role: "A", matrix: a.as_matrix() },
        DigestPart { role: "X", matrix: x.as_matrix() },
        DigestPart { role: "Y", matrix: y.as_matrix() },
    ]);
    Ok(BoundReport::build("residual-tangent", lhs, rhs, tol, tolerances, digest, false)?)
}
