//! Classical singular-value and spectral-spread inequalities.
//!
//! Every checker here verifies a known theorem on concrete inputs; a failure
//! beyond tolerance indicates an implementation bug, never a counterexample.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{
    eigenvalues_desc, singular_values, singular_values_of, spectral_spread, ComplexMatrix,
    HermitianMatrix, SpectraError,
};
use crate::vecmaj::{
    default_tolerance, majorizes, padded_add, padded_mul, sort_desc, submajorizes,
    MajorizationVerdict, OrderedSpectrum,
};

fn resolve_tol(tol: Option<f64>, lhs: &OrderedSpectrum, rhs: &OrderedSpectrum) -> f64 {
    tol.unwrap_or_else(|| default_tolerance(&[lhs.values(), rhs.values()]))
}

fn require_same_shape(c: &ComplexMatrix, d: &ComplexMatrix) -> Result<(), SpectraError> {
    if c.rows() != d.rows() || c.cols() != d.cols() {
        return Err(SpectraError::DimensionMismatch {
            left: format!("{}x{}", c.rows(), c.cols()),
            right: format!("{}x{}", d.rows(), d.cols()),
        });
    }
    Ok(())
}

/// Weyl's additive inequality: `s(C + D) ≺_w s(C) + s(D)`.
pub fn check_weyl_additive(
    c: &ComplexMatrix,
    d: &ComplexMatrix,
    tol: Option<f64>,
) -> Result<MajorizationVerdict, SpectraError> {
    require_same_shape(c, d)?;
    let lhs = singular_values_of(&(c.as_matrix() + d.as_matrix()))?;
    let rhs = padded_add(&singular_values(c)?, &singular_values(d)?)?;
    let tol = resolve_tol(tol, &lhs, &rhs);
    Ok(submajorizes(&lhs, &rhs, tol)?)
}

/// Weyl's multiplicative inequality for square matrices:
/// `s(CD) ≺_w s(C) s(D)` entrywise on the non-increasing lists.
pub fn check_weyl_multiplicative(
    c: &ComplexMatrix,
    d: &ComplexMatrix,
    tol: Option<f64>,
) -> Result<MajorizationVerdict, SpectraError> {
    require_same_shape(c, d)?;
    if c.rows() != c.cols() {
        return Err(SpectraError::NotSquare {
            rows: c.rows(),
            cols: c.cols(),
        });
    }
    let lhs = singular_values_of(&(c.as_matrix() * d.as_matrix()))?;
    let rhs = padded_mul(&singular_values(c)?, &singular_values(d)?)?;
    let tol = resolve_tol(tol, &lhs, &rhs);
    Ok(submajorizes(&lhs, &rhs, tol)?)
}

/// `s(Re(C)) ≺_w s(C)` for square `C`, with `Re(C) = (C + C*)/2`.
pub fn check_real_part(
    c: &ComplexMatrix,
    tol: Option<f64>,
) -> Result<MajorizationVerdict, SpectraError> {
    if c.rows() != c.cols() {
        return Err(SpectraError::NotSquare {
            rows: c.rows(),
            cols: c.cols(),
        });
    }
    let re = (c.as_matrix() + c.as_matrix().adjoint()).scale(0.5);
    let lhs = singular_values_of(&re)?;
    let rhs = singular_values(c)?;
    let tol = resolve_tol(tol, &lhs, &rhs);
    Ok(submajorizes(&lhs, &rhs, tol)?)
}

/// Both forms of Lidskii's additive inequality for Hermitian `C`, `D`.
#[derive(Debug, Clone)]
pub struct LidskiiReport {
    /// `λ(C) - λ(D) ≺ λ(C - D)` (majorization, traces agree).
    pub eigen_form: MajorizationVerdict,
    /// `|λ(C) - λ(D)| ≺_w s(C - D)`.
    pub singular_form: MajorizationVerdict,
}

pub fn check_lidskii(
    c: &HermitianMatrix,
    d: &HermitianMatrix,
    tol: Option<f64>,
) -> Result<LidskiiReport, SpectraError> {
    let diff = c.sub(d)?;
    let lc = eigenvalues_desc(c)?;
    let ld = eigenvalues_desc(d)?;
    let ldiff = eigenvalues_desc(&diff)?;

    let gap: Vec<f64> = lc
        .values()
        .iter()
        .zip(ld.values())
        .map(|(x, y)| x - y)
        .collect();
    let gap = OrderedSpectrum::raw(gap)?;
    let tol_e = tol.unwrap_or_else(|| default_tolerance(&[gap.values(), ldiff.values()]));
    let eigen_form = majorizes(&gap, &ldiff, tol_e)?;

    let abs_gap = sort_desc(&gap.values().iter().map(|v| v.abs()).collect::<Vec<_>>())?;
    let sdiff = singular_values_of(diff.as_matrix())?;
    let tol_s = tol.unwrap_or_else(|| default_tolerance(&[abs_gap.values(), sdiff.values()]));
    let singular_form = submajorizes(&abs_gap, &sdiff, tol_s)?;

    Ok(LidskiiReport {
        eigen_form,
        singular_form,
    })
}

/// Spectrum of the Hermitian embedding `Ê = [[0, E], [E*, 0]]`.
///
/// Checks the identity `λ(Ê) = (s(E), -s(E*))↓`, where `s(E)` carries the
/// zero-padded singular values of length `cols(E)` and `s(E*)` those of
/// length `rows(E)`. The verdict is an equality report: `worst_margin` is the
/// negated maximum entrywise deviation, so `holds` means both sorted spectra
/// agree within tolerance.
pub fn hat_embedding_spectrum(
    e: &ComplexMatrix,
    tol: Option<f64>,
) -> Result<MajorizationVerdict, SpectraError> {
    let (k, m) = (e.rows(), e.cols());
    let d = k + m;
    let mut hat = DMatrix::<Complex64>::zeros(d, d);
    hat.view_mut((0, k), (k, m)).copy_from(e.as_matrix());
    hat.view_mut((k, 0), (m, k)).copy_from(&e.as_matrix().adjoint());
    let hat = HermitianMatrix::new(hat)?;
    let lhs = eigenvalues_desc(&hat)?;

    let svals = singular_values(e)?;
    let mut expected: Vec<f64> = Vec::with_capacity(d);
    expected.extend(svals.values());
    expected.resize(m, 0.0); // s(E) has cols(E) entries after padding
    let mut negatives: Vec<f64> = svals.values().iter().map(|s| -s).collect();
    negatives.resize(k, 0.0);
    expected.extend(negatives);
    let rhs = sort_desc(&expected)?;

    let tol = resolve_tol(tol, &lhs, &rhs);
    let max_dev = lhs
        .values()
        .iter()
        .zip(rhs.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let mut verdict = submajorizes(&lhs, &rhs, tol)?;
    verdict.worst_margin = -max_dev;
    verdict.holds = max_dev <= tol;
    Ok(verdict)
}

/// Subadditivity of the spectral spread; the prefix sums satisfy
/// `Spr⁺(A + B) ≺_w Spr⁺(A) + Spr⁺(B)` and the trace gap is reported
/// separately (the spread vectors need not have equal totals).
#[derive(Debug, Clone)]
pub struct SpreadSubadditivityReport {
    pub verdict: MajorizationVerdict,
    pub trace_lhs: f64,
    pub trace_rhs: f64,
    /// `trace_lhs - trace_rhs`; non-positive whenever the verdict holds at the
    /// last prefix.
    pub trace_gap: f64,
}

pub fn check_spread_subadditive(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: Option<f64>,
) -> Result<SpreadSubadditivityReport, SpectraError> {
    if a.dim() != b.dim() {
        return Err(SpectraError::DimensionMismatch {
            left: format!("{0}x{0}", a.dim()),
            right: format!("{0}x{0}", b.dim()),
        });
    }
    let sum = HermitianMatrix::new(a.as_matrix() + b.as_matrix())?;
    let lhs = spectral_spread(&sum)?.spectrum().clone();
    let rhs = padded_add(
        spectral_spread(a)?.spectrum(),
        spectral_spread(b)?.spectrum(),
    )?;
    let tol = resolve_tol(tol, &lhs, &rhs);
    let verdict = submajorizes(&lhs, &rhs, tol)?;
    Ok(SpreadSubadditivityReport {
        trace_lhs: lhs.sum(),
        trace_rhs: rhs.sum(),
        trace_gap: lhs.sum() - rhs.sum(),
        verdict,
    })
}

/// Off-diagonal block bound: `2 s(H_{12}) ≺_w Spr⁺(H)` where `H_{12}` is the
/// top-right `k × (d-k)` block of the Hermitian matrix `H`.
pub fn check_offdiag_block(
    h: &HermitianMatrix,
    split_k: usize,
    tol: Option<f64>,
) -> Result<MajorizationVerdict, SpectraError> {
    let d = h.dim();
    if split_k == 0 || split_k >= d {
        return Err(SpectraError::BadSplit { split: split_k, dim: d });
    }
    let block = h
        .as_matrix()
        .view((0, split_k), (split_k, d - split_k))
        .into_owned();
    let lhs = singular_values_of(&block)?.map(|s| 2.0 * s)?;
    let rhs = spectral_spread(h)?.spectrum().clone();
    let tol = resolve_tol(tol, &lhs, &rhs);
    Ok(submajorizes(&lhs, &rhs, tol)?)
}

/// Generalized commutator bound:
/// `s(A₁ D - D A₂) ≺_w s(D) · Spr⁺(A₁ ⊕ A₂)` for Hermitian `A₁`, `A₂` of the
/// same dimension `k` and an arbitrary `k × k` matrix `D`.
pub fn check_generalized_commutator(
    a1: &HermitianMatrix,
    a2: &HermitianMatrix,
    d: &ComplexMatrix,
    tol: Option<f64>,
) -> Result<MajorizationVerdict, SpectraError> {
    let k = a1.dim();
    if a2.dim() != k || d.rows() != k || d.cols() != k {
        return Err(SpectraError::DimensionMismatch {
            left: format!("{k}x{k}"),
            right: format!("{}x{} / {}x{}", a2.dim(), a2.dim(), d.rows(), d.cols()),
        });
    }
    let lhs = singular_values_of(&(a1.as_matrix() * d.as_matrix() - d.as_matrix() * a2.as_matrix()))?;
    let rhs = padded_mul(
        &singular_values(d)?,
        spectral_spread(&a1.direct_sum(a2))?.spectrum(),
    )?;
    let tol = resolve_tol(tol, &lhs, &rhs);
    Ok(submajorizes(&lhs, &rhs, tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::tests::{antidiagonal_coupling, random_complex, random_hermitian};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn weyl_additive_trivial_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = ComplexMatrix::new(random_complex(&mut rng, 4, 4)).unwrap();
        let neg = ComplexMatrix::new(-c.as_matrix()).unwrap();
        let v = check_weyl_additive(&c, &neg, None).unwrap();
        assert!(v.holds);
        assert!(v.lhs_sorted.iter().all(|&s| s.abs() < 1e-14));

        let id = ComplexMatrix::new(DMatrix::identity(3, 3)).unwrap();
        let v = check_weyl_additive(&id, &id, None).unwrap();
        assert!(v.holds);
        assert!((v.worst_margin).abs() < 1e-12, "equality case");
    }

    #[test]
    fn weyl_and_real_part_hold_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let n = rng.gen_range(1..=8);
            let c = ComplexMatrix::new(random_complex(&mut rng, n, n)).unwrap();
            let d = ComplexMatrix::new(random_complex(&mut rng, n, n)).unwrap();
            assert!(check_weyl_additive(&c, &d, None).unwrap().holds);
            assert!(check_weyl_multiplicative(&c, &d, None).unwrap().holds);
            assert!(check_real_part(&c, None).unwrap().holds);
        }
    }

    #[test]
    fn weyl_additive_rejects_shape_mismatch() {
        let c = ComplexMatrix::zeros(2, 3);
        let d = ComplexMatrix::zeros(3, 2);
        assert!(matches!(
            check_weyl_additive(&c, &d, None),
            Err(SpectraError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn lidskii_on_equal_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = random_hermitian(&mut rng, 5);
        let report = check_lidskii(&c, &c, None).unwrap();
        assert!(report.eigen_form.holds);
        assert!(report.singular_form.holds);
        assert!(report.singular_form.lhs_sorted.iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn lidskii_equality_on_rotated_compression_pair() {
        // X*AX = 0 and Y_r*AY_r = sin(2θ)·diag(a, b) realize equality in the
        // singular-value form.
        let (a_val, b_val, theta) = (2.0f64, 1.0f64, std::f64::consts::FRAC_PI_6);
        let a = antidiagonal_coupling(a_val, b_val);
        let y_r = DMatrix::<Complex64>::from_fn(4, 2, |i, j| {
            let v = match (i, j) {
                (0, 0) | (1, 1) => theta.cos(),
                (2, 0) | (3, 1) => theta.sin(),
                _ => 0.0,
            };
            Complex64::new(v, 0.0)
        });
        let comp = HermitianMatrix::new(y_r.adjoint() * a.as_matrix() * &y_r).unwrap();
        let zero = HermitianMatrix::new(DMatrix::zeros(2, 2)).unwrap();
        let report = check_lidskii(&zero, &comp, None).unwrap();
        assert!(report.eigen_form.holds);
        assert!(report.singular_form.holds);
        // equality: every partial-sum margin vanishes
        assert!(report.singular_form.worst_margin.abs() < 1e-12);
        let s2t = (2.0 * theta).sin();
        assert!((report.singular_form.lhs_sorted[0] - a_val * s2t).abs() < 1e-12);
        assert!((report.singular_form.lhs_sorted[1] - b_val * s2t).abs() < 1e-12);
    }

    #[test]
    fn lidskii_holds_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..200 {
            let d = rng.gen_range(1..=8);
            let c = random_hermitian(&mut rng, d);
            let e = random_hermitian(&mut rng, d);
            let report = check_lidskii(&c, &e, None).unwrap();
            assert!(report.eigen_form.holds);
            assert!(report.singular_form.holds);
        }
    }

    #[test]
    fn hat_embedding_small_cases() {
        let e = ComplexMatrix::from_real_rows(&[vec![1.0]]).unwrap();
        let v = hat_embedding_spectrum(&e, None).unwrap();
        assert!(v.holds);
        assert!((v.lhs_sorted[0] - 1.0).abs() < 1e-12);
        assert!((v.lhs_sorted[1] + 1.0).abs() < 1e-12);

        let zero = ComplexMatrix::zeros(2, 3);
        let v = hat_embedding_spectrum(&zero, None).unwrap();
        assert!(v.holds);
        assert!(v.lhs_sorted.iter().all(|&x| x.abs() < 1e-14));
    }

    #[test]
    fn hat_embedding_matches_on_random_rectangles() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..100 {
            let k = rng.gen_range(1..6);
            let m = rng.gen_range(1..6);
            let e = ComplexMatrix::new(random_complex(&mut rng, k, m)).unwrap();
            let v = hat_embedding_spectrum(&e, Some(1e-10)).unwrap();
            assert!(v.holds, "deviation {:.3e}", -v.worst_margin);
        }
    }

    #[test]
    fn spread_subadditivity_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let a = random_hermitian(&mut rng, 6);
        let zero = HermitianMatrix::new(DMatrix::zeros(6, 6)).unwrap();
        let r = check_spread_subadditive(&a, &zero, None).unwrap();
        assert!(r.verdict.holds);
        assert!(r.trace_gap.abs() < 1e-10, "B = 0 gives equality");

        let neg = HermitianMatrix::new(-a.as_matrix()).unwrap();
        let r = check_spread_subadditive(&a, &neg, None).unwrap();
        assert!(r.verdict.holds);
        assert!(r.verdict.lhs_sorted.iter().all(|&v| v.abs() < 1e-12));

        for _ in 0..200 {
            let d = rng.gen_range(2..=8);
            let x = random_hermitian(&mut rng, d);
            let y = random_hermitian(&mut rng, d);
            let r = check_spread_subadditive(&x, &y, None).unwrap();
            assert!(r.verdict.holds);
            assert!(r.trace_gap <= r.verdict.tolerance);
        }
    }

    #[test]
    fn offdiag_block_cases() {
        // block diagonal: zero off-diagonal block
        let h = HermitianMatrix::from_real_rows(&[
            vec![3.0, 1.0, 0.0, 0.0],
            vec![1.0, 2.0, 0.0, 0.0],
            vec![0.0, 0.0, -1.0, 0.5],
            vec![0.0, 0.0, 0.5, 0.0],
        ])
        .unwrap();
        let v = check_offdiag_block(&h, 2, None).unwrap();
        assert!(v.holds);
        assert!(v.lhs_sorted.iter().all(|&x| x.abs() < 1e-14));

        // 2x2 flip: λ = (1, -1), spread = (2), equality
        let h = HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let v = check_offdiag_block(&h, 1, None).unwrap();
        assert!(v.holds);
        assert!(v.worst_margin.abs() < 1e-12);

        assert!(matches!(
            check_offdiag_block(&h, 2, None),
            Err(SpectraError::BadSplit { .. })
        ));
    }

    #[test]
    fn offdiag_block_holds_for_all_splits() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        for _ in 0..60 {
            let d = rng.gen_range(2..=9);
            let h = random_hermitian(&mut rng, d);
            for k in 1..d {
                assert!(check_offdiag_block(&h, k, None).unwrap().holds);
            }
        }
    }

    #[test]
    fn generalized_commutator_cases() {
        let id = HermitianMatrix::identity(3);
        let d = ComplexMatrix::new(DMatrix::identity(3, 3)).unwrap();
        let v = check_generalized_commutator(&id, &id, &d, None).unwrap();
        assert!(v.holds);
        assert!(v.lhs_sorted.iter().all(|&x| x.abs() < 1e-14));

        let mut rng = ChaCha8Rng::seed_from_u64(97);
        for _ in 0..200 {
            let k = rng.gen_range(1..=6);
            let a1 = random_hermitian(&mut rng, k);
            let a2 = random_hermitian(&mut rng, k);
            let d = ComplexMatrix::new(random_complex(&mut rng, k, k)).unwrap();
            assert!(check_generalized_commutator(&a1, &a2, &d, None).unwrap().holds);
        }
    }
}
