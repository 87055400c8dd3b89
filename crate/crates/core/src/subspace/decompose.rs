//! Five-part orthogonal decomposition induced by a pair of subspaces.
//!
//! Given isometries `X`, `Y` with equal dimensions, the principal cosines
//! `σ_j = s_j(X*Y)` are classified into three bands: `σ ≥ 1 - tol_int` counts
//! toward the intersection `X ∩ Y` (dimension `s`), `σ ≤ tol_perp` toward the
//! perpendicular pairs `X ∩ Y⊥` / `X⊥ ∩ Y` (dimension `p`), and the remainder
//! is the generic part (dimension `r` on each side). The result carries
//! orthonormal bases for all blocks; together with the orthogonal complement
//! of everything they assemble to a basis of ℂ^d in which the direct rotation
//! is block diagonal.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{require_compatible, Isometry, PrincipalAngles, SubspaceError};
use crate::vecmaj::OrderedSpectrum;

/// Default classification band for principal cosines (`tol_int` and `tol_perp`).
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-8;

/// Acceptable Gram residual for the assembled d×d basis.
const GRAM_TOL: f64 = 1e-10;

/// A principal cosine that fell within ten tolerances of a classification
/// threshold; the classification is recorded but flagged as fragile.
#[derive(Debug, Clone, PartialEq)]
pub struct BorderlineCosine {
    /// Index into the non-increasing singular values of `X*Y`.
    pub index: usize,
    pub cosine: f64,
    /// The threshold it nearly touched (`1 - tol_int` or `tol_perp`).
    pub threshold: f64,
}

/// The orthogonal decomposition of ℂ^d induced by a subspace pair, with the
/// angle data of the rotating block.
///
/// Basis columns (each block orthonormal, all blocks mutually orthogonal):
/// * `basis_intersection` — `X ∩ Y`, dimension `s`;
/// * `basis_s1` — the rotating block inside `X` (perpendicular directions
///   first, then generic ones by decreasing angle), dimension `p + r`;
/// * `basis_s2` — the partner block inside `X⊥` the rotation moves into,
///   aligned column-by-column with `basis_s1`;
/// * `basis_complement` — `X⊥ ∩ Y⊥`, dimension `d - s - 2(p + r)`.
///
/// `theta_prime` lists the rotation angles for the `basis_s1` columns:
/// exactly `π/2` for the `p` perpendicular directions, then the generic
/// angles in `(0, π/2)`, non-increasing overall.
#[derive(Debug, Clone)]
pub struct PairDecomposition {
    pub s: usize,
    pub p: usize,
    pub r: usize,
    pub theta_prime: OrderedSpectrum,
    pub basis_intersection: DMatrix<Complex64>,
    pub basis_s1: DMatrix<Complex64>,
    pub basis_s2: DMatrix<Complex64>,
    pub basis_complement: DMatrix<Complex64>,
    pub borderline: Vec<BorderlineCosine>,
}

impl PairDecomposition {
    pub fn ambient_dim(&self) -> usize {
        self.basis_intersection.nrows()
    }

    /// `k = s + p + r`.
    pub fn sub_dim(&self) -> usize {
        self.s + self.p + self.r
    }

    /// Dimension of the generic part `G`, which splits evenly between `X` and `X⊥`.
    pub fn generic_dim(&self) -> usize {
        2 * self.r
    }

    /// Full-ambient basis `[intersection | s1 | s2 | complement]`.
    pub fn assembled_basis(&self) -> DMatrix<Complex64> {
        let d = self.ambient_dim();
        let mut b = DMatrix::zeros(d, d);
        let mut col = 0;
        for block in [
            &self.basis_intersection,
            &self.basis_s1,
            &self.basis_s2,
            &self.basis_complement,
        ] {
            b.view_mut((0, col), (d, block.ncols())).copy_from(block);
            col += block.ncols();
        }
        b
    }

    /// The principal angles `Θ(X, Y) = (θ', 0_s)`, non-increasing.
    pub fn angles(&self) -> PrincipalAngles {
        let mut values = self.theta_prime.values().to_vec();
        values.extend(std::iter::repeat_n(0.0, self.s));
        PrincipalAngles::from_sorted(
            OrderedSpectrum::non_increasing(values)
                .expect("theta' is non-increasing and non-negative"),
        )
    }
}

/// Builds the pair decomposition by classifying the principal cosines of
/// `X*Y` and assembling principal-vector bases.
///
/// A cosine within `10 ×` the relevant tolerance of a threshold is recorded
/// in `borderline` rather than treated as an error.
pub fn decompose_pair(
    x: &Isometry,
    y: &Isometry,
    tol_int: f64,
    tol_perp: f64,
) -> Result<PairDecomposition, SubspaceError> {
    require_compatible(x, y)?;
    let d = x.ambient_dim();
    let k = x.sub_dim();

    let m = x.as_matrix().adjoint() * y.as_matrix();
    let (sigmas, w, v) = crate::spectra::svd_parts(&m)?;

    // classify in reverse singular-value order: ascending cosine, i.e.
    // descending angle, which is the order theta' wants
    let mut perp: Vec<usize> = Vec::new();
    let mut generic: Vec<usize> = Vec::new();
    let mut intersection: Vec<usize> = Vec::new();
    let mut borderline = Vec::new();
    for i in (0..k).rev() {
        let sigma = sigmas[i].clamp(0.0, 1.0);
        if sigma >= 1.0 - tol_int {
            intersection.push(i);
        } else if sigma <= tol_perp {
            perp.push(i);
        } else {
            generic.push(i);
        }
        if (sigma - (1.0 - tol_int)).abs() <= 10.0 * tol_int
            || (sigma - tol_perp).abs() <= 10.0 * tol_perp
        {
            let threshold = if (sigma - (1.0 - tol_int)).abs() <= 10.0 * tol_int {
                1.0 - tol_int
            } else {
                tol_perp
            };
            borderline.push(BorderlineCosine {
                index: i,
                cosine: sigma,
                threshold,
            });
        }
    }
    let (p, r, s) = (perp.len(), generic.len(), intersection.len());

    // principal vector pairs: columns of X·W and Y·V satisfy x_i* y_j = σ_i δ_ij
    let px = x.as_matrix() * &w;
    let py = y.as_matrix() * &v;

    let mut basis_intersection = DMatrix::<Complex64>::zeros(d, s);
    for (col, &i) in intersection.iter().enumerate() {
        basis_intersection.set_column(col, &px.column(i));
    }

    let rotating: Vec<usize> = perp.iter().chain(generic.iter()).copied().collect();
    let mut basis_s1 = DMatrix::<Complex64>::zeros(d, p + r);
    let mut basis_s2 = DMatrix::<Complex64>::zeros(d, p + r);
    let mut theta = Vec::with_capacity(p + r);
    for (col, &i) in rotating.iter().enumerate() {
        basis_s1.set_column(col, &px.column(i));
        // partner direction: the Y principal vector stripped of its X component
        let yi = py.column(i).into_owned();
        let coeffs = x.as_matrix().adjoint() * &yi;
        let mut z = yi - x.as_matrix() * coeffs;
        let norm = z.norm();
        if norm < tol_perp {
            return Err(SubspaceError::Numerical(format!(
                "partner direction for principal pair {i} degenerated (norm {norm:.3e})"
            )));
        }
        z /= Complex64::new(norm, 0.0);
        basis_s2.set_column(col, &z);
        theta.push(if col < p {
            std::f64::consts::FRAC_PI_2
        } else {
            sigmas[i].clamp(0.0, 1.0).acos()
        });
    }

    let basis_complement = orthogonal_complement(
        d,
        &[&basis_intersection, &basis_s1, &basis_s2],
    );

    let dec = PairDecomposition {
        s,
        p,
        r,
        theta_prime: OrderedSpectrum::non_increasing(theta)?,
        basis_intersection,
        basis_s1,
        basis_s2,
        basis_complement,
        borderline,
    };

    let b = dec.assembled_basis();
    let gram_defect = (b.adjoint() * &b - DMatrix::<Complex64>::identity(d, d))
        .iter()
        .fold(0.0f64, |m, z| m.max(z.norm()));
    if gram_defect > GRAM_TOL {
        return Err(SubspaceError::Numerical(format!(
            "assembled basis lost orthonormality (Gram defect {gram_defect:.3e})"
        )));
    }
    Ok(dec)
}

/// Orthonormal basis of the orthogonal complement of the given blocks,
/// completed deterministically by Householder QR of `[blocks | I]`.
fn orthogonal_complement(
    d: usize,
    blocks: &[&DMatrix<Complex64>],
) -> DMatrix<Complex64> {
    let m0: usize = blocks.iter().map(|b| b.ncols()).sum();
    if m0 >= d {
        return DMatrix::zeros(d, 0);
    }
    let mut work = DMatrix::<Complex64>::zeros(d, m0 + d);
    let mut col = 0;
    for block in blocks {
        work.view_mut((0, col), (d, block.ncols())).copy_from(block);
        col += block.ncols();
    }
    work.view_mut((0, m0), (d, d))
        .copy_from(&DMatrix::identity(d, d));
    let q = nalgebra::QR::new(work).q();
    q.columns(m0, d - m0).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::tests::{random_isometry, tilted_plane};
    use crate::subspace::principal_angles;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn max_abs(m: &DMatrix<Complex64>) -> f64 {
        m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    #[test]
    fn identical_subspaces_are_pure_intersection() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = random_isometry(&mut rng, 6, 3);
        let dec =
            decompose_pair(&x, &x, DEFAULT_CLASSIFY_TOL, DEFAULT_CLASSIFY_TOL).unwrap();
        assert_eq!((dec.s, dec.p, dec.r), (3, 0, 0));
        assert!(dec.theta_prime.is_empty());
        assert_eq!(dec.generic_dim(), 0);
        assert_eq!(dec.basis_complement.ncols(), 3);
    }

    #[test]
    fn tilted_plane_is_fully_generic() {
        let x = Isometry::coordinate(4, 2).unwrap();
        for theta in [0.3, std::f64::consts::FRAC_PI_6, 1.2] {
            let y = tilted_plane(theta);
            let dec =
                decompose_pair(&x, &y, DEFAULT_CLASSIFY_TOL, DEFAULT_CLASSIFY_TOL).unwrap();
            assert_eq!((dec.s, dec.p, dec.r), (0, 0, 2));
            for t in dec.theta_prime.values() {
                assert!((t - theta).abs() < 1e-12);
            }
            // no complement left in dimension 4
            assert_eq!(dec.basis_complement.ncols(), 0);
        }
    }

    #[test]
    fn mixed_intersection_and_perpendicular_pair() {
        // X = span{e1, e2}, Y = span{e2, e3}: intersection e2, perpendicular e1/e3
        let x = Isometry::coordinate(4, 2).unwrap();
        let y = Isometry::new(DMatrix::<Complex64>::from_fn(4, 2, |i, j| {
            let v = match (i, j) {
                (1, 0) | (2, 1) => 1.0,
                _ => 0.0,
            };
            Complex64::new(v, 0.0)
        }))
        .unwrap();
        let dec = decompose_pair(&x, &y, DEFAULT_CLASSIFY_TOL, DEFAULT_CLASSIFY_TOL).unwrap();
        assert_eq!((dec.s, dec.p, dec.r), (1, 1, 0));
        assert!((dec.theta_prime.values()[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        // angles: (π/2, 0)
        let angles = dec.angles();
        assert!((angles.values()[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!(angles.values()[1].abs() < 1e-12);
    }

    #[test]
    fn dimensions_and_projector_rank_oracle_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..25 {
            let d = rng.gen_range(2..=9);
            let k = rng.gen_range(1..=d.max(2) - 1);
            let x = random_isometry(&mut rng, d, k);
            let y = random_isometry(&mut rng, d, k);
            let dec =
                decompose_pair(&x, &y, DEFAULT_CLASSIFY_TOL, DEFAULT_CLASSIFY_TOL).unwrap();
            assert_eq!(dec.sub_dim(), k, "k = s + p + r");

            // oracle: p from either side as the number of unit singular values
            // of P_X (I - P_Y) and (I - P_X) P_Y
            let id = DMatrix::<Complex64>::identity(d, d);
            let px = x.projector();
            let py = y.projector();
            let count_units = |m: &DMatrix<Complex64>| {
                crate::spectra::singular_values_of(m)
                    .unwrap()
                    .values()
                    .iter()
                    .filter(|&&s| s >= 1.0 - 1e-8)
                    .count()
            };
            let p_from_x = count_units(&(&px * (&id - &py)));
            let p_from_y = count_units(&((&id - &px) * &py));
            assert_eq!(p_from_x, p_from_y, "p computed from either side");
            assert_eq!(dec.p, p_from_x);
        }
    }

    #[test]
    fn near_threshold_cosines_are_flagged_borderline() {
        // cos θ = 0.995 sits inside the 10x band around 1 - tol_int = 0.999
        let x = Isometry::coordinate(4, 2).unwrap();
        let y = tilted_plane(0.995f64.acos());
        let dec = decompose_pair(&x, &y, 1e-3, 1e-8).unwrap();
        assert_eq!((dec.s, dec.p, dec.r), (0, 0, 2));
        assert_eq!(dec.borderline.len(), 2);
        for warning in &dec.borderline {
            assert!((warning.cosine - 0.995).abs() < 1e-12);
            assert!((warning.threshold - 0.999).abs() < 1e-12);
        }

        // well-separated cosines produce no warnings
        let clean = decompose_pair(&x, &tilted_plane(0.7), 1e-8, 1e-8).unwrap();
        assert!(clean.borderline.is_empty());
    }

    #[test]
    fn forced_intersection_when_subspaces_are_large() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let d = 6;
        let k = 4; // 2k > d forces dim(X ∩ Y) ≥ 2k - d = 2
        let x = random_isometry(&mut rng, d, k);
        let y = random_isometry(&mut rng, d, k);
        let dec = decompose_pair(&x, &y, DEFAULT_CLASSIFY_TOL, DEFAULT_CLASSIFY_TOL).unwrap();
        assert!(dec.s >= 2);
        assert_eq!(dec.sub_dim(), k);
    }

    #[test]
    fn assembled_basis_is_orthonormal_and_angles_match() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let d = rng.gen_range(2..=9);
            let k = rng.gen_range(1..=d - 1);
            let x = random_isometry(&mut rng, d, k);
            let y = random_isometry(&mut rng, d, k);
            let dec =
                decompose_pair(&x, &y, DEFAULT_CLASSIFY_TOL, DEFAULT_CLASSIFY_TOL).unwrap();

            let b = dec.assembled_basis();
            let gram = b.adjoint() * &b - DMatrix::<Complex64>::identity(d, d);
            assert!(max_abs(&gram) < 1e-12);

            let direct = principal_angles(&x, &y).unwrap();
            for (a, b) in dec.angles().values().iter().zip(direct.values()) {
                assert!((a - b).abs() < 1e-7, "{a} vs {b}");
            }
        }
    }
}
