//! Validated dense complex matrices and their spectra.
//!
//! Matrix types validate their defining property at construction
//! ([`HermitianMatrix`] symmetrizes inputs whose defect is below tolerance and
//! rejects the rest). Eigenvalues and singular values are always returned
//! non-increasing, and every eigendecomposition is verified against its
//! reconstruction residual before being handed to callers.

mod checks;

pub use checks::{
    check_generalized_commutator, check_lidskii, check_offdiag_block, check_real_part,
    check_spread_subadditive, check_weyl_additive, check_weyl_multiplicative,
    hat_embedding_spectrum, LidskiiReport, SpreadSubadditivityReport,
};

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::vecmaj::{OrderedSpectrum, VecMajError};

/// Names of the inequality checks this module provides, as exposed on the CLI.
pub const CHECK_NAMES: &[&str] = &[
    "lidskii",
    "weyl-add",
    "weyl-mul",
    "real-part",
    "offdiag",
    "commutator",
    "spread-subadd",
    "hat",
];

#[derive(Debug, Error)]
pub enum SpectraError {
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds tolerance {tolerance:.3e}")]
    NotHermitian { defect: f64, tolerance: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },
    #[error("eigendecomposition failed: reconstruction residual {residual:.3e} exceeds {tolerance:.3e}")]
    EigenResidual { residual: f64, tolerance: f64 },
    #[error("eigensolver did not converge")]
    EigenNonConvergence,
    #[error("singular value decomposition did not converge")]
    SvdNonConvergence,
    #[error("singular value decomposition failed: reconstruction residual {residual:.3e} exceeds {tolerance:.3e}")]
    SvdResidual { residual: f64, tolerance: f64 },
    #[error("split index {split} out of range for dimension {dim}")]
    BadSplit { split: usize, dim: usize },
    #[error(transparent)]
    Vector(#[from] VecMajError),
}

fn check_entries_finite(m: &DMatrix<Complex64>) -> Result<(), SpectraError> {
    for col in 0..m.ncols() {
        for row in 0..m.nrows() {
            let z = m[(row, col)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(SpectraError::NonFinite { row, col });
            }
        }
    }
    Ok(())
}

fn max_abs_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// An arbitrary rectangular complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<Complex64>,
}

impl ComplexMatrix {
    pub fn new(data: DMatrix<Complex64>) -> Result<Self, SpectraError> {
        check_entries_finite(&data)?;
        Ok(Self { data })
    }

    /// Builds from a row-major table of real entries.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, SpectraError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let data = DMatrix::from_fn(nrows, ncols, |i, j| Complex64::new(rows[i][j], 0.0));
        Self::new(data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            data: DMatrix::zeros(rows, cols),
        }
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        max_abs_entry(&self.data)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// A validated Hermitian matrix, stored exactly symmetrized as `(A + A*)/2`.
///
/// Construction accepts inputs whose Hermitian defect `‖A - A*‖_max` is at
/// most `1e-12 * (1 + ‖A‖_max)` and records the applied correction; anything
/// beyond that is rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: DMatrix<Complex64>,
    hermiticity_defect: f64,
}

impl HermitianMatrix {
    pub fn new(data: DMatrix<Complex64>) -> Result<Self, SpectraError> {
        Self::with_tolerance(data, None)
    }

    /// As [`HermitianMatrix::new`] with an explicit defect tolerance.
    pub fn with_tolerance(
        data: DMatrix<Complex64>,
        hermiticity_tol: Option<f64>,
    ) -> Result<Self, SpectraError> {
        if data.nrows() != data.ncols() {
            return Err(SpectraError::NotSquare {
                rows: data.nrows(),
                cols: data.ncols(),
            });
        }
        check_entries_finite(&data)?;
        let tolerance = hermiticity_tol.unwrap_or_else(|| 1e-12 * (1.0 + max_abs_entry(&data)));
        let adj = data.adjoint();
        let defect = max_abs_entry(&(&data - &adj));
        if defect > tolerance {
            return Err(SpectraError::NotHermitian { defect, tolerance });
        }
        let symmetrized = (&data + &adj).scale(0.5);
        Ok(Self {
            data: symmetrized,
            hermiticity_defect: defect,
        })
    }

    /// Builds from a row-major table of real entries (must be symmetric).
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, SpectraError> {
        Self::new(ComplexMatrix::from_real_rows(rows)?.into_matrix())
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            data: DMatrix::identity(dim, dim),
            hermiticity_defect: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    /// Max-norm of the anti-Hermitian part of the original input.
    pub fn hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect
    }

    pub fn max_abs(&self) -> f64 {
        max_abs_entry(&self.data)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Block-diagonal direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &HermitianMatrix) -> HermitianMatrix {
        let n = self.dim();
        let m = other.dim();
        let mut out = DMatrix::zeros(n + m, n + m);
        out.view_mut((0, 0), (n, n)).copy_from(&self.data);
        out.view_mut((n, n), (m, m)).copy_from(&other.data);
        HermitianMatrix {
            data: out,
            hermiticity_defect: self.hermiticity_defect.max(other.hermiticity_defect),
        }
    }

    /// Difference `self - other`; exact Hermitian by construction.
    pub fn sub(&self, other: &HermitianMatrix) -> Result<HermitianMatrix, SpectraError> {
        if self.dim() != other.dim() {
            return Err(SpectraError::DimensionMismatch {
                left: format!("{0}x{0}", self.dim()),
                right: format!("{0}x{0}", other.dim()),
            });
        }
        Ok(HermitianMatrix {
            data: &self.data - &other.data,
            hermiticity_defect: 0.0,
        })
    }
}

/// Eigenvalues (non-increasing) together with the matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: OrderedSpectrum,
    pub vectors: DMatrix<Complex64>,
}

/// Unitary plane rotation diagonalizing the Hermitian 2×2 block
/// `[[alpha, beta], [conj(beta), gamma]]` with `b = |beta| > 0`.
///
/// Returns `(c, s_fwd)` for the column update
/// `(g_p, g_q) <- (c g_p + s_fwd g_q, c g_q - conj(s_fwd) g_p)`.
fn plane_rotation(alpha: f64, gamma: f64, beta: Complex64, b: f64) -> (f64, Complex64) {
    let phase = beta / Complex64::new(b, 0.0);
    let tau = (alpha - gamma) / (2.0 * b);
    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    (c, phase.conj() * s)
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Each sweep annihilates every off-diagonal pair with a unitary plane
/// rotation; convergence is quadratic once the off-diagonal mass is small.
/// Returns unsorted eigenvalues on the diagonal and the accumulated unitary.
fn jacobi_hermitian(
    a: &DMatrix<Complex64>,
) -> Result<(Vec<f64>, DMatrix<Complex64>), SpectraError> {
    const MAX_SWEEPS: usize = 60;
    let d = a.nrows();
    let mut m = a.clone();
    let mut v = DMatrix::<Complex64>::identity(d, d);
    if d < 2 {
        return Ok(((0..d).map(|i| m[(i, i)].re).collect(), v));
    }
    // rotations are unitary, so the Frobenius scale is invariant; entries at
    // or below the eps * scale noise floor are not worth annihilating
    let norm = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..d - 1 {
            for q in p + 1..d {
                let beta = m[(p, q)];
                let b = beta.norm();
                let alpha = m[(p, p)].re;
                let gamma = m[(q, q)].re;
                let threshold = 0.5
                    * f64::EPSILON
                    * (alpha.abs() + gamma.abs() + norm)
                    + f64::MIN_POSITIVE;
                if b <= threshold {
                    continue;
                }
                rotated = true;
                let (c, s_fwd) = plane_rotation(alpha, gamma, beta, b);
                for i in 0..d {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * c + miq * s_fwd;
                    m[(i, q)] = miq * c - mip * s_fwd.conj();
                }
                for j in 0..d {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = mpj * c + mqj * s_fwd.conj();
                    m[(q, j)] = mqj * c - mpj * s_fwd;
                }
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
                for i in 0..d {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c + viq * s_fwd;
                    v[(i, q)] = viq * c - vip * s_fwd.conj();
                }
            }
        }
        if !rotated {
            let values = (0..d).map(|i| m[(i, i)].re).collect();
            return Ok((values, v));
        }
    }
    Err(SpectraError::EigenNonConvergence)
}

/// Factors `(singular_values, u, v)` with `m = u * diag(s) * v.adjoint()`.
pub(crate) type SvdFactors = (Vec<f64>, DMatrix<Complex64>, DMatrix<Complex64>);

/// One-sided Jacobi SVD for tall-or-square matrices.
///
/// Right rotations orthogonalize the columns of the working copy; the
/// singular values are the limiting column norms, the right factor is the
/// accumulated unitary, and the left factor normalizes the surviving columns
/// (zero-norm columns are completed deterministically). Returns factors with
/// `m = u * diag(s) * v.adjoint()`, `s` non-increasing.
fn jacobi_svd(m: &DMatrix<Complex64>) -> Result<SvdFactors, SpectraError> {
    if m.nrows() < m.ncols() {
        let (s, u, v) = jacobi_svd(&m.adjoint())?;
        return Ok((s, v, u));
    }
    const MAX_SWEEPS: usize = 60;
    let (rows, n) = m.shape();
    let mut g = m.clone();
    let mut v = DMatrix::<Complex64>::identity(n, n);
    let scale = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let negligible = (f64::EPSILON * (1.0 + scale)).powi(2);

    if n > 1 {
        let mut converged = false;
        for _sweep in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let alpha: f64 = g.column(p).iter().map(|z| z.norm_sqr()).sum();
                    let gamma: f64 = g.column(q).iter().map(|z| z.norm_sqr()).sum();
                    if alpha <= negligible || gamma <= negligible {
                        continue;
                    }
                    let beta: Complex64 = g
                        .column(p)
                        .iter()
                        .zip(g.column(q).iter())
                        .map(|(a, b)| a.conj() * b)
                        .sum();
                    let b = beta.norm();
                    if b <= 32.0 * f64::EPSILON * (alpha * gamma).sqrt() + f64::MIN_POSITIVE {
                        continue;
                    }
                    rotated = true;
                    let (c, s_fwd) = plane_rotation(alpha, gamma, beta, b);
                    for i in 0..rows {
                        let gip = g[(i, p)];
                        let giq = g[(i, q)];
                        g[(i, p)] = gip * c + giq * s_fwd;
                        g[(i, q)] = giq * c - gip * s_fwd.conj();
                    }
                    for i in 0..n {
                        let vip = v[(i, p)];
                        let viq = v[(i, q)];
                        v[(i, p)] = vip * c + viq * s_fwd;
                        v[(i, q)] = viq * c - vip * s_fwd.conj();
                    }
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(SpectraError::SvdNonConvergence);
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n)
        .map(|j| g.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite norms"));

    let cutoff = f64::EPSILON * (1.0 + scale);
    let mut svals = Vec::with_capacity(n);
    let mut u = DMatrix::<Complex64>::zeros(rows, n);
    let mut v_sorted = DMatrix::<Complex64>::zeros(n, n);
    let mut rank = 0;
    for (col, &j) in order.iter().enumerate() {
        svals.push(norms[j]);
        v_sorted.set_column(col, &v.column(j));
        if norms[j] > cutoff {
            u.set_column(col, &(g.column(j) / Complex64::new(norms[j], 0.0)));
            rank = col + 1;
        }
    }
    if rank < n {
        // complete the left factor orthonormally for the zero block
        let mut work = DMatrix::<Complex64>::zeros(rows, rank + rows);
        work.view_mut((0, 0), (rows, rank))
            .copy_from(&u.columns(0, rank).into_owned());
        work.view_mut((0, rank), (rows, rows))
            .copy_from(&DMatrix::identity(rows, rows));
        let q = nalgebra::QR::new(work).q();
        for col in rank..n {
            u.set_column(col, &q.column(rank + (col - rank)));
        }
    }
    Ok((svals, u, v_sorted))
}

/// Full eigendecomposition in non-increasing order, verified by its
/// reconstruction residual `‖A - VΛV*‖_max`.
pub fn eigen_desc(a: &HermitianMatrix) -> Result<HermitianEigen, SpectraError> {
    let (raw_values, raw_vectors) = jacobi_hermitian(&a.data)?;
    let d = a.dim();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        raw_values[j]
            .partial_cmp(&raw_values[i])
            .expect("eigenvalues of a validated matrix are finite")
    });
    let values: Vec<f64> = order.iter().map(|&i| raw_values[i]).collect();
    let mut vectors = DMatrix::zeros(d, d);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &raw_vectors.column(i));
    }

    let lambda = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(values[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let residual = max_abs_entry(&(&vectors * lambda * vectors.adjoint() - &a.data));
    let tolerance = 1e-11 * (1.0 + a.max_abs()) * (1.0 + d as f64);
    if residual > tolerance {
        return Err(SpectraError::EigenResidual {
            residual,
            tolerance,
        });
    }

    Ok(HermitianEigen {
        values: OrderedSpectrum::non_increasing(values)?,
        vectors,
    })
}

/// Eigenvalues of a Hermitian matrix, non-increasing with multiplicities.
pub fn eigenvalues_desc(a: &HermitianMatrix) -> Result<OrderedSpectrum, SpectraError> {
    Ok(eigen_desc(a)?.values)
}

pub(crate) fn singular_values_of(m: &DMatrix<Complex64>) -> Result<OrderedSpectrum, SpectraError> {
    let (vals, _, _) = svd_parts(m)?;
    Ok(OrderedSpectrum::non_increasing(vals)?)
}

/// Full SVD with factors, singular values non-increasing and verified by the
/// reconstruction residual. Returns `(singular_values, u, v)` with
/// `m = u * diag * v.adjoint()`.
pub(crate) fn svd_parts(m: &DMatrix<Complex64>) -> Result<SvdFactors, SpectraError> {
    let (vals, u, v) = jacobi_svd(m)?;
    let k = vals.len();
    let diag = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            Complex64::new(vals[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let residual = max_abs_entry(&(&u * diag * v.adjoint() - m));
    let tolerance = 1e-11 * (1.0 + max_abs_entry(m)) * (1.0 + m.nrows().max(m.ncols()) as f64);
    if residual > tolerance {
        return Err(SpectraError::SvdResidual {
            residual,
            tolerance,
        });
    }
    Ok((vals, u, v))
}

/// Singular values `s(B) = λ((B*B)^{1/2})`, non-increasing; `min(rows, cols)`
/// of them.
pub fn singular_values(b: &ComplexMatrix) -> Result<OrderedSpectrum, SpectraError> {
    singular_values_of(&b.data)
}

/// The spectral spread of a Hermitian matrix: the non-increasing vector
/// `(λ_j - λ_{d-j+1})` for `j = 1..⌊d/2⌋`.
///
/// For odd `d` the middle eigenvalue drops out; for `d = 1` the spread is
/// empty. A scalar shift `A + cI` leaves the spread unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSpread {
    values: OrderedSpectrum,
}

impl SpectralSpread {
    pub fn spectrum(&self) -> &OrderedSpectrum {
        &self.values
    }

    pub fn values(&self) -> &[f64] {
        self.values.values()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Computes the spectral spread from the eigenvalues of `a`.
pub fn spectral_spread(a: &HermitianMatrix) -> Result<SpectralSpread, SpectraError> {
    let lambda = eigenvalues_desc(a)?;
    Ok(spread_of_eigenvalues(&lambda))
}

/// Spread of an already-computed non-increasing eigenvalue list.
pub fn spread_of_eigenvalues(lambda: &OrderedSpectrum) -> SpectralSpread {
    let d = lambda.len();
    let h = d / 2;
    let v = lambda.values();
    let values: Vec<f64> = (0..h).map(|j| v[j] - v[d - 1 - j]).collect();
    SpectralSpread {
        values: OrderedSpectrum::non_increasing(values)
            .expect("differences of a sorted list are sorted and non-negative"),
    }
}
