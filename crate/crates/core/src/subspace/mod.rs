//! Subspaces of ℂ^d, principal angles, and direct rotations.
//!
//! A `k`-dimensional subspace is represented by an [`Isometry`]: a `d × k`
//! matrix with orthonormal columns. The principal angles between two such
//! subspaces are `θ_j = arccos(σ_{k-j+1}(X*Y))`, listed non-increasingly. The
//! pair induces an orthogonal decomposition of ℂ^d into the intersection
//! `X ∩ Y`, two rotating blocks of dimension `p + r` each, and the common
//! orthogonal complement `X⊥ ∩ Y⊥`; a direct rotation is the unitary that is
//! the identity outside the rotating blocks and a planar rotation by the
//! nonzero principal angles inside them.

mod decompose;
mod rotation;

pub use decompose::{decompose_pair, BorderlineCosine, PairDecomposition, DEFAULT_CLASSIFY_TOL};
pub use rotation::{direct_rotation, DirectRotation};

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::spectra::{ComplexMatrix, SpectraError};
use crate::vecmaj::{OrderedSpectrum, VecMajError};

/// Default bound on `‖X*X - I‖_max` accepted at isometry construction.
pub const DEFAULT_ISOMETRY_TOL: f64 = 1e-8;

/// Default relative threshold below which a singular value counts as zero
/// when orthonormalizing a spanning set.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum SubspaceError {
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("isometry must be tall: {rows} rows < {cols} columns")]
    NotTall { rows: usize, cols: usize },
    #[error("columns are not orthonormal: defect {defect:.3e} exceeds {tolerance:.3e}")]
    NotIsometry { defect: f64, tolerance: f64 },
    #[error("spanning set is rank deficient: numerical rank {rank} of {needed} columns")]
    RankDeficient { rank: usize, needed: usize },
    #[error("subspace dimensions do not match: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },
    #[error("path parameter {t} outside [0, 1]")]
    PathParameter { t: f64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Vector(#[from] VecMajError),
}

/// A `d × k` complex matrix with orthonormal columns (`X*X = I_k`).
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    data: DMatrix<Complex64>,
}

impl Isometry {
    pub fn new(data: DMatrix<Complex64>) -> Result<Self, SubspaceError> {
        Self::with_tolerance(data, DEFAULT_ISOMETRY_TOL)
    }

    pub fn with_tolerance(data: DMatrix<Complex64>, tolerance: f64) -> Result<Self, SubspaceError> {
        for j in 0..data.ncols() {
            for i in 0..data.nrows() {
                let z = data[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(SubspaceError::NonFinite { row: i, col: j });
                }
            }
        }
        if data.nrows() < data.ncols() {
            return Err(SubspaceError::NotTall {
                rows: data.nrows(),
                cols: data.ncols(),
            });
        }
        let gram = data.adjoint() * &data;
        let defect = (&gram - DMatrix::<Complex64>::identity(data.ncols(), data.ncols()))
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        if defect > tolerance {
            return Err(SubspaceError::NotIsometry { defect, tolerance });
        }
        Ok(Self { data })
    }

    /// Ambient dimension `d`.
    pub fn ambient_dim(&self) -> usize {
        self.data.nrows()
    }

    /// Subspace dimension `k`.
    pub fn sub_dim(&self) -> usize {
        self.data.ncols()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    /// Orthogonal projector `X X*` onto the range.
    pub fn projector(&self) -> DMatrix<Complex64> {
        &self.data * self.data.adjoint()
    }

    /// Standard embedding of the first `k` coordinate axes.
    pub fn coordinate(ambient_dim: usize, sub_dim: usize) -> Result<Self, SubspaceError> {
        if ambient_dim < sub_dim {
            return Err(SubspaceError::NotTall {
                rows: ambient_dim,
                cols: sub_dim,
            });
        }
        Ok(Self {
            data: DMatrix::identity(ambient_dim, sub_dim),
        })
    }
}

/// Principal angles between two equal-dimensional subspaces, non-increasing
/// in `[0, π/2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalAngles {
    angles: OrderedSpectrum,
}

impl PrincipalAngles {
    pub(crate) fn from_sorted(angles: OrderedSpectrum) -> Self {
        Self { angles }
    }

    pub fn spectrum(&self) -> &OrderedSpectrum {
        &self.angles
    }

    pub fn values(&self) -> &[f64] {
        self.angles.values()
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn max_angle(&self) -> f64 {
        self.values().first().copied().unwrap_or(0.0)
    }

    /// Entrywise sine, non-increasing.
    pub fn sin(&self) -> OrderedSpectrum {
        self.angles.map(f64::sin).expect("sine of finite angles").sorted()
    }

    /// Entrywise squared angles, non-increasing.
    pub fn squared(&self) -> OrderedSpectrum {
        self.angles.map(|t| t * t).expect("square of finite angles").sorted()
    }

    /// Entrywise squared sine, non-increasing.
    pub fn sin_squared(&self) -> OrderedSpectrum {
        self.angles
            .map(|t| t.sin() * t.sin())
            .expect("sine of finite angles")
            .sorted()
    }

    /// Entrywise tangent; only meaningful when every angle is below π/2.
    pub fn tan(&self) -> OrderedSpectrum {
        self.angles.map(f64::tan).expect("tangent of acute angles").sorted()
    }
}

fn require_compatible(x: &Isometry, y: &Isometry) -> Result<(), SubspaceError> {
    if x.ambient_dim() != y.ambient_dim() || x.sub_dim() != y.sub_dim() {
        return Err(SubspaceError::DimensionMismatch {
            left: format!("{}x{}", x.ambient_dim(), x.sub_dim()),
            right: format!("{}x{}", y.ambient_dim(), y.sub_dim()),
        });
    }
    Ok(())
}

/// Orthonormalizes a full-column-rank spanning set, preserving its range.
///
/// Fails when the smallest singular value falls below
/// `rank_tol * max(1, σ_max)`, reporting the numerical rank.
pub fn isometry_from_span(
    vectors: &ComplexMatrix,
    rank_tol: Option<f64>,
) -> Result<Isometry, SubspaceError> {
    let m = vectors.cols();
    let (svals, u, _) = crate::spectra::svd_parts(vectors.as_matrix())?;
    let threshold = rank_tol.unwrap_or(DEFAULT_RANK_TOL)
        * 1.0f64.max(svals.first().copied().unwrap_or(0.0));
    let rank = svals.iter().filter(|&&s| s > threshold).count();
    if rank < m {
        return Err(SubspaceError::RankDeficient { rank, needed: m });
    }
    Isometry::new(u.columns(0, m).into_owned())
}

/// Principal angles `θ_j = arccos(clip(σ_{k-j+1}(X*Y), 0, 1))`, non-increasing.
///
/// Invariant under unitary changes of basis within each subspace and under
/// swapping the arguments.
pub fn principal_angles(x: &Isometry, y: &Isometry) -> Result<PrincipalAngles, SubspaceError> {
    require_compatible(x, y)?;
    let m = x.as_matrix().adjoint() * y.as_matrix();
    let sigmas = crate::spectra::singular_values_of(&m)?;
    // cosines are non-increasing, so the angle list reverses them
    let mut angles: Vec<f64> = sigmas
        .values()
        .iter()
        .map(|s| s.clamp(0.0, 1.0).acos())
        .collect();
    angles.reverse();
    Ok(PrincipalAngles::from_sorted(OrderedSpectrum::non_increasing(
        angles,
    )?))
}
