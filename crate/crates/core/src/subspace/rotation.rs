//! Direct rotations between subspaces and their one-parameter paths.
//!
//! In the assembled basis of a [`PairDecomposition`] the rotation is block
//! diagonal: the identity on the intersection and on the common complement,
//! and the planar rotation `[[C, -S], [S, C]]` with `C = diag(cos θ')`,
//! `S = diag(sin θ')` on the two rotating blocks. Scaling every angle by
//! `t ∈ [0, 1]` yields the path `U(t)` with `U(0) = I`, `U(1) = U` and the
//! group property `U(t + h) = U(t) U(h)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{Isometry, PairDecomposition, SubspaceError};

/// Acceptable unitarity defect `‖U*U - I‖_max` for a constructed rotation.
const UNITARITY_TOL: f64 = 1e-10;

/// A unitary mapping one subspace onto another, the identity on their
/// intersection and on the common orthogonal complement.
#[derive(Debug, Clone)]
pub struct DirectRotation {
    unitary: DMatrix<Complex64>,
    decomposition: PairDecomposition,
}

impl DirectRotation {
    /// The rotation `U = U(1)`.
    pub fn unitary(&self) -> &DMatrix<Complex64> {
        &self.unitary
    }

    pub fn decomposition(&self) -> &PairDecomposition {
        &self.decomposition
    }

    /// Cosines of the rotating-block angles.
    pub fn cos_diagonal(&self) -> Vec<f64> {
        self.decomposition
            .theta_prime
            .values()
            .iter()
            .map(|t| t.cos())
            .collect()
    }

    /// Sines of the rotating-block angles.
    pub fn sin_diagonal(&self) -> Vec<f64> {
        self.decomposition
            .theta_prime
            .values()
            .iter()
            .map(|t| t.sin())
            .collect()
    }

    /// The point `U(t)` of the rotation path, `t ∈ [0, 1]`.
    pub fn path(&self, t: f64) -> Result<DMatrix<Complex64>, SubspaceError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(SubspaceError::PathParameter { t });
        }
        Ok(rotation_from_angles(&self.decomposition, |theta| t * theta))
    }

    /// The derivative `U'(0)`: skew-Hermitian, coupling the two rotating
    /// blocks with weights `±θ'` and vanishing elsewhere.
    pub fn generator(&self) -> DMatrix<Complex64> {
        let dec = &self.decomposition;
        let d = dec.ambient_dim();
        let mut g = DMatrix::<Complex64>::zeros(d, d);
        for (col, &theta) in dec.theta_prime.values().iter().enumerate() {
            let u = dec.basis_s1.column(col);
            let z = dec.basis_s2.column(col);
            let w = Complex64::new(theta, 0.0);
            // θ (z u* - u z*)
            g += (z * u.adjoint() - u * z.adjoint()) * w;
        }
        g
    }

    /// `Y_r = U X`: an isometry with the target range, the canonical rotated
    /// representative of the moving subspace.
    pub fn apply_to(&self, x: &Isometry) -> Result<Isometry, SubspaceError> {
        Isometry::new(&self.unitary * x.as_matrix())
    }
}

fn rotation_from_angles(
    dec: &PairDecomposition,
    angle: impl Fn(f64) -> f64,
) -> DMatrix<Complex64> {
    let d = dec.ambient_dim();
    let mut u = DMatrix::<Complex64>::identity(d, d);
    for (col, &theta) in dec.theta_prime.values().iter().enumerate() {
        let a = angle(theta);
        let (sin, cos) = a.sin_cos();
        let x = dec.basis_s1.column(col).into_owned();
        let z = dec.basis_s2.column(col).into_owned();
        // rank-2 update: rotate the (x, z) plane by angle a
        let cm1 = Complex64::new(cos - 1.0, 0.0);
        let s = Complex64::new(sin, 0.0);
        u += (&x * x.adjoint() + &z * z.adjoint()) * cm1 + (&z * x.adjoint() - &x * z.adjoint()) * s;
    }
    u
}

/// Builds the direct rotation for a pair decomposition and verifies its
/// unitarity.
pub fn direct_rotation(dec: &PairDecomposition) -> Result<DirectRotation, SubspaceError> {
    let unitary = rotation_from_angles(dec, |theta| theta);
    let d = dec.ambient_dim();
    let defect = (unitary.adjoint() * &unitary - DMatrix::<Complex64>::identity(d, d))
        .iter()
        .fold(0.0f64, |m, z| m.max(z.norm()));
    if defect > UNITARITY_TOL {
        return Err(SubspaceError::Numerical(format!(
            "direct rotation lost unitarity (defect {defect:.3e})"
        )));
    }
    Ok(DirectRotation {
        unitary,
        decomposition: dec.clone(),
    })
}
