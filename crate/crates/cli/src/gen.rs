//! Seeded random instance generators.
//!
//! Randomness comes from ChaCha8 keyed by the run seed, with the 64-bit
//! stream id set to the trial index: trial `i` always sees the same values
//! no matter which other trials ran before it.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ritzspread::bounds::residual;
use ritzspread::spectra::{eigen_desc, ComplexMatrix, HermitianMatrix};
use ritzspread::subspace::Isometry;

use crate::HarnessError;

/// The per-trial generator: seed selects the run, the stream id the trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Standard normal deviate by the Box–Muller transform (two uniforms per
/// sample, no cached spare, so the draw count is predictable).
pub fn standard_normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Matrix with independent complex-Gaussian entries.
pub fn gen_complex(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let m = DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(standard_normal(rng), standard_normal(rng))
    });
    ComplexMatrix::new(m).expect("gaussian entries are finite")
}

/// Symmetrized complex-Gaussian Hermitian matrix.
pub fn gen_hermitian(rng: &mut impl Rng, d: usize) -> HermitianMatrix {
    let g = gen_complex(rng, d, d).into_matrix();
    HermitianMatrix::new((&g + g.adjoint()).scale(0.5)).expect("symmetrized matrix is Hermitian")
}

/// Haar-like random isometry: thin QR factor of a Gaussian matrix.
pub fn gen_isometry(rng: &mut impl Rng, d: usize, k: usize) -> Isometry {
    let g = gen_complex(rng, d, k).into_matrix();
    Isometry::new(nalgebra::QR::new(g).q()).expect("QR factor has orthonormal columns")
}

/// A Hermitian matrix together with an invariant subspace, built by spanning
/// the subspace with `k` randomly chosen eigenvectors. The returned pair
/// satisfies `‖R_X‖_F ≤ 1e-12 ‖A‖_F`.
pub fn gen_invariant_pair(
    rng: &mut impl Rng,
    d: usize,
    k: usize,
) -> Result<(HermitianMatrix, Isometry), HarnessError> {
    const ATTEMPTS: usize = 8;
    for _ in 0..ATTEMPTS {
        let a = gen_hermitian(rng, d);
        let eig = eigen_desc(&a)?;
        let mut cols: Vec<usize> = (0..d).collect();
        for i in 0..d {
            let j = rng.gen_range(i..d);
            cols.swap(i, j);
        }
        let mut m = DMatrix::zeros(d, k);
        for (c, &idx) in cols.iter().take(k).enumerate() {
            m.set_column(c, &eig.vectors.column(idx));
        }
        let x = Isometry::new(m)?;
        let r = residual(&a, &x)?.frobenius_norm();
        if r <= 1e-12 * a.frobenius_norm() {
            return Ok((a, x));
        }
    }
    Err(HarnessError::GeneratorExhausted {
        attempts: ATTEMPTS,
        reason: "invariant pair residual stayed above 1e-12 * ||A||".to_string(),
    })
}
