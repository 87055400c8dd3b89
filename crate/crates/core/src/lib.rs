//! Numerical machinery for comparing Ritz values of Hermitian matrices across
//! nearby subspaces.
//!
//! The crate builds, from first principles, every object needed to state and
//! test the classical perturbation bounds that control how much the spectrum
//! of a compression `X*AX` can move when the subspace `range(X)` moves:
//!
//! * [`vecmaj`] — non-increasing rearrangements, zero-padding arithmetic and
//!   (sub)majorization predicates with auditable partial-sum margins;
//! * [`spectra`] — validated dense complex matrices, eigenvalues / singular
//!   values / spectral spread, and the classical singular-value inequalities
//!   (Weyl, Lidskii, off-diagonal block, generalized commutator, ...);
//! * [`subspace`] — principal angles, the five-part orthogonal decomposition
//!   induced by a pair of equal-dimensional subspaces, and explicit direct
//!   rotations together with their one-parameter paths;
//! * [`bounds`] — Ritz values, residuals, and evaluators that compute both
//!   sides of each perturbation inequality and return a [`bounds::BoundReport`];
//! * [`io`] — the JSON file format for matrices accepted by the CLI.
//!
//! All numerical predicates are tolerance-aware: exact inequalities are
//! verified up to an absolute slack applied to partial-sum margins.

pub mod bounds;
pub mod digest;
pub mod io;
pub mod spectra;
pub mod subspace;
pub mod vecmaj;

pub use num_complex::Complex64;
