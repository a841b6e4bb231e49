//! Dense complex linear algebra used by every other module.
//!
//! Matrices are row-major; multipartite vectors use the crate-wide index
//! convention (first party slowest).

mod eig;
mod entropy;
mod matrix;
mod ops;
mod schmidt;
mod vector;

pub use eig::{hermitian_eig, hermitian_eigenvalues, HermitianEigen};
pub use entropy::{purity, shannon_bits, vn_entropy};
pub use matrix::ComplexMatrix;
pub use ops::{apply_local, partial_trace, permute_subsystems, reduced_state, tensor};
pub use schmidt::{schmidt, schmidt_probabilities, SchmidtDecomposition};
pub use vector::{inner, norm_sqr, StateVector};

/// Tolerance on `|m - m^dagger|` accepted by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Eigenvalues in `[-NEGATIVE_EIG_TOL, 0)` are clamped to zero; anything
/// lower marks the input as not positive semidefinite.
pub const NEGATIVE_EIG_TOL: f64 = 1e-10;
/// Allowed deviation of `<psi|psi>` from 1 for vectors flagged normalized.
pub const NORM_TOL: f64 = 1e-9;
/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// (relative to `max(1, |A|_F)`).
pub const JACOBI_TOL: f64 = 1e-12;
/// Maximum number of cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;
