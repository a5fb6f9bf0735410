//! Dense complex-matrix kernel: tensor products, partial trace and transpose,
//! Hermitian eigendecomposition and von Neumann entropy.
//!
//! Composite systems use the Kronecker convention with the first factor as the
//! slowest-varying index. For the SWAP-test state on `[2, d, d]` the auxiliary
//! qubit is therefore the most significant digit, so the matrix splits into
//! four `d^2 x d^2` blocks indexed by the auxiliary basis states.

mod density;
mod eig;
mod json;
mod ops;

pub use density::{von_neumann_entropy, DensityMatrix};
pub use eig::{eig_hermitian, eigvals_hermitian, EigDecomposition};
pub use json::MatrixJson;
pub use ops::{
    hermitian_part, kron, max_abs_diff, max_hermitian_defect, partial_trace_matrix,
    partial_transpose_matrix, quadratic_form, trace,
};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Von Neumann entropy in bits of a spectrum, ignoring eigenvalues at or below
/// the rank tolerance.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    let s: f64 = eigenvalues
        .iter()
        .filter(|&&l| l > crate::tol::RANK)
        .fold(0.0, |acc, &l| acc - l * l.log2());
    s.max(0.0)
}

/// Entropy of an arbitrary Hermitian PSD matrix (need not have unit trace).
///
/// Used for unnormalized conditional states, where `p S(rho/p)` is wanted:
/// this returns `-sum mu log2 mu` over the eigenvalues `mu` of `m`, and the
/// caller adds `p log2 p`.
pub(crate) fn spectral_entropy_unnormalized(m: &CMatrix) -> crate::Result<f64> {
    let mu = eigvals_hermitian(m)?;
    Ok(mu
        .iter()
        .filter(|&&l| l > crate::tol::RANK)
        .fold(0.0, |acc, &l| acc - l * l.log2()))
}
