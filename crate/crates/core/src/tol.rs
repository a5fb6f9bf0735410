//! Numerical tolerances shared by every module.
//!
//! All thresholds live here so that the analysis, the tests and the reports
//! agree on one set of numbers. Reports serialize them next to their results.

use serde::Serialize;

/// Max entrywise |M - M^dagger| accepted as Hermitian.
pub const HERMITIAN: f64 = 1e-10;
/// Max |Tr rho - 1| accepted as unit trace.
pub const TRACE: f64 = 1e-10;
/// Smallest eigenvalue accepted as positive semidefinite is `-PSD`.
pub const PSD: f64 = 1e-9;
/// Eigenvalues at or below this are exact zeros for rank and entropy.
pub const RANK: f64 = 1e-10;
/// Orthonormality of computed eigenvectors.
pub const ORTHONORMAL: f64 = 1e-9;
/// Eigendecomposition reconstruction residual, relative to the max entry.
pub const RECONSTRUCTION: f64 = 1e-8;

/// Refinement tolerance of the measurement optimizer, in bits.
pub const OPTIMIZER: f64 = 1e-7;
/// Total correlation at or below this (bits) classifies a state as product.
pub const CORRELATION: f64 = 1e-8;
/// Negativity sum above this classifies a state as entangled.
pub const NEGATIVITY: f64 = 1e-9;
/// Discord above this (bits) without entanglement is flagged as an anomaly.
pub const DISCORD: f64 = 1e-5;
/// Max off-diagonal residual for a classical-quantum decomposition.
pub const CLASSICAL_QUANTUM: f64 = 1e-8;
/// Measures in (-CLAMP, 0) are reported as 0.
pub const CLAMP: f64 = 1e-9;

/// |<phi|psi>| >= 1 - MATCH counts two eigenvectors as equal.
pub const MATCH: f64 = 1e-6;
/// Inputs whose max entry difference is at or below this are treated as equal.
pub const DISTINCT: f64 = 1e-8;
/// Eigenvalues closer than this share a degenerate block.
pub const DEGENERATE: f64 = 1e-9;

/// Snapshot of the tolerances, embedded in serialized reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub hermitian: f64,
    pub trace: f64,
    pub psd: f64,
    pub rank: f64,
    pub optimizer_bits: f64,
    pub correlation_bits: f64,
    pub negativity: f64,
    pub discord_bits: f64,
    pub classical_quantum: f64,
    pub clamp: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: HERMITIAN,
            trace: TRACE,
            psd: PSD,
            rank: RANK,
            optimizer_bits: OPTIMIZER,
            correlation_bits: CORRELATION,
            negativity: NEGATIVITY,
            discord_bits: DISCORD,
            classical_quantum: CLASSICAL_QUANTUM,
            clamp: CLAMP,
        }
    }
}

/// Maps values in `(-CLAMP, 0)` to exactly zero.
pub fn clamp_zero(x: f64) -> f64 {
    // `<=` also folds -0.0
    if x <= 0.0 && x > -CLAMP {
        0.0
    } else {
        x
    }
}
