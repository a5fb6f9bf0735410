//! Simulation and correlation analysis of the SWAP-test overlap measurement.
//!
//! Two input states `rho1`, `rho2` and an auxiliary qubit pass through a
//! Hadamard and a controlled swap; measuring the auxiliary qubit in the
//! `|+>, |->` basis yields `p+ = (1 + Tr rho1 rho2) / 2`. This crate builds the
//! post-circuit state and quantifies the correlations between the auxiliary
//! qubit and the registers: negativity, mutual information, discord measured on
//! the auxiliary side, explicit entanglement witnesses, and the depolarizing
//! channel example with its correlation sweep and sudden-death trajectory.

pub mod error;
pub mod linalg;
pub mod measures;
pub mod random;
pub mod scenarios;
pub mod selftest;
pub mod sphere;
pub mod swaptest;
pub mod tol;
pub mod witness;

pub use error::{Error, Result};
pub use linalg::DensityMatrix;
pub use measures::{
    classify, discord_via_measurement, is_classical_quantum, mutual_information, negativity,
    Classification, CorrelationReport,
};
pub use sphere::QubitMeasurementBasis;
pub use swaptest::{
    build_by_gates, build_closed_form, measure_stats, sample_shots, swap_operator,
    MeasurementStats, ShotEstimate, TripartiteState,
};
pub use witness::{construct_witness, match_count, ProofCase, WitnessCertificate};
