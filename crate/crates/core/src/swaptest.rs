//! The SWAP-test circuit: an auxiliary qubit in `|0>` goes through a Hadamard
//! gate, then controls a swap of two `d`-dimensional registers, and is finally
//! measured in the `|+>, |->` basis.
//!
//! The output state on `[2, d, d]` is built two ways: from the block formula
//! `1/2 [[A, A S], [S A, S A S]]` with `A = rho1 (x) rho2`, and by applying the
//! gates as explicit unitaries. The two must agree to rounding.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::linalg::{kron, CMatrix, DensityMatrix};
use crate::{random, Error, Result};

/// Post-circuit state `rho_a(12)` on subsystems `[2, d, d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TripartiteState {
    state: DensityMatrix,
    d: usize,
}

impl TripartiteState {
    /// Wraps a state on `[2, d, d]`.
    pub fn from_density(state: DensityMatrix) -> Result<Self> {
        match *state.dims() {
            [2, d1, d2] if d1 == d2 => Ok(Self { state, d: d1 }),
            [2, d1, d2] => Err(Error::DimensionMismatch(d1, d2)),
            _ => Err(Error::BadSubsystemDims {
                dims: state.dims().to_vec(),
                dim: state.dim(),
            }),
        }
    }

    pub fn density(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn matrix(&self) -> &CMatrix {
        self.state.matrix()
    }

    /// Register dimension `d`.
    pub fn register_dim(&self) -> usize {
        self.d
    }

    /// Block `<m|_a rho |n>_a` of size `d^2 x d^2`.
    pub fn block(&self, m: usize, n: usize) -> CMatrix {
        let k = self.d * self.d;
        self.matrix().view((m * k, n * k), (k, k)).into_owned()
    }

    /// Reduced state of the auxiliary qubit.
    pub fn aux_state(&self) -> DensityMatrix {
        self.state
            .partial_trace(&[0])
            .expect("subsystem 0 always exists")
    }

    /// Reduced state of the two input registers.
    pub fn register_state(&self) -> DensityMatrix {
        self.state
            .partial_trace(&[1, 2])
            .expect("subsystems 1 and 2 always exist")
    }
}

/// Outcome probabilities of the `sigma_x` measurement on the auxiliary qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementStats {
    pub p_plus: f64,
    pub p_minus: f64,
    /// `Tr(rho1 rho2) = 2 p_plus - 1`.
    pub overlap: f64,
}

/// Sampled overlap estimate from a finite number of shots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShotEstimate {
    pub n_shots: u64,
    pub n_plus: u64,
    pub seed: u64,
    pub estimate: f64,
    pub std_error: f64,
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// The swap gate on two `d`-dimensional registers: `S|i>|j> = |j>|i>`.
pub fn swap_operator(d: usize) -> CMatrix {
    let mut s = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            s[(j * d + i, i * d + j)] = one();
        }
    }
    s
}

/// Controlled swap with the auxiliary qubit (slowest index) as control.
pub fn controlled_swap(d: usize) -> CMatrix {
    let k = d * d;
    let mut c = CMatrix::zeros(2 * k, 2 * k);
    c.view_mut((0, 0), (k, k))
        .copy_from(&CMatrix::identity(k, k));
    c.view_mut((k, k), (k, k)).copy_from(&swap_operator(d));
    c
}

pub fn hadamard() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(h, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(-h, 0.0),
        ],
    )
}

fn check_inputs(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<usize> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch(rho1.dim(), rho2.dim()));
    }
    Ok(rho1.dim())
}

fn wrap(m: CMatrix, d: usize) -> Result<TripartiteState> {
    TripartiteState::from_density(DensityMatrix::new(m, vec![2, d, d])?)
}

/// Output state from the block formula.
pub fn build_closed_form(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<TripartiteState> {
    let d = check_inputs(rho1, rho2)?;
    let k = d * d;
    let s = swap_operator(d);
    let a = kron(rho1.matrix(), rho2.matrix());
    let sa = &s * &a;
    let half = Complex64::new(0.5, 0.0);

    let mut m = CMatrix::zeros(2 * k, 2 * k);
    m.view_mut((0, 0), (k, k)).copy_from(&(&a * half));
    m.view_mut((0, k), (k, k)).copy_from(&(&a * &s * half));
    m.view_mut((k, 0), (k, k)).copy_from(&(&sa * half));
    // S A S equals rho2 (x) rho1.
    m.view_mut((k, k), (k, k))
        .copy_from(&(kron(rho2.matrix(), rho1.matrix()) * half));
    wrap(m, d)
}

/// Output state by applying `C_swap (H (x) I)` to `|0><0| (x) rho1 (x) rho2`.
pub fn build_by_gates(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<TripartiteState> {
    let d = check_inputs(rho1, rho2)?;
    let k = d * d;
    let mut aux = CMatrix::zeros(2, 2);
    aux[(0, 0)] = one();
    let initial = kron(&aux, &kron(rho1.matrix(), rho2.matrix()));
    let u = controlled_swap(d) * kron(&hadamard(), &CMatrix::identity(k, k));
    let out = &u * initial * u.adjoint();
    wrap(out, d)
}

/// Probabilities of the `|+>` and `|->` outcomes on the auxiliary qubit.
pub fn measure_stats(state: &TripartiteState) -> MeasurementStats {
    let aux = state.aux_state();
    let r = aux.matrix();
    let diag = r[(0, 0)].re + r[(1, 1)].re;
    let coherence = r[(0, 1)].re + r[(1, 0)].re;
    let p_plus = 0.5 * (diag + coherence);
    let p_minus = 0.5 * (diag - coherence);
    MeasurementStats {
        p_plus,
        p_minus,
        overlap: 2.0 * p_plus - 1.0,
    }
}

/// Simulates `n_shots` runs of the measurement device and estimates the
/// overlap as `2 f - 1`, `f` the fraction of `+` outcomes, with its binomial
/// standard error `2 sqrt(f (1 - f) / n)`.
pub fn sample_shots(state: &TripartiteState, n_shots: u64, seed: u64) -> Result<ShotEstimate> {
    if n_shots == 0 {
        return Err(Error::InvalidParameter("n_shots must be at least 1".into()));
    }
    let p = measure_stats(state).p_plus.clamp(0.0, 1.0);
    let mut rng = random::seeded(seed);
    let n_plus = (0..n_shots).filter(|_| rng.random_bool(p)).count() as u64;
    let f = n_plus as f64 / n_shots as f64;
    Ok(ShotEstimate {
        n_shots,
        n_plus,
        seed,
        estimate: 2.0 * f - 1.0,
        std_error: 2.0 * (f * (1.0 - f) / n_shots as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn swap_small_dimensions() {
        assert_eq!(swap_operator(1), CMatrix::identity(1, 1));
        let s = swap_operator(2);
        let mut expected = CMatrix::identity(4, 4);
        expected.swap_rows(1, 2);
        assert_eq!(s, expected);
    }

    #[test]
    fn swap_is_hermitian_involution() {
        for d in 1..=4 {
            let s = swap_operator(d);
            assert_eq!(s.adjoint(), s);
            assert_eq!(&s * &s, CMatrix::identity(d * d, d * d));
        }
    }

    #[test]
    fn equal_pure_inputs_give_product_plus_state() {
        let z = DensityMatrix::basis(2, 0).unwrap();
        let st = build_closed_form(&z, &z).unwrap();
        let mut expected = CMatrix::zeros(8, 8);
        for i in [0usize, 4] {
            for j in [0usize, 4] {
                expected[(i, j)] = c(0.5);
            }
        }
        assert!(max_abs_diff(st.matrix(), &expected) < 1e-15);
        let gates = build_by_gates(&z, &z).unwrap();
        assert!(max_abs_diff(gates.matrix(), &expected) < 1e-15);
        assert!((measure_stats(&st).p_plus - 1.0).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_inputs_half_half() {
        let z = DensityMatrix::basis(2, 0).unwrap();
        let o = DensityMatrix::basis(2, 1).unwrap();
        let st = build_by_gates(&z, &o).unwrap();
        let stats = measure_stats(&st);
        assert!((stats.p_plus - 0.5).abs() < 1e-15);
        assert!(stats.overlap.abs() < 1e-15);
    }

    #[test]
    fn maximally_mixed_inputs() {
        let h = DensityMatrix::maximally_mixed(2).unwrap();
        let st = build_closed_form(&h, &h).unwrap();
        let stats = measure_stats(&st);
        assert!((stats.p_plus - 0.75).abs() < 1e-15);
        assert!((stats.p_minus - 0.25).abs() < 1e-15);
        assert!((stats.overlap - 0.5).abs() < 1e-15);
        // Reduced auxiliary state is diagonal in |+>,|-> with weights 3/4, 1/4.
        let aux = st.aux_state();
        let expected = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.25), c(0.25), c(0.5)]);
        assert!(max_abs_diff(aux.matrix(), &expected) < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let a = DensityMatrix::maximally_mixed(2).unwrap();
        let b = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(matches!(
            build_closed_form(&a, &b),
            Err(Error::DimensionMismatch(2, 3))
        ));
        assert!(matches!(
            build_by_gates(&a, &b),
            Err(Error::DimensionMismatch(2, 3))
        ));
    }

    #[test]
    fn blocks_hold_products() {
        let mut rng = random::seeded(11);
        let a = random::ginibre_state(&mut rng, 3, 3).unwrap();
        let b = random::ginibre_state(&mut rng, 3, 2).unwrap();
        let st = build_closed_form(&a, &b).unwrap();
        let half = c(0.5);
        assert!(max_abs_diff(&st.block(0, 0), &(kron(a.matrix(), b.matrix()) * half)) < 1e-15);
        assert!(max_abs_diff(&st.block(1, 1), &(kron(b.matrix(), a.matrix()) * half)) < 1e-15);
    }

    #[test]
    fn shots_edge_cases() {
        let z = DensityMatrix::basis(2, 0).unwrap();
        let st = build_closed_form(&z, &z).unwrap();
        let est = sample_shots(&st, 1000, 5).unwrap();
        assert_eq!(est.estimate, 1.0);
        assert_eq!(est.std_error, 0.0);
        assert!(sample_shots(&st, 0, 5).is_err());

        let h = DensityMatrix::maximally_mixed(2).unwrap();
        let st = build_closed_form(&h, &h).unwrap();
        assert_eq!(
            sample_shots(&st, 5000, 9).unwrap(),
            sample_shots(&st, 5000, 9).unwrap()
        );
        assert_ne!(
            sample_shots(&st, 5000, 9).unwrap().n_plus,
            sample_shots(&st, 5000, 10).unwrap().n_plus
        );
    }
}
