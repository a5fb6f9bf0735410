//! Seeded random states for property checks and the self-test.
//!
//! Mixed states come from the Ginibre construction `G G^dagger / Tr(G G^dagger)`
//! with a `d x k` factor `G`; `k < d` gives rank-`k` states.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMatrix, CVector, DensityMatrix};
use crate::Result;

/// The generator used everywhere a seed is accepted.
pub type StateRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Random mixed state of dimension `d` and rank `min(rank, d)`.
pub fn ginibre_state<R: Rng + ?Sized>(rng: &mut R, d: usize, rank: usize) -> Result<DensityMatrix> {
    let g = ginibre(rng, d, rank.clamp(1, d));
    let m = &g * g.adjoint();
    let tr: f64 = m.diagonal().iter().map(|z| z.re).sum();
    DensityMatrix::single(m.unscale(tr))
}

pub fn random_pure<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<DensityMatrix> {
    let v = CVector::from_fn(d, |_, _| gaussian(rng));
    DensityMatrix::pure(&v)
}

/// Random unitary from Gram-Schmidt on Gaussian columns.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    loop {
        let mut u = ginibre(rng, d, d);
        if gram_schmidt_columns(&mut u) {
            return u;
        }
    }
}

/// Orthonormalizes columns in place; false if they were (nearly) dependent.
pub(crate) fn gram_schmidt_columns(u: &mut CMatrix) -> bool {
    for j in 0..u.ncols() {
        for k in 0..j {
            let proj = u.column(k).dotc(&u.column(j));
            let qk = u.column(k).into_owned();
            let mut col = u.column_mut(j);
            col -= qk * proj;
        }
        let norm = u.column(j).norm();
        if norm < 1e-10 {
            return false;
        }
        u.column_mut(j).unscale_mut(norm);
    }
    true
}

/// Random probability vector of length `d` with `rank` nonzero entries,
/// sorted in decreasing order. Entries are almost surely distinct.
pub fn random_spectrum<R: Rng + ?Sized>(rng: &mut R, d: usize, rank: usize) -> Vec<f64> {
    let rank = rank.clamp(1, d);
    let mut w: Vec<f64> = (0..rank).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w.sort_by(|a, b| b.total_cmp(a));
    w.resize(d, 0.0);
    w
}

/// `U diag(spectrum) U^dagger`.
pub fn state_with_spectrum(unitary: &CMatrix, spectrum: &[f64]) -> Result<DensityMatrix> {
    let d = spectrum.len();
    let diag = CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(spectrum[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    DensityMatrix::single(unitary * diag * unitary.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    #[test]
    fn ginibre_rank_and_validity() {
        let mut rng = seeded(7);
        for d in 2..=4 {
            for k in 1..=d {
                let rho = ginibre_state(&mut rng, d, k).unwrap();
                assert_eq!(rho.eig().unwrap().rank, k);
            }
        }
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = seeded(1);
        let u = random_unitary(&mut rng, 4);
        let id = CMatrix::identity(4, 4);
        assert!(max_abs_diff(&(u.adjoint() * &u), &id) < 1e-12);
    }

    #[test]
    fn seeded_is_reproducible() {
        let a = ginibre_state(&mut seeded(3), 3, 3).unwrap();
        let b = ginibre_state(&mut seeded(3), 3, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn spectrum_shape() {
        let mut rng = seeded(2);
        let s = random_spectrum(&mut rng, 4, 2);
        assert_eq!(s.len(), 4);
        assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(s[0] >= s[1] && s[1] > 0.0 && s[2] == 0.0);
    }
}
