//! Maximization of a smooth function of a qubit measurement direction.
//!
//! A direction `(theta, phi)` on the Bloch sphere fixes the projective basis
//! `{|u>, |u_perp>}`. Antipodal directions give the same basis with the two
//! outcomes swapped, so every objective here is antipodally symmetric and the
//! coarse grid only needs to cover the upper hemisphere `theta <= pi/2`. The
//! best grid point is then polished by a coordinate pattern search.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::{random, Result};

/// Projective qubit measurement onto `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`
/// and its orthogonal complement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitMeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl QubitMeasurementBasis {
    /// Normalizes the angles to `theta in [0, pi]`, `phi in [0, 2 pi)`.
    pub fn new(theta: f64, phi: f64) -> Self {
        let mut theta = theta.rem_euclid(TAU);
        let mut phi = phi;
        if theta > PI {
            theta = TAU - theta;
            phi += PI;
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Self { theta, phi }
    }

    /// Representative of the unordered basis `{|u>, |u_perp>}`: the direction
    /// in the upper hemisphere, and `phi < pi` on the equator.
    pub fn canonical(&self) -> Self {
        const EQUATOR: f64 = 1e-12;
        if (self.theta - PI / 2.0).abs() <= EQUATOR {
            Self::new(PI / 2.0, self.phi.rem_euclid(PI))
        } else if self.theta > PI / 2.0 {
            Self::new(PI - self.theta, self.phi + PI)
        } else {
            *self
        }
    }

    /// The `sigma_x` eigenbasis `|+>, |->`.
    pub fn plus_minus() -> Self {
        Self::new(PI / 2.0, 0.0)
    }

    /// `(|u>, |u_perp>)` as 2-component amplitude arrays.
    pub fn vectors(&self) -> ([Complex64; 2], [Complex64; 2]) {
        let (s, c) = (self.theta / 2.0).sin_cos();
        let e = Complex64::from_polar(1.0, self.phi);
        let u = [Complex64::new(c, 0.0), e * s];
        let u_perp = [-e.conj() * s, Complex64::new(c, 0.0)];
        (u, u_perp)
    }

    /// The two rank-1 projectors `|u><u|` and `|u_perp><u_perp|`, row-major.
    pub fn projectors(&self) -> [[[Complex64; 2]; 2]; 2] {
        let (u, v) = self.vectors();
        let outer = |x: [Complex64; 2]| {
            [
                [x[0] * x[0].conj(), x[0] * x[1].conj()],
                [x[1] * x[0].conj(), x[1] * x[1].conj()],
            ]
        };
        [outer(u), outer(v)]
    }
}

/// Grid density and polish settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchOptions {
    /// Intervals over `theta in [0, pi]`; only the upper half is evaluated.
    pub theta_intervals: usize,
    /// Points over `phi in [0, 2 pi)`.
    pub phi_points: usize,
    /// The polish stops once its step falls below this (radians).
    pub min_step: f64,
    pub max_polish_iters: usize,
    /// Random sub-cell shift of the grid; `None` keeps the canonical grid,
    /// which contains `theta = pi/2, phi = 0` exactly.
    pub seed: Option<u64>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            theta_intervals: 64,
            phi_points: 128,
            min_step: 1e-9,
            max_polish_iters: 10_000,
            seed: None,
        }
    }
}

/// Grid values closer than this are ties.
const GRID_TIE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchResult {
    pub basis: QubitMeasurementBasis,
    pub value: f64,
}

/// Maximizes `f(theta, phi)`. Grid ties go to the smallest `(theta, phi)`.
pub fn maximize<F>(
    f: F,
    options: &SearchOptions,
    warm_start: Option<QubitMeasurementBasis>,
) -> Result<SearchResult>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    let (theta_shift, phi_shift) = match options.seed {
        Some(seed) => {
            let mut rng = random::seeded(seed);
            (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0))
        }
        None => (0.0, 0.0),
    };
    let n_theta = options.theta_intervals.max(2);
    let n_phi = options.phi_points.max(1);
    let d_theta = PI / n_theta as f64;
    let d_phi = TAU / n_phi as f64;
    let thetas: Vec<f64> = (0..=n_theta / 2)
        .map(|i| (i as f64 + theta_shift) * d_theta)
        .collect();

    let rows: Vec<Vec<f64>> = thetas
        .par_iter()
        .map(|&theta| {
            (0..n_phi)
                .map(|j| f(theta, (j as f64 + phi_shift) * d_phi))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    let mut best = (thetas[0], phi_shift * d_phi, f64::NEG_INFINITY);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v > best.2 + GRID_TIE {
                best = (thetas[i], (j as f64 + phi_shift) * d_phi, v);
            }
        }
    }

    let mut result = polish(&f, (best.0, best.1), best.2, d_theta, options)?;
    if let Some(w) = warm_start {
        let start = f(w.theta, w.phi)?;
        let alt = polish(&f, (w.theta, w.phi), start, d_theta, options)?;
        if alt.value > result.value {
            result = alt;
        }
    }
    Ok(result)
}

fn polish<F>(
    f: &F,
    start: (f64, f64),
    start_value: f64,
    step: f64,
    options: &SearchOptions,
) -> Result<SearchResult>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let (mut theta, mut phi) = start;
    let mut value = start_value;
    let mut h = step;
    let mut iters = 0;
    while h > options.min_step && iters < options.max_polish_iters {
        iters += 1;
        let mut moved = false;
        for (dt, dp) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
            let v = f(theta + dt, phi + dp)?;
            if v > value {
                theta += dt;
                phi += dp;
                value = v;
                moved = true;
                break;
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    Ok(SearchResult {
        basis: QubitMeasurementBasis::new(theta, phi),
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projectors_resolve_identity() {
        for &(t, p) in &[(0.0, 0.0), (0.3, 1.1), (PI / 2.0, 0.0), (2.9, 5.0)] {
            let b = QubitMeasurementBasis::new(t, p);
            let [a, c] = b.projectors();
            for i in 0..2 {
                for j in 0..2 {
                    let id = if i == j { 1.0 } else { 0.0 };
                    assert!((a[i][j] + c[i][j] - Complex64::new(id, 0.0)).norm() < 1e-12);
                    // idempotent
                    let sq = a[i][0] * a[0][j] + a[i][1] * a[1][j];
                    assert!((sq - a[i][j]).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn angle_normalization() {
        let b = QubitMeasurementBasis::new(-0.2, 0.1);
        assert!((b.theta - 0.2).abs() < 1e-15);
        assert!((b.phi - (0.1 + PI)).abs() < 1e-15);
        let b = QubitMeasurementBasis::new(PI + 0.5, -0.1);
        assert!((b.theta - (PI - 0.5)).abs() < 1e-14);
        assert!((b.phi - (PI - 0.1)).abs() < 1e-14);
    }

    #[test]
    fn plus_minus_vectors() {
        let (u, v) = QubitMeasurementBasis::plus_minus().vectors();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((u[0].re - h).abs() < 1e-15 && (u[1].re - h).abs() < 1e-15);
        assert!((v[0].re + h).abs() < 1e-15 && (v[1].re - h).abs() < 1e-15);
    }

    #[test]
    fn finds_off_grid_maximum() {
        // Bloch-vector alignment with an arbitrary direction; antipodally symmetric.
        let (t0, p0): (f64, f64) = (1.234_567, 4.321);
        let target = [t0.sin() * p0.cos(), t0.sin() * p0.sin(), t0.cos()];
        let f = |t: f64, p: f64| -> Result<f64> {
            let n = [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()];
            let dot: f64 = n.iter().zip(&target).map(|(a, b)| a * b).sum();
            Ok(dot * dot)
        };
        let r = maximize(f, &SearchOptions::default(), None).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
        assert!((r.basis.theta - t0).abs() < 1e-6);
        assert!((r.basis.phi - p0).abs() < 1e-6);
        let flipped = QubitMeasurementBasis::new(PI - t0, p0 + PI).canonical();
        assert!((flipped.theta - t0).abs() < 1e-12 && (flipped.phi - p0).abs() < 1e-12);
        let eq = QubitMeasurementBasis::new(PI / 2.0, 1.5 * PI).canonical();
        assert!((eq.phi - 0.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn seeded_grid_agrees() {
        let f = |t: f64, p: f64| -> Result<f64> { Ok(-(t - 0.7).powi(2) - (p - 2.0).powi(2)) };
        let a = maximize(f, &SearchOptions::default(), None).unwrap();
        let opts = SearchOptions {
            seed: Some(99),
            ..Default::default()
        };
        let b = maximize(f, &opts, None).unwrap();
        assert!((a.value - b.value).abs() < 1e-12);
    }
}
