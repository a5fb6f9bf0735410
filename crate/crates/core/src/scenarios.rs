//! Depolarized-input example: correlation surfaces over `(a1, a2)` and the
//! sudden-death trajectory.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{CMatrix, DensityMatrix};
use crate::measures::{discord_via_measurement, negativity, Classification, DiscordOptions};
use crate::sphere::QubitMeasurementBasis;
use crate::swaptest::{build_closed_form, TripartiteState};
use crate::{tol, Error, Result};

fn check_amplitude(name: &str, a: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&a) {
        return Err(Error::InvalidParameter(format!(
            "{name} = {a} outside [-1, 1]"
        )));
    }
    Ok(())
}

/// `a chi + (1 - a) I / 2` for a qubit state `chi`.
pub fn depolarize(chi: &DensityMatrix, a: f64) -> Result<DensityMatrix> {
    check_amplitude("a", a)?;
    if chi.dim() != 2 {
        return Err(Error::InvalidParameter(format!(
            "depolarizing channel is defined for qubits, got dimension {}",
            chi.dim()
        )));
    }
    let half = (1.0 - a) / 2.0;
    let out = chi.matrix().map(|z| z * a) + CMatrix::identity(2, 2).map(|z| z * half);
    DensityMatrix::single(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DepolarizingParams {
    pub a1: f64,
    pub a2: f64,
}

impl DepolarizingParams {
    pub fn new(a1: f64, a2: f64) -> Result<Self> {
        check_amplitude("a1", a1)?;
        check_amplitude("a2", a2)?;
        Ok(Self { a1, a2 })
    }
}

/// Output state for `|0><0|` sent through depolarizing channels `a1`, `a2`.
pub fn example_state(params: DepolarizingParams) -> Result<TripartiteState> {
    let zero = DensityMatrix::basis(2, 0)?;
    let rho1 = depolarize(&zero, params.a1)?;
    let rho2 = depolarize(&zero, params.a2)?;
    build_closed_form(&rho1, &rho2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub a1: f64,
    pub a2: f64,
    pub total_correlation: f64,
    pub negativity_sum: f64,
    pub discord: f64,
    pub classification: Classification,
}

/// Evaluates one grid point; also returns the optimal basis for warm starts.
pub fn evaluate(
    params: DepolarizingParams,
    options: &DiscordOptions,
) -> Result<(SweepRow, QubitMeasurementBasis)> {
    let state = example_state(params)?;
    let neg = negativity(&state)?;
    let d = discord_via_measurement(&state, options)?;
    let row = SweepRow {
        a1: params.a1,
        a2: params.a2,
        total_correlation: d.mutual_information,
        negativity_sum: neg.sum,
        discord: d.discord,
        classification: Classification::from_measures(d.mutual_information, neg.sum, d.discord),
    };
    Ok((row, d.optimal_basis))
}

/// `i`-th of `resolution` evenly spaced points in `[-1, 1]`.
pub fn grid_value(i: usize, resolution: usize) -> f64 {
    if i + 1 == resolution {
        return 1.0;
    }
    -1.0 + 2.0 * i as f64 / (resolution - 1) as f64
}

pub fn sweep(resolution: usize) -> Result<Vec<SweepRow>> {
    sweep_with(resolution, &DiscordOptions::default())
}

/// Row-major sweep (`a1` outer, `a2` inner) over a uniform grid on `[-1, 1]^2`.
///
/// Rows of constant `a1` run in parallel; within a row each point warm-starts
/// the discord polish from its predecessor's optimum.
pub fn sweep_with(resolution: usize, options: &DiscordOptions) -> Result<Vec<SweepRow>> {
    if resolution < 2 {
        return Err(Error::InvalidParameter(format!(
            "sweep resolution must be at least 2, got {resolution}"
        )));
    }
    let rows: Vec<Vec<SweepRow>> = (0..resolution)
        .into_par_iter()
        .map(|i| {
            let a1 = grid_value(i, resolution);
            let mut opts = *options;
            let mut out = Vec::with_capacity(resolution);
            for j in 0..resolution {
                let params = DepolarizingParams::new(a1, grid_value(j, resolution))?;
                let (row, basis) = evaluate(params, &opts)?;
                opts.warm_start = Some(basis);
                out.push(row);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// How `a_i(t)` continues after the rate switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LateSegment {
    /// Restart the exponential from the value reached at `t_switch`.
    #[default]
    Carry,
    /// `a_i0 exp(-gamma_late t)` on the original time axis (discontinuous).
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryConfig {
    pub gamma1_early: f64,
    pub gamma2_early: f64,
    pub gamma1_late: f64,
    pub gamma2_late: f64,
    pub a10: f64,
    pub a20: f64,
    pub t_switch: f64,
    pub t_max: f64,
    pub n_steps: usize,
    pub late_segment: LateSegment,
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        Self {
            gamma1_early: 10.0,
            gamma2_early: 5.0,
            gamma1_late: 10.0,
            gamma2_late: 10.0,
            a10: 1.0,
            a20: (-1.0f64).exp(),
            t_switch: 0.2,
            t_max: 0.5,
            n_steps: 101,
            late_segment: LateSegment::Carry,
        }
    }
}

impl TrajectoryConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, g) in [
            ("gamma1_early", self.gamma1_early),
            ("gamma2_early", self.gamma2_early),
            ("gamma1_late", self.gamma1_late),
            ("gamma2_late", self.gamma2_late),
        ] {
            if !(g.is_finite() && g >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be a finite rate >= 0, got {g}"
                )));
            }
        }
        check_amplitude("a10", self.a10)?;
        check_amplitude("a20", self.a20)?;
        if !(self.t_switch > 0.0 && self.t_switch < self.t_max && self.t_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < t_switch < t_max, got t_switch = {}, t_max = {}",
                self.t_switch, self.t_max
            )));
        }
        if self.n_steps < 2 {
            return Err(Error::InvalidParameter(format!(
                "n_steps must be at least 2, got {}",
                self.n_steps
            )));
        }
        Ok(())
    }

    /// `(a1(t), a2(t))`.
    pub fn amplitudes(&self, t: f64) -> (f64, f64) {
        let one = |a0: f64, early: f64, late: f64| {
            if t <= self.t_switch {
                a0 * (-early * t).exp()
            } else {
                match self.late_segment {
                    LateSegment::Carry => {
                        a0 * (-early * self.t_switch).exp() * (-late * (t - self.t_switch)).exp()
                    }
                    LateSegment::Global => a0 * (-late * t).exp(),
                }
            }
        };
        (
            one(self.a10, self.gamma1_early, self.gamma1_late),
            one(self.a20, self.gamma2_early, self.gamma2_late),
        )
    }

    pub fn time(&self, step: usize) -> f64 {
        self.t_max * step as f64 / (self.n_steps - 1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub t: f64,
    #[serde(flatten)]
    pub row: SweepRow,
}

/// First times at which each correlation is gone, refined by bisection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeathTimes {
    /// Discord below the significance threshold and no negativity.
    pub combined: Option<f64>,
    pub negativity: Option<f64>,
    /// Discord below the optimizer's resolution.
    pub discord: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub config: TrajectoryConfig,
    pub rows: Vec<TrajectoryRow>,
    pub death: DeathTimes,
}

/// Resolution of the death-time bisection.
pub const DEATH_TIME_RESOLUTION: f64 = 1e-4;

fn is_dead_combined(r: &SweepRow) -> bool {
    r.discord <= tol::DISCORD && r.negativity_sum <= tol::NEGATIVITY
}

fn is_dead_negativity(r: &SweepRow) -> bool {
    r.negativity_sum <= tol::NEGATIVITY
}

fn is_dead_discord(r: &SweepRow) -> bool {
    r.discord <= tol::OPTIMIZER
}

pub fn trajectory(config: &TrajectoryConfig) -> Result<Trajectory> {
    trajectory_with(config, &DiscordOptions::default())
}

pub fn trajectory_with(config: &TrajectoryConfig, options: &DiscordOptions) -> Result<Trajectory> {
    config.validate()?;
    let at = |t: f64| -> Result<SweepRow> {
        let (a1, a2) = config.amplitudes(t);
        Ok(evaluate(DepolarizingParams::new(a1, a2)?, options)?.0)
    };
    let rows: Vec<TrajectoryRow> = (0..config.n_steps)
        .into_par_iter()
        .map(|k| {
            let t = config.time(k);
            Ok(TrajectoryRow { t, row: at(t)? })
        })
        .collect::<Result<_>>()?;

    let death_of = |dead: fn(&SweepRow) -> bool| -> Result<Option<f64>> {
        let Some(k) = rows.iter().position(|r| dead(&r.row)) else {
            return Ok(None);
        };
        if k == 0 {
            return Ok(Some(rows[0].t));
        }
        let (mut lo, mut hi) = (rows[k - 1].t, rows[k].t);
        while hi - lo > DEATH_TIME_RESOLUTION {
            let mid = 0.5 * (lo + hi);
            if dead(&at(mid)?) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(Some(hi))
    };
    let death = DeathTimes {
        combined: death_of(is_dead_combined)?,
        negativity: death_of(is_dead_negativity)?,
        discord: death_of(is_dead_discord)?,
    };
    Ok(Trajectory {
        config: *config,
        rows,
        death,
    })
}

/// `%.12g`-style formatting; never prints `-0`.
pub fn format_float(x: f64) -> String {
    const SIG: i32 = 12;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (SIG - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    let out = if (-5..SIG).contains(&exp) {
        trim(&format!("{:.*}", (SIG - 1 - exp) as usize, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim(mantissa), sign, exp.abs())
    };
    if out == "-0" {
        "0".to_string()
    } else {
        out
    }
}

pub const SWEEP_HEADER: [&str; 6] = [
    "a1",
    "a2",
    "total_bits",
    "negativity_sum",
    "discord_bits",
    "class",
];

fn row_fields(r: &SweepRow) -> [String; 6] {
    [
        format_float(r.a1),
        format_float(r.a2),
        format_float(r.total_correlation),
        format_float(r.negativity_sum),
        format_float(r.discord),
        r.classification.label().to_string(),
    ]
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record(row_fields(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trajectory_csv<W: Write>(rows: &[TrajectoryRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(std::iter::once("t").chain(SWEEP_HEADER))?;
    for r in rows {
        w.write_record(std::iter::once(format_float(r.t)).chain(row_fields(&r.row)))?;
    }
    w.flush()?;
    Ok(())
}
