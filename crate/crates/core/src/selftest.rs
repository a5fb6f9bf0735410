//! Quick property checks over seeded random inputs, for the `selftest`
//! command. Sizes are kept small so a full run takes a few seconds.

use serde::Serialize;

use crate::linalg::{max_abs_diff, DensityMatrix};
use crate::measures::{discord_via_measurement, mutual_information, negativity, DiscordOptions};
use crate::random::{self, StateRng};
use crate::scenarios::{example_state, trajectory, DepolarizingParams, TrajectoryConfig};
use crate::swaptest::{build_by_gates, build_closed_form, measure_stats, sample_shots};
use crate::witness::{construct_witness, random_pair, ProofCase};
use crate::{tol, Result};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {} ({})", self.name, self.detail)
    }
}

fn binary_entropy(p: f64) -> f64 {
    [p, 1.0 - p]
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum()
}

fn mixed_pair(rng: &mut StateRng, d: usize) -> Result<(DensityMatrix, DensityMatrix)> {
    let r1 = rng_rank(rng, d);
    let r2 = rng_rank(rng, d);
    Ok((
        random::ginibre_state(rng, d, r1)?,
        random::ginibre_state(rng, d, r2)?,
    ))
}

fn rng_rank(rng: &mut StateRng, d: usize) -> usize {
    use rand::Rng;
    rng.random_range(1..=d)
}

type Outcome = Result<(bool, String)>;

fn circuit_agreement(rng: &mut StateRng) -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..30 {
        let (a, b) = mixed_pair(rng, 2 + k % 3)?;
        let c = build_closed_form(&a, &b)?;
        let g = build_by_gates(&a, &b)?;
        worst = worst.max(max_abs_diff(c.matrix(), g.matrix()));
    }
    Ok((worst <= 1e-12, format!("max entry diff {worst:.3e}")))
}

fn overlap_identity(rng: &mut StateRng) -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..30 {
        let (a, b) = mixed_pair(rng, 2 + k % 3)?;
        let direct = (a.matrix() * b.matrix()).trace().re;
        let stats = measure_stats(&build_closed_form(&a, &b)?);
        worst = worst.max((stats.overlap - direct).abs());
    }
    Ok((worst <= 1e-10, format!("max overlap error {worst:.3e}")))
}

fn linalg_invariants(rng: &mut StateRng) -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let (a, b) = mixed_pair(rng, 2 + k % 3)?;
        let ab = a.tensor(&b);
        worst = worst.max((ab.matrix().trace().re - 1.0).abs());
        worst = worst.max(max_abs_diff(ab.partial_trace(&[0])?.matrix(), a.matrix()));
        worst = worst.max(max_abs_diff(ab.partial_trace(&[1])?.matrix(), b.matrix()));
        let pt = DensityMatrix::new(ab.partial_transpose(&[1])?, ab.dims().to_vec());
        if let Ok(pt) = pt {
            let back = pt.partial_transpose(&[1])?;
            worst = worst.max(max_abs_diff(&back, ab.matrix()));
        }
        let e = ab.eig()?;
        worst = worst.max(max_abs_diff(&e.reconstruct(), ab.matrix()));
        let additivity = ab.entropy()? - a.entropy()? - b.entropy()?;
        worst = worst.max(additivity.abs());
    }
    Ok((worst <= 1e-8, format!("max deviation {worst:.3e}")))
}

fn distinct_pairs_are_entangled(rng: &mut StateRng) -> Outcome {
    let mut count = 0;
    let mut worst_value = f64::NEG_INFINITY;
    let mut worst_gap: f64 = 0.0;
    let mut min_neg = f64::INFINITY;
    for case in [ProofCase::I, ProofCase::II, ProofCase::III, ProofCase::IV] {
        for k in 0..12 {
            let (a, b) = random_pair(rng, 2 + k % 3, case)?;
            let w = construct_witness(&a, &b)?;
            if w.case_id != case {
                return Ok((
                    false,
                    format!("expected case {case}, built case {}", w.case_id),
                ));
            }
            worst_value = worst_value.max(w.value);
            if case != ProofCase::I {
                worst_gap = worst_gap.max((w.value - w.predicted_value).abs());
            }
            min_neg = min_neg.min(negativity(&build_closed_form(&a, &b)?)?.sum);
            count += 1;
        }
    }
    Ok((
        worst_value < -1e-12 && worst_gap <= 1e-10 && min_neg > tol::NEGATIVITY,
        format!(
            "{count} pairs, largest witness value {worst_value:.3e}, formula gap {worst_gap:.1e}, smallest negativity {min_neg:.3e}"
        ),
    ))
}

fn equal_mixed_inputs(rng: &mut StateRng) -> Outcome {
    let mut worst_neg: f64 = 0.0;
    let mut worst_discord: f64 = 0.0;
    let mut worst_mi: f64 = 0.0;
    for k in 0..6 {
        let rho = random::ginibre_state(rng, 2 + k % 2, 2 + k % 2)?;
        let st = build_closed_form(&rho, &rho)?;
        worst_neg = worst_neg.max(negativity(&st)?.sum);
        worst_discord =
            worst_discord.max(discord_via_measurement(&st, &DiscordOptions::default())?.discord);
        let p = measure_stats(&st).p_plus;
        worst_mi = worst_mi.max((mutual_information(&st)? - binary_entropy(p)).abs());
    }
    Ok((
        worst_neg <= tol::NEGATIVITY && worst_discord <= tol::DISCORD && worst_mi <= 1e-9,
        format!("negativity {worst_neg:.1e}, discord {worst_discord:.1e}, information error {worst_mi:.1e}"),
    ))
}

fn equal_pure_inputs(rng: &mut StateRng) -> Outcome {
    let mut worst: f64 = 0.0;
    for d in [2, 3, 4] {
        let psi = random::random_pure(rng, d)?;
        worst = worst.max(mutual_information(&build_closed_form(&psi, &psi)?)?);
    }
    Ok((
        worst <= 1e-9,
        format!("largest mutual information {worst:.1e}"),
    ))
}

fn negativity_scaling() -> Outcome {
    let mut ratios = Vec::new();
    let n = 6;
    for i in 0..n {
        for j in 0..n {
            let a1 = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
            let a2 = -1.0 + 2.0 * j as f64 / (n - 1) as f64;
            if i == j {
                continue;
            }
            let st = example_state(DepolarizingParams::new(a1, a2)?)?;
            ratios.push(negativity(&st)?.sum / (a1 - a2).abs());
        }
    }
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let spread = (hi - lo) / hi;
    Ok((
        spread <= 1e-8,
        format!("ratio {hi:.12}, relative spread {spread:.1e}"),
    ))
}

fn sudden_death() -> Outcome {
    let t = trajectory(&TrajectoryConfig::default())?;
    let (Some(c), Some(n), Some(d)) = (t.death.combined, t.death.negativity, t.death.discord)
    else {
        return Ok((false, format!("missing death time: {:?}", t.death)));
    };
    Ok((
        (c - 0.2).abs() <= 1e-3 && (n - d).abs() <= 1e-3,
        format!("death at {c:.4}, negativity {n:.4}, discord {d:.4}"),
    ))
}

fn shot_estimator(seed: u64) -> Outcome {
    let mixed = DensityMatrix::maximally_mixed(2)?;
    let zero = DensityMatrix::basis(2, 0)?;
    let st = build_closed_form(&zero, &mixed)?;
    let mut worst: f64 = 0.0;
    for k in 0..10 {
        let est = sample_shots(&st, 100_000, seed.wrapping_add(k))?;
        worst = worst.max((est.estimate - 0.5).abs() / est.std_error);
    }
    Ok((
        worst <= 5.0,
        format!("largest deviation {worst:.2} standard errors"),
    ))
}

/// Runs every check; errors inside a check count as failures.
pub fn run(seed: u64) -> Vec<Check> {
    let mut rng = random::seeded(seed);
    let mut out = Vec::new();
    let mut record = |name: &'static str, outcome: Outcome| {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        out.push(Check {
            name,
            passed,
            detail,
        });
    };
    record(
        "closed form matches gate circuit",
        circuit_agreement(&mut rng),
    );
    record("overlap identity", overlap_identity(&mut rng));
    record(
        "tensor, partial trace, transpose, eigen invariants",
        linalg_invariants(&mut rng),
    );
    record(
        "distinct inputs are entangled",
        distinct_pairs_are_entangled(&mut rng),
    );
    record(
        "equal mixed inputs are classical",
        equal_mixed_inputs(&mut rng),
    );
    record(
        "equal pure inputs give a product state",
        equal_pure_inputs(&mut rng),
    );
    record(
        "depolarized negativity scales with |a1 - a2|",
        negativity_scaling(),
    );
    record("sudden death of the depolarized example", sudden_death());
    record("sampled overlap estimator", shot_estimator(seed));
    out
}
