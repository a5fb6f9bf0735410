mod manifest;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use manifest::RunManifest;
use swapcorr::linalg::MatrixJson;
use swapcorr::measures::{classify_with, Classification, DiscordOptions};
use swapcorr::scenarios::{self, format_float, LateSegment, TrajectoryConfig};
use swapcorr::{build_closed_form, construct_witness, measure_stats, sample_shots, DensityMatrix};

/// Largest register dimension accepted from matrix files.
const MAX_REGISTER_DIM: usize = 8;

#[derive(Parser)]
#[command(
    name = "swapcorr",
    version,
    about = "SWAP-test overlap measurement: simulation and correlation analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact overlap Tr(rho1 rho2), outcome probabilities, and optionally a shot estimate.
    Overlap {
        state1: PathBuf,
        state2: PathBuf,
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Correlation report for the output state, with a witness when entangled.
    Analyze {
        state1: PathBuf,
        state2: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Correlation surfaces of the depolarized example over (a1, a2).
    Sweep {
        #[arg(long, default_value_t = 101)]
        resolution: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time series of the depolarized example and its death time.
    Trajectory {
        #[command(flatten)]
        config: TrajectoryArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Runs the built-in property checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LateArg {
    Carry,
    Global,
}

#[derive(Args)]
struct TrajectoryArgs {
    #[arg(long)]
    gamma1_early: Option<f64>,
    #[arg(long)]
    gamma2_early: Option<f64>,
    #[arg(long)]
    gamma1_late: Option<f64>,
    #[arg(long)]
    gamma2_late: Option<f64>,
    #[arg(long)]
    a10: Option<f64>,
    #[arg(long)]
    a20: Option<f64>,
    #[arg(long)]
    t_switch: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    n_steps: Option<usize>,
    #[arg(long, value_enum)]
    late_segment: Option<LateArg>,
}

impl TrajectoryArgs {
    fn resolve(&self) -> TrajectoryConfig {
        let d = TrajectoryConfig::default();
        TrajectoryConfig {
            gamma1_early: self.gamma1_early.unwrap_or(d.gamma1_early),
            gamma2_early: self.gamma2_early.unwrap_or(d.gamma2_early),
            gamma1_late: self.gamma1_late.unwrap_or(d.gamma1_late),
            gamma2_late: self.gamma2_late.unwrap_or(d.gamma2_late),
            a10: self.a10.unwrap_or(d.a10),
            a20: self.a20.unwrap_or(d.a20),
            t_switch: self.t_switch.unwrap_or(d.t_switch),
            t_max: self.t_max.unwrap_or(d.t_max),
            n_steps: self.n_steps.unwrap_or(d.n_steps),
            late_segment: match self.late_segment {
                Some(LateArg::Carry) => LateSegment::Carry,
                Some(LateArg::Global) => LateSegment::Global,
                None => d.late_segment,
            },
        }
    }
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl From<swapcorr::Error> for Failure {
    fn from(e: swapcorr::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Validation(format!("{}: {e}", path.display()))
}

fn read_state(path: &Path) -> Result<DensityMatrix, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let rho = MatrixJson::parse(&text)
        .and_then(|m| m.to_density())
        .map_err(|e| io_failure(path, e))?;
    if rho.dim() > MAX_REGISTER_DIM {
        return Err(Failure::Validation(format!(
            "{}: dimension {} exceeds the limit of {MAX_REGISTER_DIM} per register",
            path.display(),
            rho.dim()
        )));
    }
    Ok(rho)
}

fn read_pair(a: &Path, b: &Path) -> Result<(DensityMatrix, DensityMatrix), Failure> {
    let rho1 = read_state(a)?;
    let rho2 = read_state(b)?;
    if rho1.dim() != rho2.dim() {
        return Err(Failure::Validation(format!(
            "dimension mismatch: {} is {}-dimensional, {} is {}-dimensional",
            a.display(),
            rho1.dim(),
            b.display(),
            rho2.dim()
        )));
    }
    Ok((rho1, rho2))
}

fn emit_json(value: &Value, out: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("serializable report");
    println!("{text}");
    if let Some(path) = out {
        std::fs::write(path, format!("{text}\n")).map_err(|e| io_failure(path, e))?;
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| io_failure(path, e))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Overlap {
            state1,
            state2,
            shots,
            seed,
            out,
        } => {
            let (rho1, rho2) = read_pair(&state1, &state2)?;
            let state = build_closed_form(&rho1, &rho2)?;
            let stats = measure_stats(&state);
            let estimate = shots.map(|n| sample_shots(&state, n, seed)).transpose()?;
            let manifest = RunManifest::new(
                "overlap",
                json!({ "state1": state1, "state2": state2, "shots": shots }),
                seed,
            );
            emit_json(
                &json!({ "manifest": manifest, "stats": stats, "sampled": estimate }),
                out.as_deref(),
            )
        }
        Command::Analyze {
            state1,
            state2,
            seed,
            out,
        } => {
            let (rho1, rho2) = read_pair(&state1, &state2)?;
            let state = build_closed_form(&rho1, &rho2)?;
            let report = classify_with(&state, &DiscordOptions::default())?;
            let witness = if report.classification == Classification::Entangled {
                Some(construct_witness(&rho1, &rho2)?)
            } else {
                None
            };
            let manifest = RunManifest::new(
                "analyze",
                json!({ "state1": state1, "state2": state2 }),
                seed,
            );
            emit_json(
                &json!({ "manifest": manifest, "report": report, "witness": witness }),
                out.as_deref(),
            )
        }
        Command::Sweep {
            resolution,
            out,
            seed,
        } => {
            let rows = scenarios::sweep(resolution)?;
            scenarios::write_sweep_csv(&rows, create(&out)?).map_err(|e| io_failure(&out, e))?;
            let manifest = RunManifest::new("sweep", json!({ "resolution": resolution }), seed);
            manifest
                .write_sidecar(&out)
                .map_err(|e| io_failure(&out, e))?;
            let anomalies = rows
                .iter()
                .filter(|r| r.classification == Classification::Anomaly)
                .count();
            println!("rows: {}", rows.len());
            println!("anomalies: {anomalies}");
            Ok(())
        }
        Command::Trajectory { config, out, seed } => {
            let config = config.resolve();
            let traj = scenarios::trajectory(&config)?;
            scenarios::write_trajectory_csv(&traj.rows, create(&out)?)
                .map_err(|e| io_failure(&out, e))?;
            let manifest = RunManifest::new(
                "trajectory",
                serde_json::to_value(config).expect("serializable config"),
                seed,
            );
            manifest
                .write_sidecar(&out)
                .map_err(|e| io_failure(&out, e))?;
            let show = |t: Option<f64>| t.map_or_else(|| "none".to_string(), format_float);
            println!("death_time: {}", show(traj.death.combined));
            println!("negativity_death_time: {}", show(traj.death.negativity));
            println!("discord_death_time: {}", show(traj.death.discord));
            Ok(())
        }
        Command::Selftest { seed } => {
            let checks = swapcorr::selftest::run(seed);
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(Failure::Numerical(format!(
                    "{failed} of {} checks failed",
                    checks.len()
                )));
            }
            println!("all {} checks passed", checks.len());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::Validation(m) | Failure::Numerical(m) => m,
            };
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
