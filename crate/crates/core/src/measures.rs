//! Correlations across the cut between the auxiliary qubit `a` and the two
//! registers `(12)`.
//!
//! Discord is the entropic one with rank-1 projective measurements on `a`:
//! `D = I(a:12) - max_basis J`, with
//! `J = S(rho_12) - sum_k p_k S(rho_12|k)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::linalg::{eigvals_hermitian, spectral_entropy_unnormalized, CMatrix};
use crate::sphere::{self, QubitMeasurementBasis, SearchOptions};
use crate::swaptest::TripartiteState;
use crate::tol::{self, clamp_zero, Tolerances};
use crate::Result;

/// Ratio between the negativity convention of the depolarizing example,
/// `N = |a1 - a2|`, and the sum of negative partial-transpose eigenvalues,
/// which equals `|a1 - a2| / 4` there.
pub const NEGATIVITY_SCALE: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Negativity {
    /// Sum of |negative eigenvalues| of the partial transpose on the registers.
    pub sum: f64,
    /// `NEGATIVITY_SCALE * sum`.
    pub scaled: f64,
}

/// Negativity of the partial transpose over subsystems 1 and 2.
pub fn negativity(state: &TripartiteState) -> Result<Negativity> {
    let pt = state.density().partial_transpose(&[1, 2])?;
    let sum: f64 = eigvals_hermitian(&pt)?
        .into_iter()
        .map(clamp_zero)
        .filter(|&l| l < 0.0)
        .fold(0.0, |acc, l| acc - l);
    Ok(Negativity {
        sum,
        scaled: NEGATIVITY_SCALE * sum,
    })
}

/// `S(rho_a) + S(rho_12) - S(rho_a12)` in bits.
pub fn mutual_information(state: &TripartiteState) -> Result<f64> {
    let s_a = state.aux_state().entropy()?;
    let s_12 = state.register_state().entropy()?;
    let s_all = state.density().entropy()?;
    Ok(clamp_zero(s_a + s_12 - s_all).max(0.0))
}

/// The four blocks `B_mn = <m|_a rho |n>_a` plus cached quantities.
struct Blocks {
    b: [[CMatrix; 2]; 2],
    registers: CMatrix,
}

impl Blocks {
    fn new(state: &TripartiteState) -> Self {
        let b = [
            [state.block(0, 0), state.block(0, 1)],
            [state.block(1, 0), state.block(1, 1)],
        ];
        let registers = &b[0][0] + &b[1][1];
        Self { b, registers }
    }

    /// `<x|_a rho |y>_a = sum_mn conj(x_m) y_n B_mn`.
    fn sandwich(&self, x: &[Complex64; 2], y: &[Complex64; 2]) -> CMatrix {
        let mut out = CMatrix::zeros(self.registers.nrows(), self.registers.ncols());
        for (m, xm) in x.iter().enumerate() {
            for (n, yn) in y.iter().enumerate() {
                let w = xm.conj() * yn;
                if w.norm() > 0.0 {
                    out += &self.b[m][n] * w;
                }
            }
        }
        out
    }

    /// `sum_k p_k S(rho_12|k)` for the measurement along `(theta, phi)`.
    fn conditional_entropy(&self, theta: f64, phi: f64) -> Result<f64> {
        let (u, _) = QubitMeasurementBasis::new(theta, phi).vectors();
        let plus = self.sandwich(&u, &u);
        let minus = &self.registers - &plus;
        let mut total = 0.0;
        for c in [plus, minus] {
            let p: f64 = c.diagonal().iter().map(|z| z.re).sum();
            if p > tol::RANK {
                // p S(c/p) = H(c) + p log2 p
                total += spectral_entropy_unnormalized(&c)? + p * p.log2();
            }
        }
        Ok(total)
    }

    /// Squared Frobenius norm of `<u|_a rho |u_perp>_a`.
    fn off_diagonal_weight(&self, theta: f64, phi: f64) -> f64 {
        let (u, v) = QubitMeasurementBasis::new(theta, phi).vectors();
        self.sandwich(&u, &v).norm_squared()
    }
}

/// Settings of the discord optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct DiscordOptions {
    pub search: SearchOptions,
    /// Extra polish start, e.g. the optimum of a neighbouring sweep point.
    pub warm_start: Option<QubitMeasurementBasis>,
}

impl DiscordOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            search: SearchOptions {
                seed: Some(seed),
                ..SearchOptions::default()
            },
            warm_start: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscordResult {
    /// `I - J_max`, bits, clamped to be nonnegative.
    pub discord: f64,
    /// `J_max`, bits.
    pub classical_correlation: f64,
    pub mutual_information: f64,
    pub optimal_basis: QubitMeasurementBasis,
}

/// Discord with projective measurement on the auxiliary qubit.
pub fn discord_via_measurement(
    state: &TripartiteState,
    options: &DiscordOptions,
) -> Result<DiscordResult> {
    let blocks = Blocks::new(state);
    let s_12 = state.register_state().entropy()?;
    let mi = mutual_information(state)?;
    let best = sphere::maximize(
        |t, p| blocks.conditional_entropy(t, p).map(|h| -h),
        &options.search,
        options.warm_start,
    )?;
    let j = s_12 + best.value;
    let discord = clamp_zero(mi - j).max(0.0);
    Ok(DiscordResult {
        discord,
        classical_correlation: mi - discord,
        mutual_information: mi,
        optimal_basis: best.basis.canonical(),
    })
}

/// Result of the classical-quantum structure test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalQuantum {
    pub is_classical_quantum: bool,
    /// Minimum over bases of the Frobenius norm of the off-diagonal block.
    pub residual: f64,
    pub basis: QubitMeasurementBasis,
}

/// Checks whether `rho = sum_k p_k |k><k|_a (x) rho_k` for some qubit basis.
pub fn is_classical_quantum(state: &TripartiteState) -> Result<ClassicalQuantum> {
    let blocks = Blocks::new(state);
    let opts = SearchOptions {
        min_step: 1e-12,
        ..SearchOptions::default()
    };
    let best = sphere::maximize(|t, p| Ok(-blocks.off_diagonal_weight(t, p)), &opts, None)?;
    let residual = (-best.value).max(0.0).sqrt();
    Ok(ClassicalQuantum {
        is_classical_quantum: residual <= tol::CLASSICAL_QUANTUM,
        residual,
        basis: best.basis.canonical(),
    })
}

/// Correlation class of the post-circuit state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Classification {
    #[serde(rename = "product")]
    Product,
    #[serde(rename = "classical-only")]
    ClassicalOnly,
    #[serde(rename = "entangled")]
    Entangled,
    /// Discord without entanglement. Never expected for this circuit.
    #[serde(rename = "ANOMALY")]
    Anomaly,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Product => "product",
            Self::ClassicalOnly => "classical-only",
            Self::Entangled => "entangled",
            Self::Anomaly => "ANOMALY",
        }
    }

    /// Applies the thresholds in [`tol`] to the three measures.
    pub fn from_measures(total_correlation: f64, negativity_sum: f64, discord: f64) -> Self {
        if negativity_sum <= tol::NEGATIVITY && discord > tol::DISCORD {
            Self::Anomaly
        } else if total_correlation <= tol::CORRELATION {
            Self::Product
        } else if negativity_sum > tol::NEGATIVITY {
            Self::Entangled
        } else {
            Self::ClassicalOnly
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub total_correlation: f64,
    pub negativity_sum: f64,
    pub negativity_scaled: f64,
    pub discord: f64,
    pub classical_correlation: f64,
    pub classification: Classification,
    pub optimal_basis: QubitMeasurementBasis,
    pub classical_quantum: ClassicalQuantum,
    pub tolerances: Tolerances,
}

impl CorrelationReport {
    pub fn is_anomaly(&self) -> bool {
        self.classification == Classification::Anomaly
    }
}

pub fn classify(state: &TripartiteState) -> Result<CorrelationReport> {
    classify_with(state, &DiscordOptions::default())
}

pub fn classify_with(
    state: &TripartiteState,
    options: &DiscordOptions,
) -> Result<CorrelationReport> {
    let neg = negativity(state)?;
    let d = discord_via_measurement(state, options)?;
    let cq = is_classical_quantum(state)?;
    Ok(CorrelationReport {
        total_correlation: d.mutual_information,
        negativity_sum: neg.sum,
        negativity_scaled: neg.scaled,
        discord: d.discord,
        classical_correlation: d.classical_correlation,
        classification: Classification::from_measures(d.mutual_information, neg.sum, d.discord),
        optimal_basis: d.optimal_basis,
        classical_quantum: cq,
        tolerances: Tolerances::default(),
    })
}
