use thiserror::Error;

/// Errors surfaced by the simulator and the correlation analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("subsystem dimensions {dims:?} do not multiply to matrix dimension {dim}")]
    BadSubsystemDims { dims: Vec<usize>, dim: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("not Hermitian (max |M - M^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("invalid subsystem index {index} for {count} subsystems")]
    InvalidSubsystem { index: usize, count: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("input states are indistinguishable (max entry difference {0:e})")]
    IndistinguishableInputs(f64),

    #[error("no violating eigenvalue pair found for distinct inputs with matched eigenbases")]
    NoViolatingPair,

    #[error("witness value {0:e} is not negative")]
    NonNegativeWitness(f64),

    #[error("malformed matrix data: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by bad input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        !self.is_numerical() && !matches!(self, Error::Io(_) | Error::Csv(_))
    }

    /// True when a computation on valid input failed to produce a trustworthy result.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Numerical(_) | Error::NoViolatingPair | Error::NonNegativeWitness(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
