use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid integer set: {0}")]
    InvalidSet(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unbound connection {0}")]
    UnboundConnection(String),

    #[error("stimulus addresses unknown connection {0}")]
    UnknownConnection(String),

    #[error("transition index {0} is not in the transition family")]
    UnknownTransition(usize),

    #[error("stuck configuration: no transition for state {state:?} reading {symbol:?}")]
    StuckConfiguration { state: String, symbol: String },

    #[error("invalid machine: {0}")]
    InvalidMachine(String),

    #[error("compute on blank cell ({row}, {col})")]
    ComputeOnBlank { row: usize, col: usize },

    #[error("cell ({row}, {col}) is outside the grid")]
    OutOfBounds { row: usize, col: usize },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("{samples} samples exceed the in-memory budget of {budget}; use goertzel_count or spectrum_window")]
    BudgetExceeded { samples: u64, budget: u64 },

    #[error("spectral precision loss at f = {frequency}: residual {residual:.3e} >= 0.25")]
    PrecisionLoss { frequency: i64, residual: f64 },

    #[error("{what}: n = {n} exceeds the limit of {limit}")]
    TooLarge { what: &'static str, n: usize, limit: usize },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures caused by resource limits or numeric precision rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. }
                | Error::PrecisionLoss { .. }
                | Error::TooLarge { .. }
                | Error::Inconsistent(_)
        )
    }
}
