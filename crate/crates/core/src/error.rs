use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no spectrum: operation needs a non-empty set")]
    EmptySet,

    #[error("points must be finite and sorted ascending (index {index})")]
    UnsortedPoints { index: usize },

    #[error("invalid intervals: {0}")]
    InvalidIntervals(String),

    #[error("matrix is not Hermitian: entry ({row},{col}) deviates by {deviation:e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("probe precondition failed: {0}")]
    Precondition(String),

    #[error("resolvent unbounded: z = {re} + {im}i lies on the spectrum")]
    ResolventUnbounded { re: f64, im: f64 },

    #[error("band search found {found} of {expected} bands")]
    BandCount { found: usize, expected: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown substitution word `{0}`")]
    UnknownWord(String),

    #[error("infeasible counterexample at n = {n}: {reason}")]
    Infeasible { n: usize, reason: String },

    #[error("spectral failure at t = {t}: {source}")]
    AtParameter {
        t: String,
        #[source]
        source: Box<Error>,
    },

    #[error("not enough data: {0}")]
    InsufficientData(String),

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
