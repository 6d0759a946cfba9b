use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("degenerate channel: zero-norm legitimate vector")]
    DegenerateChannel,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported regime: colluding eavesdroppers need n_antennas > n_eves (got {n_antennas} <= {n_eves})")]
    UnsupportedRegime { n_antennas: usize, n_eves: usize },

    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    #[error("configuration error: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error("infeasible delay target for user {user}: {target} <= a_max {a_max}")]
    InfeasibleDelay { user: usize, target: f64, a_max: f64 },

    #[error("invariant violated at slot {slot}: {detail}")]
    InvariantViolation { slot: u64, detail: String },

    #[error("misuse: {0}")]
    Misuse(String),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(vec![msg.into()])
    }
}
