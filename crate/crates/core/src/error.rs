use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("partition mismatch between operands")]
    PartitionMismatch,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("index out of range: {0}")]
    IndexRange(String),
    #[error("order {order} exceeds the cap of {cap}")]
    OrderCap { order: usize, cap: usize },
    #[error("kernel is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("index function must vanish on diagonals (offending value {0:e})")]
    DiagonalSupport(f64),
    #[error("order q = {0} must be even")]
    OddOrder(usize),
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("integer overflow in exact arithmetic: {0}")]
    Overflow(String),
    #[error("guard exceeded: {0}")]
    Guard(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("engine `{0}` is not registered")]
    UnknownEngine(String),
    #[error("engine `{engine}` does not support {what}")]
    Unsupported { engine: &'static str, what: String },
    #[error("sequence law `{0}` is not registered")]
    UnknownSequence(String),
    #[error("raw moments unavailable: {0}")]
    MissingMoments(String),
    #[error("cell masses do not match the Poisson intensities")]
    MassMismatch,
    #[error("special function failed to converge: {0}")]
    Convergence(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors raised by size or enumeration guards rather than by
    /// malformed input.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard(_) | Error::OrderCap { .. } | Error::Overflow(_))
    }
}
