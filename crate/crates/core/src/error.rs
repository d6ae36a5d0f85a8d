use thiserror::Error;

/// Errors raised by the symbolic engine, the classifiers and the CLI layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("cannot add radial fields with r-powers {left} and {right}")]
    MixedRadialPower { left: u32, right: u32 },

    #[error("cannot multiply by r: field has r-power 0")]
    NegativeRadialPower,

    /// A parameter outside the mathematical domain of an operation.
    #[error("domain violation: {0}")]
    Domain(String),

    /// A guaranteed identity failed; indicates a bug rather than bad input.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn inconsistent(msg: impl Into<String>) -> Self {
        Error::Inconsistent(msg.into())
    }
}
