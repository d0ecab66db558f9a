//! Error taxonomy shared by the whole crate.

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation
    /// (invalid angular index, negative scale, nonpositive radius, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Pointwise evaluation requested at a singular point (R = 0,
    /// coincident point charges, ...).
    #[error("singularity: {0}")]
    Singularity(String),

    /// A quadrature or series failed to converge to the requested tolerance.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// The requested evaluation is not defined for the model
    /// (e.g. pointwise density of a pure point charge).
    #[error("unsupported evaluation: {0}")]
    Unsupported(String),

    /// Malformed input document or incomplete data.
    #[error("input error: {0}")]
    Input(String),
}

impl Error {
    /// Exit status used by the CLI: 1 for numeric failures, 2 for
    /// anything the caller could have validated from the inputs.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numeric(_) => 1,
            _ => 2,
        }
    }
}
