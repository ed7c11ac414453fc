use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed numerical input (non-finite entries, bad exponent, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An instance that cannot be normalized or violates a basic assumption.
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// A precondition of an operation was not met by the supplied arguments.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The disjunction fails Assumption 1 (no containment) or Assumption 2
    /// (strict feasibility); cut operations refuse such instances.
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),

    /// A quantity left its provable range by more than the numerical guard.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The requested direction does not generate a member of the linear family.
    #[error("no certificate: {0}")]
    NoCertificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
