use thiserror::Error;

/// Errors raised by the arithmetic-dynamics routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("minimal polynomial is reducible over Q")]
    ReducibleMinimalPolynomial,
    #[error("map has degree one; canonical heights need degree >= 2")]
    DegreeOne,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("coefficient size exceeded the {budget_bits}-bit budget")]
    CoefficientBlowup { budget_bits: u64 },
    #[error("map is not regular: {0}")]
    NotRegular(String),
    #[error("base point is not periodic under p")]
    NotPeriodic,
    #[error("polynomial is linearly related to a power map")]
    PowerMapDegenerate,
    #[error("input polynomial is special (power or Chebyshev conjugate)")]
    SpecialInput,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("degree budget exceeded: degree {degree} > {budget}")]
    DegreeBudgetExceeded { degree: u64, budget: u64 },
    #[error("solution set has a positive-dimensional component")]
    PositiveDimensional,
    #[error("root isolation failed: {0}")]
    RootIsolationFailure(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at position {pos} in `{field}`: {msg}")]
    Parse { field: String, pos: usize, msg: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(field: &str, pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { field: field.to_string(), pos, msg: msg.into() }
    }
}
