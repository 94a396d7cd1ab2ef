use thiserror::Error;

use crate::expr::{EvalError, ParseError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("zero test inconclusive: {poles} of {draws} draws hit poles")]
    Inconclusive { poles: usize, draws: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("c(t) is not positive at t = {t}; the real-valued construction needs c > 0")]
    NonPositiveC { t: f64 },
    #[error("equation is not reducible to constant coefficients")]
    NotReducible,
    #[error("family {family} belongs to the {expected} branch, not {got}")]
    SignMismatch { family: String, expected: String, got: String },
    #[error("parameter {name}: {reason}")]
    Parameter { name: String, reason: String },
    #[error("unknown solution family `{0}`")]
    UnknownFamily(String),
    #[error("coefficient pattern mismatch: {0}")]
    PatternMismatch(String),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("inversion failed: {0}")]
    Inversion(String),
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("boundary data is singular at t = {t}")]
    BoundaryPole { t: f64 },
    #[error("every grid point is singular")]
    AllPoles,
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
