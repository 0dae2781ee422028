use thiserror::Error;

use crate::coin::{Basis, Family};

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coin parameter {value} is outside the admissible range for the {family} family")]
    ParameterOutOfRange { family: Family, value: f64 },

    #[error("coin state is already in the {0} basis")]
    BasisMismatch(Basis),

    #[error("coin state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("requested {requested} steps, budget is {max}")]
    StepBudgetExceeded { requested: usize, max: usize },

    #[error("rescaled moments need at least one step")]
    ZeroSteps,

    #[error("velocity {v} lies outside the open support (-{bound}, {bound})")]
    OutsideSupport { v: f64, bound: f64 },

    #[error("square-root argument {value} is negative beyond roundoff")]
    NegativeRadicand { value: f64 },

    #[error("quadrature did not reach tolerance after {subdivisions} subdivisions (error estimate {error_estimate:e})")]
    QuadratureFailure {
        subdivisions: usize,
        error_estimate: f64,
    },

    #[error("t = {t} exceeds the oracle budget of {max} steps")]
    OracleRegimeExceeded { t: usize, max: usize },

    #[error("Bloch eigenvector normalization degenerates at k = {k}")]
    DegenerateNormalization { k: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
