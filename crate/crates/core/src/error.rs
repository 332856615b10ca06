use thiserror::Error;

use crate::expr::{EvalError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("weight is not positive: p({t}) has {detail}")]
    NonPositiveWeight { t: f64, detail: String },
    #[error("f vanishes on the line Im z = {y}; only the zero function does that")]
    ZeroLine { y: f64 },
    #[error("curve is not convex (worst defect {defect:e} at t={at}); no affine minorant certified")]
    NotConvex { defect: f64, at: f64 },
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("no decay threshold found below x_cap={x_cap} (sup over the tail stays at {best:e})")]
    DecayNotFound { x_cap: f64, best: f64 },
    #[error("point w=-1 has no preimage under the Cayley map")]
    CayleyPole,
    #[error("invalid input: {0}")]
    Invalid(String),
}
