use thiserror::Error;

use crate::wedge::Attempt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} must be positive and finite, got {value}")]
    NonPositive { what: &'static str, value: f64 },

    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("invalid gas law: {0}")]
    InvalidLaw(String),

    #[error("rarefaction integral from vacuum diverges for gamma = 1")]
    DivergentIntegral,

    #[error("no vacuum case possible for gamma = 1")]
    NoVacuumForIsothermal,

    #[error("degenerate shock: both sides have density {0}")]
    DegenerateShock(f64),

    #[error("tangential velocities differ across the interface: {left} vs {right}")]
    TangentialMismatch { left: f64, right: f64 },

    #[error("rho1 = {rho1} lies outside the open interval ({lo}, {hi})")]
    OutsideInterval { rho1: f64, lo: f64, hi: f64 },

    #[error("criterion violated: discriminant {0} is not positive")]
    CriterionViolated(f64),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("bisection bracket failure on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("construction failed after {} attempts", attempts.len())]
    ConstructionFailed { attempts: Vec<Attempt> },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub(crate) fn positive(what: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonPositive { what, value })
    }
}

pub(crate) fn finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what, value })
    }
}
