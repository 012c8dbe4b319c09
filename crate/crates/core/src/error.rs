use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// The inequality (or model property) that rules out a risk-neutral measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    /// `rho > 1` is required for the jump transform at `omega = -i` to be finite.
    RhoAboveOne,
    /// `gamma > rho - 1` is required for a positive transaction rate.
    GammaAboveRhoMinusOne,
    /// Waiting times are not exponential, so no risk-neutral measure exists.
    ExponentialWaits,
    /// The model carries a transaction rate other than the martingale rate.
    MartingaleRate,
}

impl fmt::Display for Feasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Feasibility::RhoAboveOne => "rho > 1",
            Feasibility::GammaAboveRhoMinusOne => "gamma > rho - 1",
            Feasibility::ExponentialWaits => "exponential waiting times",
            Feasibility::MartingaleRate => "lambda = martingale rate",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate denominator: |{what}| = {value:e}")]
    DegenerateDenominator { what: &'static str, value: f64 },

    #[error("no risk-neutral measure: requires {violated} ({detail})")]
    InfeasibleRiskNeutral { violated: Feasibility, detail: String },

    #[error("laplace inversion unstable at t = {t}: estimates {coarse} and {fine} disagree")]
    InversionUnstable { t: f64, coarse: f64, fine: f64 },

    #[error("excessive censoring: {censored} of {n_paths} paths unresolved, discounted weight {weight:e} > {bound:e}")]
    ExcessiveCensoring { censored: u64, n_paths: u64, weight: f64, bound: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn infeasible(violated: Feasibility, detail: impl Into<String>) -> Self {
        Error::InfeasibleRiskNeutral { violated, detail: detail.into() }
    }
}
