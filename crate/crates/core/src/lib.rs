//! Perpetual American option pricing when the log-price follows a
//! continuous-time random walk (CTRW) with two-sided exponential jumps.
//!
//! The crate is organised bottom-up:
//!
//! * [`process`] holds the market model, the Fourier-Laplace propagator, the
//!   risk-neutral rate constraint and increment sampling.
//! * [`survival`] evaluates Laplace-domain survival probabilities for
//!   corridors and one-sided thresholds, plus their Wiener counterparts.
//! * [`laplace`] inverts Laplace transforms numerically (Gaver-Stehfest and
//!   fixed Talbot).
//! * [`pricing`] turns survival probabilities into binary and vanilla
//!   perpetual prices and exercise boundaries, with the Black-Scholes limit.
//! * [`mc`] is an independent Monte Carlo first-passage engine used to check
//!   every closed form.

// `!(x > 0.0)` is the NaN-rejecting form used throughout for validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dd;
pub mod error;
pub mod laplace;
pub mod mc;
pub mod pricing;
pub mod process;
pub mod survival;

pub use dd::DoubleDouble;
pub use error::{Error, Feasibility, Result};
pub use laplace::{invert_laplace, invert_survival, preferred_method, InversionMethod, LaplaceTransform, SurvivalPoint};
pub use mc::{overshoot_distribution, run, Estimator, McEstimate, OvershootSample, Region, SimulationPlan};
pub use pricing::{
    binary_price, bs_limit_price, convergence_table, expected_exercise_payoff, price,
    vanilla_call_price, vanilla_put_price, Boundary, ConvergenceRow, OptionSpec, PriceResult,
    Regime,
};
pub use process::{
    martingale_rate, propagator_fl, sample_increment, JumpLaw, MarketModel, TransformPoint,
    WaitingLaw,
};
pub use survival::{
    auxiliaries, corridor_time, phi_laplace, phi_minus_laplace, phi_plus_laplace, phi_time,
    survival_corridor_laplace, survival_laplace, wiener_phi, Auxiliaries, Bound, CorridorQuery,
    CorridorTransform, PhiTransform, Side, WienerParams, WienerPhiTransform,
};
