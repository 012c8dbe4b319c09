//! The CTRW market model.
//!
//! The log-price `X(t) = ln S(t)` is a step process: it stays constant for a
//! random sojourn drawn from the waiting-time law, then moves by a random
//! log-return drawn from the jump law. Sojourns and jumps are mutually
//! independent and i.i.d.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Feasibility, Result};

/// Distance from the feasibility boundary below which the risk-neutral rate is
/// refused. Both `rho - 1` and `gamma - rho + 1` must exceed it.
pub const FEASIBILITY_MARGIN: f64 = 1e-9;

/// Relative tolerance for accepting a stored rate as the martingale rate.
pub const RATE_MATCH_TOLERANCE: f64 = 1e-12;

const DEGENERATE_TOLERANCE: f64 = 1e-14;

/// Asymmetric two-sided exponential log-return density
/// `h(x) = γρ/(γ+ρ) [e^{-ρx} 1{x≥0} + e^{γx} 1{x<0}]`.
///
/// `rho` is the decay rate of upward jumps and `gamma` that of downward jumps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpLaw {
    rho: f64,
    gamma: f64,
}

impl JumpLaw {
    pub fn new(rho: f64, gamma: f64) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::domain(format!("rho must be finite and > 0, got {rho}")));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::domain(format!("gamma must be finite and > 0, got {gamma}")));
        }
        Ok(JumpLaw { rho, gamma })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Probability that a jump is upward, `γ/(γ+ρ)`.
    pub fn up_probability(&self) -> f64 {
        self.gamma / (self.gamma + self.rho)
    }

    pub fn density(&self, x: f64) -> f64 {
        let c = self.gamma * self.rho / (self.gamma + self.rho);
        if x >= 0.0 {
            c * (-self.rho * x).exp()
        } else {
            c * (self.gamma * x).exp()
        }
    }

    /// Mean log-return per jump, `(γ-ρ)/(γρ)`.
    pub fn mean(&self) -> f64 {
        (self.gamma - self.rho) / (self.gamma * self.rho)
    }

    /// Characteristic function `h̃(ω) = E[e^{iωJ}]` for complex `ω`.
    ///
    /// At `ω = -iθ` this is the moment generating function `E[e^{θJ}]`,
    /// finite for `-γ < θ < ρ`.
    pub fn char_fn(&self, omega: Complex64) -> Result<Complex64> {
        let i = Complex64::i();
        let up = self.rho - i * omega;
        let down = self.gamma + i * omega;
        if up.norm() < DEGENERATE_TOLERANCE || down.norm() < DEGENERATE_TOLERANCE {
            return Err(Error::DegenerateDenominator { what: "jump transform pole", value: up.norm().min(down.norm()) });
        }
        let c = self.gamma * self.rho / (self.gamma + self.rho);
        Ok(c * (up.inv() + down.inv()))
    }
}

/// Law of the sojourn between consecutive transactions.
///
/// Only [`WaitingLaw::Exponential`] admits a risk-neutral measure; the other
/// families exist so the Monte Carlo oracle can simulate non-Markovian
/// markets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaitingLaw {
    Exponential { rate: f64 },
    /// Every sojourn lasts exactly `period`.
    Deterministic { period: f64 },
    /// `short` with probability `p_short`, otherwise `long`.
    TwoPoint { short: f64, long: f64, p_short: f64 },
    /// Mixture of two exponentials.
    HyperExponential { p_first: f64, rate_first: f64, rate_second: f64 },
    /// Pareto type II: survival `(1 + t/scale)^{-shape}`, heavy tailed.
    Lomax { shape: f64, scale: f64 },
}

impl WaitingLaw {
    pub fn exponential(rate: f64) -> Result<Self> {
        let law = WaitingLaw::Exponential { rate };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::domain(format!("waiting law: {name} must be finite and > 0, got {v}")))
            }
        };
        let probability = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::domain(format!("waiting law: {name} must lie in [0, 1], got {p}")))
            }
        };
        match *self {
            WaitingLaw::Exponential { rate } => positive("rate", rate),
            WaitingLaw::Deterministic { period } => positive("period", period),
            WaitingLaw::TwoPoint { short, long, p_short } => {
                positive("short", short)?;
                positive("long", long)?;
                probability("p_short", p_short)
            }
            WaitingLaw::HyperExponential { p_first, rate_first, rate_second } => {
                probability("p_first", p_first)?;
                positive("rate_first", rate_first)?;
                positive("rate_second", rate_second)
            }
            WaitingLaw::Lomax { shape, scale } => {
                positive("scale", scale)?;
                if shape.is_finite() && shape > 1.0 {
                    Ok(())
                } else {
                    Err(Error::domain(format!("waiting law: Lomax shape must exceed 1 for a finite mean, got {shape}")))
                }
            }
        }
    }

    /// Mean sojourn time `μ`.
    pub fn mean(&self) -> f64 {
        match *self {
            WaitingLaw::Exponential { rate } => 1.0 / rate,
            WaitingLaw::Deterministic { period } => period,
            WaitingLaw::TwoPoint { short, long, p_short } => p_short * short + (1.0 - p_short) * long,
            WaitingLaw::HyperExponential { p_first, rate_first, rate_second } => {
                p_first / rate_first + (1.0 - p_first) / rate_second
            }
            WaitingLaw::Lomax { shape, scale } => scale / (shape - 1.0),
        }
    }

    /// The rate `λ` of an exponential law. Other families have no closed-form
    /// treatment and are refused.
    pub fn exponential_rate(&self) -> Result<f64> {
        match *self {
            WaitingLaw::Exponential { rate } => Ok(rate),
            other => Err(Error::infeasible(
                Feasibility::ExponentialWaits,
                format!("closed forms need exponential waits, model has {other:?}"),
            )),
        }
    }

    /// Draws one sojourn by inverse transform.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            WaitingLaw::Exponential { rate } => -open_unit(rng).ln() / rate,
            WaitingLaw::Deterministic { period } => period,
            WaitingLaw::TwoPoint { short, long, p_short } => {
                if rng.random::<f64>() < p_short {
                    short
                } else {
                    long
                }
            }
            WaitingLaw::HyperExponential { p_first, rate_first, rate_second } => {
                let rate = if rng.random::<f64>() < p_first { rate_first } else { rate_second };
                -open_unit(rng).ln() / rate
            }
            WaitingLaw::Lomax { shape, scale } => scale * (open_unit(rng).powf(-1.0 / shape) - 1.0),
        }
    }
}

/// Uniform draw on `(0, 1]`, safe to take the logarithm of.
fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Full CTRW market specification: jumps, waits, risk-free rate and spot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketModel {
    jumps: JumpLaw,
    waits: WaitingLaw,
    r: f64,
    s0: f64,
    risk_neutral: bool,
}

impl MarketModel {
    /// A model under the physical measure with an arbitrary waiting law.
    /// Closed-form pricing refuses such a model; survival and simulation
    /// accept it.
    pub fn physical(jumps: JumpLaw, waits: WaitingLaw, r: f64, s0: f64) -> Result<Self> {
        waits.validate()?;
        validate_rate_and_spot(r, s0)?;
        Ok(MarketModel { jumps, waits, r, s0, risk_neutral: false })
    }

    /// The risk-neutral model: exponential waits whose rate is fixed by the
    /// martingale constraint.
    pub fn risk_neutral(jumps: JumpLaw, r: f64, s0: f64) -> Result<Self> {
        validate_rate_and_spot(r, s0)?;
        let rate = martingale_rate(&jumps, r)?;
        if !(rate > 0.0) {
            return Err(Error::domain(format!("risk-neutral model needs r > 0, got {r}")));
        }
        Ok(MarketModel { jumps, waits: WaitingLaw::Exponential { rate }, r, s0, risk_neutral: true })
    }

    pub fn jumps(&self) -> &JumpLaw {
        &self.jumps
    }

    pub fn waits(&self) -> &WaitingLaw {
        &self.waits
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }

    /// Starting log-price `x₀ = ln S₀`.
    pub fn x0(&self) -> f64 {
        self.s0.ln()
    }

    pub fn is_risk_neutral(&self) -> bool {
        self.risk_neutral
    }

    /// Same model with a different spot.
    pub fn with_spot(&self, s0: f64) -> Result<Self> {
        validate_rate_and_spot(self.r, s0)?;
        Ok(MarketModel { s0, ..*self })
    }

    /// Laplace transform of the waiting-time density, `ψ̂(s) = λ/(λ+s)`.
    pub fn psi_hat(&self, s: f64) -> Result<f64> {
        let rate = self.waits.exponential_rate()?;
        Ok(rate / (rate + s))
    }

    pub(crate) fn psi_hat_complex(&self, s: Complex64) -> Result<Complex64> {
        let rate = self.waits.exponential_rate()?;
        Ok(rate / (s + rate))
    }

    /// Returns the transaction rate after checking the model is a valid
    /// risk-neutral one.
    pub fn require_risk_neutral(&self) -> Result<f64> {
        let rate = self.waits.exponential_rate()?;
        let expected = martingale_rate(&self.jumps, self.r)?;
        if !self.risk_neutral {
            return Err(Error::infeasible(
                Feasibility::MartingaleRate,
                format!("model uses an explicit lambda = {rate}; martingale rate is {expected}"),
            ));
        }
        if ((rate - expected) / expected).abs() > RATE_MATCH_TOLERANCE {
            return Err(Error::infeasible(
                Feasibility::MartingaleRate,
                format!("lambda = {rate} differs from martingale rate {expected}"),
            ));
        }
        Ok(rate)
    }
}

fn validate_rate_and_spot(r: f64, s0: f64) -> Result<()> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::domain(format!("risk-free rate must be finite and >= 0, got {r}")));
    }
    if !(s0.is_finite() && s0 > 0.0) {
        return Err(Error::domain(format!("spot must be finite and > 0, got {s0}")));
    }
    Ok(())
}

/// A point `(ω, s)` of the Fourier-Laplace domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformPoint {
    pub omega: Complex64,
    pub s: Complex64,
}

impl TransformPoint {
    pub fn new(omega: Complex64, s: Complex64) -> Self {
        TransformPoint { omega, s }
    }

    pub fn real(omega: f64, s: f64) -> Self {
        TransformPoint { omega: Complex64::new(omega, 0.0), s: Complex64::new(s, 0.0) }
    }
}

/// Fourier-Laplace transform of the propagator,
/// `p̂̃(ω, s) = (1/s)(1 - ψ̂(s)) / (1 - h̃(ω)ψ̂(s))`.
pub fn propagator_fl(model: &MarketModel, p: TransformPoint) -> Result<Complex64> {
    if !(p.s.re > 0.0) {
        return Err(Error::domain(format!("Laplace variable needs Re(s) > 0, got {}", p.s)));
    }
    let psi = model.psi_hat_complex(p.s)?;
    let h = model.jumps.char_fn(p.omega)?;
    let denom = Complex64::new(1.0, 0.0) - h * psi;
    if denom.norm() < DEGENERATE_TOLERANCE {
        return Err(Error::DegenerateDenominator { what: "1 - h(omega) psi(s)", value: denom.norm() });
    }
    Ok((Complex64::new(1.0, 0.0) - psi) / (p.s * denom))
}

/// Transaction rate that makes `S(t) e^{-rt}` a martingale,
/// `λ = r (ρ-1)(γ+1) / (γ-ρ+1)`.
///
/// Feasible only when `γ > ρ - 1 > 0`; parameters within
/// [`FEASIBILITY_MARGIN`] of that boundary are refused.
pub fn martingale_rate(jumps: &JumpLaw, r: f64) -> Result<f64> {
    let (rho, gamma) = (jumps.rho, jumps.gamma);
    if rho - 1.0 < FEASIBILITY_MARGIN {
        return Err(Error::infeasible(Feasibility::RhoAboveOne, format!("rho = {rho}")));
    }
    let excess = gamma - rho + 1.0;
    if excess < FEASIBILITY_MARGIN {
        return Err(Error::infeasible(
            Feasibility::GammaAboveRhoMinusOne,
            format!("gamma = {gamma}, rho - 1 = {}", rho - 1.0),
        ));
    }
    Ok(r * (rho - 1.0) * (gamma + 1.0) / excess)
}

/// Draws one `(sojourn, log-return)` pair. The log-return is an upward
/// `Exp(ρ)` magnitude with probability `γ/(γ+ρ)`, else a downward `Exp(γ)`
/// magnitude.
pub fn sample_increment<R: Rng + ?Sized>(model: &MarketModel, rng: &mut R) -> (f64, f64) {
    let dt = model.waits.sample(rng);
    let dx = sample_jump(&model.jumps, rng);
    (dt, dx)
}

pub(crate) fn sample_jump<R: Rng + ?Sized>(jumps: &JumpLaw, rng: &mut R) -> f64 {
    let up = rng.random::<f64>() < jumps.up_probability();
    let magnitude = -open_unit(rng).ln();
    if up {
        magnitude / jumps.rho
    } else {
        -magnitude / jumps.gamma
    }
}
