//! Laplace-domain survival probabilities for the two-sided exponential CTRW.
//!
//! `Ŝ_[a,b](s; x₀)` is the Laplace transform of the probability that the
//! log-price, started at `x₀` right after a jump, has not left `[a, b]`.
//! Crossing is strict: starting on a boundary counts as alive, since the
//! process only moves by jumping.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::dd::DoubleDouble;
use crate::laplace::{invert_survival, InversionMethod, LaplaceTransform, SurvivalPoint};
use crate::process::{JumpLaw, MarketModel};

const PSI_SLACK: f64 = 1e-12;
const DEGENERATE_TOLERANCE: f64 = 1e-300;

/// One end of a corridor. Infinite ends are explicit so the one-sided code
/// paths never see a huge float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    NegInfinity,
    Finite(f64),
    PosInfinity,
}

impl Bound {
    fn finite(self) -> Option<f64> {
        match self {
            Bound::Finite(v) => Some(v),
            _ => None,
        }
    }

    fn as_f64(self) -> f64 {
        match self {
            Bound::NegInfinity => f64::NEG_INFINITY,
            Bound::Finite(v) => v,
            Bound::PosInfinity => f64::INFINITY,
        }
    }
}

/// Which threshold is being watched: `Up` for a first up-crossing (calls),
/// `Down` for a first down-crossing (puts).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorridorQuery {
    pub lower: Bound,
    pub upper: Bound,
    pub x0: f64,
    pub s: f64,
}

impl CorridorQuery {
    pub fn new(lower: Bound, upper: Bound, x0: f64, s: f64) -> Result<Self> {
        let q = CorridorQuery { lower, upper, x0, s };
        q.validate()?;
        Ok(q)
    }

    /// Finite corridor `[a, b]`.
    pub fn finite(a: f64, b: f64, x0: f64, s: f64) -> Result<Self> {
        Self::new(Bound::Finite(a), Bound::Finite(b), x0, s)
    }

    fn validate(&self) -> Result<()> {
        if matches!(self.lower, Bound::PosInfinity) || matches!(self.upper, Bound::NegInfinity) {
            return Err(Error::domain("corridor bounds are reversed"));
        }
        if self.lower.finite().is_none() && self.upper.finite().is_none() {
            return Err(Error::domain("at most one corridor bound may be infinite"));
        }
        let (a, b) = (self.lower.as_f64(), self.upper.as_f64());
        if a.is_nan() || b.is_nan() || !(a < b) {
            return Err(Error::domain(format!("corridor needs a < b, got [{a}, {b}]")));
        }
        if !self.x0.is_finite() || self.x0 < a || self.x0 > b {
            return Err(Error::domain(format!("start {} outside corridor [{a}, {b}]", self.x0)));
        }
        if !(self.s.is_finite() && self.s > 0.0) {
            return Err(Error::domain(format!("Laplace variable must be > 0, got {}", self.s)));
        }
        Ok(())
    }
}

/// The exponents `α ≥ (ρ-γ)/2 ≥ β` that solve `ψ̂ γρ = (ρ-z)(γ+z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Auxiliaries {
    pub alpha: f64,
    pub beta: f64,
}

impl Auxiliaries {
    /// `Δ = (ρ-α)(γ+β)e^{(α-β)a} - (ρ-β)(γ+α)e^{(α-β)b}` evaluated as
    /// written. Overflows for wide corridors; the corridor evaluator uses a
    /// rescaled form instead.
    pub fn determinant(&self, jumps: &JumpLaw, a: f64, b: f64) -> f64 {
        let (rho, gamma) = (jumps.rho(), jumps.gamma());
        let (al, be) = (self.alpha, self.beta);
        (rho - al) * (gamma + be) * ((al - be) * a).exp() - (rho - be) * (gamma + al) * ((al - be) * b).exp()
    }
}

/// Exponents `α, β` for a given `ψ̂ ∈ [0, 1]`.
pub fn auxiliaries(jumps: &JumpLaw, psi_hat: f64) -> Result<Auxiliaries> {
    if !(-PSI_SLACK..=1.0 + PSI_SLACK).contains(&psi_hat) {
        return Err(Error::domain(format!("psi_hat must lie in [0, 1], got {psi_hat}")));
    }
    let psi = psi_hat.clamp(0.0, 1.0);
    Ok(roots(jumps, psi, 1.0 - psi))
}

/// Root pair with `1 - ψ̂` supplied separately, so that it keeps full
/// precision when `ψ̂` is close to one.
fn roots(jumps: &JumpLaw, psi: f64, one_minus_psi: f64) -> Auxiliaries {
    let (rho, gamma) = (jumps.rho(), jumps.gamma());
    let mid = 0.5 * (rho - gamma);
    let half_sum = 0.5 * (rho + gamma);
    // ((ρ+γ)/2)² - γρψ̂ = ((ρ-γ)/2)² + γρ(1-ψ̂)
    let disc = (mid * mid + gamma * rho * one_minus_psi).max(0.0);
    let root = disc.sqrt();
    let product = -gamma * rho * one_minus_psi;
    debug_assert!(psi <= 1.0 && half_sum > 0.0);
    // Take the larger-magnitude root directly and recover the other from the
    // product to avoid cancellation.
    if mid >= 0.0 {
        let alpha = mid + root;
        let beta = if alpha > 0.0 { product / alpha } else { mid - root };
        Auxiliaries { alpha, beta }
    } else {
        let beta = mid - root;
        let alpha = if beta < 0.0 { product / beta } else { mid + root };
        Auxiliaries { alpha, beta }
    }
}

fn roots_complex(jumps: &JumpLaw, one_minus_psi: Complex64) -> (Complex64, Complex64) {
    let (rho, gamma) = (jumps.rho(), jumps.gamma());
    let mid = 0.5 * (rho - gamma);
    let root = (one_minus_psi * (gamma * rho) + mid * mid).sqrt();
    let product = -one_minus_psi * (gamma * rho);
    let plus = root + mid;
    let minus = -root + mid;
    if plus.norm() >= minus.norm() {
        (plus, if plus.norm() > 0.0 { product / plus } else { minus })
    } else {
        (if minus.norm() > 0.0 { product / minus } else { plus }, minus)
    }
}

/// `(ψ̂, α, β)` at real `s` in double-double precision.
fn roots_extended(jumps: &JumpLaw, rate: f64, s: DoubleDouble) -> (DoubleDouble, DoubleDouble, DoubleDouble) {
    let (rho, gamma) = (jumps.rho(), jumps.gamma());
    let denom = s + rate;
    let psi = DoubleDouble::from(rate) / denom;
    let one_minus_psi = s / denom;
    let mid = DoubleDouble::from(0.5 * (rho - gamma));
    let root = (mid * mid + one_minus_psi * (gamma * rho)).sqrt();
    let product = -(one_minus_psi * (gamma * rho));
    if mid.hi() >= 0.0 {
        let alpha = mid + root;
        (psi, alpha, product / alpha)
    } else {
        let beta = mid - root;
        (psi, product / beta, beta)
    }
}

/// `(ψ̂(s), 1 - ψ̂(s))` for the model's exponential waits.
fn psi_pair(model: &MarketModel, s: f64) -> Result<(f64, f64)> {
    let rate = model.waits().exponential_rate()?;
    Ok((rate / (rate + s), s / (rate + s)))
}

fn check_s(s: f64) -> Result<()> {
    if s.is_finite() && s > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("Laplace variable must be finite and > 0, got {s}")))
    }
}

/// Laplace transform of the survival probability in a finite corridor.
pub fn survival_corridor_laplace(model: &MarketModel, q: &CorridorQuery) -> Result<f64> {
    q.validate()?;
    let (a, b) = match (q.lower, q.upper) {
        (Bound::Finite(a), Bound::Finite(b)) => (a, b),
        _ => return Err(Error::domain("corridor evaluation needs finite bounds; use the one-sided forms")),
    };
    let (psi, one_minus_psi) = psi_pair(model, q.s)?;
    let v = corridor_scaled(model.jumps(), Complex64::new(psi, 0.0), Complex64::new(one_minus_psi, 0.0), a, b, q.x0)?;
    Ok(v.re / q.s)
}

/// `s·Ŝ_[a,b]` with every exponential rescaled by the dominant `e^{(α-β)b}`.
///
/// With `u = x₀ - a`, `v = b - x₀`, `L = b - a` and `Δ' = Δ e^{-(α-β)b}`:
/// `1 - ψ̂/Δ' [ρ(γ+β)e^{-αv+βL} - γ(ρ-β)e^{-αv} + γ(ρ-α)e^{βu-αL} - ρ(γ+α)e^{βu}]`.
fn corridor_scaled(jumps: &JumpLaw, psi: Complex64, one_minus_psi: Complex64, a: f64, b: f64, x0: f64) -> Result<Complex64> {
    let (rho, gamma) = (jumps.rho(), jumps.gamma());
    let (alpha, beta) = roots_complex(jumps, one_minus_psi);
    let (u, v, len) = (x0 - a, b - x0, b - a);
    let e = |z: Complex64| z.exp();
    let delta = (-alpha + rho) * (beta + gamma) * e(-(alpha - beta) * len) - (-beta + rho) * (alpha + gamma);
    if delta.norm() < DEGENERATE_TOLERANCE {
        return Err(Error::DegenerateDenominator { what: "corridor determinant", value: delta.norm() });
    }
    let bracket = (beta + gamma) * rho * e(-alpha * v + beta * len) - (-beta + rho) * gamma * e(-alpha * v)
        + (-alpha + rho) * gamma * e(beta * u - alpha * len)
        - (alpha + gamma) * rho * e(beta * u);
    Ok(Complex64::new(1.0, 0.0) - psi / delta * bracket)
}

/// `Φ̂⁺(s; x₀)`: Laplace transform of `Pr{τ⁺ > t}` for the first crossing
/// above `k0_log`, from `x0 ≤ k0_log`.
pub fn phi_plus_laplace(model: &MarketModel, k0_log: f64, x0: f64, s: f64) -> Result<f64> {
    check_s(s)?;
    check_side(Side::Up, k0_log, x0)?;
    let (psi, one_minus_psi) = psi_pair(model, s)?;
    let aux = roots(model.jumps(), psi, one_minus_psi);
    let gamma = model.jumps().gamma();
    Ok((1.0 - gamma * psi / (gamma + aux.alpha) * (aux.alpha * (x0 - k0_log)).exp()) / s)
}

/// `Φ̂⁻(s; x₀)`: Laplace transform of `Pr{τ⁻ > t}` for the first crossing
/// below `k0_log`, from `x0 ≥ k0_log`.
pub fn phi_minus_laplace(model: &MarketModel, k0_log: f64, x0: f64, s: f64) -> Result<f64> {
    check_s(s)?;
    check_side(Side::Down, k0_log, x0)?;
    let (psi, one_minus_psi) = psi_pair(model, s)?;
    let aux = roots(model.jumps(), psi, one_minus_psi);
    let rho = model.jumps().rho();
    Ok((1.0 - rho * psi / (rho - aux.beta) * (aux.beta * (x0 - k0_log)).exp()) / s)
}

/// One-sided survival transform for either side.
pub fn phi_laplace(model: &MarketModel, side: Side, k0_log: f64, x0: f64, s: f64) -> Result<f64> {
    match side {
        Side::Up => phi_plus_laplace(model, k0_log, x0, s),
        Side::Down => phi_minus_laplace(model, k0_log, x0, s),
    }
}

/// Routes a query with possibly one infinite end to the corridor or the
/// matching one-sided form.
pub fn survival_laplace(model: &MarketModel, q: &CorridorQuery) -> Result<f64> {
    q.validate()?;
    match (q.lower, q.upper) {
        (Bound::Finite(_), Bound::Finite(_)) => survival_corridor_laplace(model, q),
        (Bound::NegInfinity, Bound::Finite(b)) => phi_plus_laplace(model, b, q.x0, q.s),
        (Bound::Finite(a), Bound::PosInfinity) => phi_minus_laplace(model, a, q.x0, q.s),
        _ => unreachable!("validated"),
    }
}

fn check_side(side: Side, k0_log: f64, x0: f64) -> Result<()> {
    if !k0_log.is_finite() || !x0.is_finite() {
        return Err(Error::domain("threshold and start must be finite"));
    }
    match side {
        Side::Up if x0 > k0_log => Err(Error::domain(format!("up threshold {k0_log} is below start {x0}"))),
        Side::Down if x0 < k0_log => Err(Error::domain(format!("down threshold {k0_log} is above start {x0}"))),
        _ => Ok(()),
    }
}

/// `Φ̂±` as a transform evaluable at complex `s`, for numerical inversion.
#[derive(Debug, Clone, Copy)]
pub struct PhiTransform {
    jumps: JumpLaw,
    rate: f64,
    side: Side,
    log_moneyness: f64,
}

impl PhiTransform {
    pub fn new(model: &MarketModel, side: Side, k0_log: f64, x0: f64) -> Result<Self> {
        check_side(side, k0_log, x0)?;
        let rate = model.waits().exponential_rate()?;
        Ok(PhiTransform { jumps: *model.jumps(), rate, side, log_moneyness: x0 - k0_log })
    }
}

impl LaplaceTransform for PhiTransform {
    fn eval(&self, s: Complex64) -> Complex64 {
        let psi = self.rate / (s + self.rate);
        let one_minus_psi = s / (s + self.rate);
        let (alpha, beta) = roots_complex(&self.jumps, one_minus_psi);
        let (rho, gamma) = (self.jumps.rho(), self.jumps.gamma());
        let hit = match self.side {
            Side::Up => psi * gamma / (alpha + gamma) * (alpha * self.log_moneyness).exp(),
            Side::Down => psi * rho / (-beta + rho) * (beta * self.log_moneyness).exp(),
        };
        (Complex64::new(1.0, 0.0) - hit) / s
    }

    fn eval_extended(&self, s: DoubleDouble) -> Option<DoubleDouble> {
        let (psi, alpha, beta) = roots_extended(&self.jumps, self.rate, s);
        let (rho, gamma) = (self.jumps.rho(), self.jumps.gamma());
        let hit = match self.side {
            Side::Up => psi * gamma / (alpha + gamma) * (alpha * self.log_moneyness).exp(),
            Side::Down => psi * rho / (rho - beta) * (beta * self.log_moneyness).exp(),
        };
        Some((DoubleDouble::ONE - hit) / s)
    }
}

/// Finite-corridor survival transform evaluable at complex `s`.
#[derive(Debug, Clone, Copy)]
pub struct CorridorTransform {
    jumps: JumpLaw,
    rate: f64,
    a: f64,
    b: f64,
    x0: f64,
}

impl CorridorTransform {
    pub fn new(model: &MarketModel, a: f64, b: f64, x0: f64) -> Result<Self> {
        // s only matters for validation of the other fields here
        CorridorQuery::finite(a, b, x0, 1.0)?;
        let rate = model.waits().exponential_rate()?;
        Ok(CorridorTransform { jumps: *model.jumps(), rate, a, b, x0 })
    }
}

impl LaplaceTransform for CorridorTransform {
    fn eval(&self, s: Complex64) -> Complex64 {
        let psi = self.rate / (s + self.rate);
        let one_minus_psi = s / (s + self.rate);
        match corridor_scaled(&self.jumps, psi, one_minus_psi, self.a, self.b, self.x0) {
            Ok(v) => v / s,
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        }
    }

    fn eval_extended(&self, s: DoubleDouble) -> Option<DoubleDouble> {
        let (rho, gamma) = (self.jumps.rho(), self.jumps.gamma());
        let (psi, alpha, beta) = roots_extended(&self.jumps, self.rate, s);
        let (u, v, len) = (self.x0 - self.a, self.b - self.x0, self.b - self.a);
        let spread = alpha - beta;
        let delta = (rho - alpha) * (beta + gamma) * (-(spread * len)).exp() - (rho - beta) * (alpha + gamma);
        let bracket = rho * (beta + gamma) * (beta * len - alpha * v).exp() - gamma * (rho - beta) * (-(alpha * v)).exp()
            + gamma * (rho - alpha) * (beta * u - alpha * len).exp()
            - rho * (alpha + gamma) * (beta * u).exp();
        Some((DoubleDouble::ONE - psi / delta * bracket) / s)
    }
}

/// Time-domain one-sided survival `Φ±(t)`, by extended-precision
/// Gaver-Stehfest inversion.
pub fn phi_time(model: &MarketModel, side: Side, k0_log: f64, x0: f64, t: f64) -> Result<SurvivalPoint> {
    let f = PhiTransform::new(model, side, k0_log, x0)?;
    invert_survival(&f, t, InversionMethod::extended())
}

/// Time-domain corridor survival `S_[a,b](t)`.
pub fn corridor_time(model: &MarketModel, a: f64, b: f64, x0: f64, t: f64) -> Result<SurvivalPoint> {
    let f = CorridorTransform::new(model, a, b, x0)?;
    invert_survival(&f, t, InversionMethod::extended())
}

/// Drift `ϑ` and volatility `σ` of a Wiener log-price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WienerParams {
    sigma: f64,
    vartheta: f64,
}

impl WienerParams {
    pub fn new(sigma: f64, vartheta: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::domain(format!("sigma must be finite and > 0, got {sigma}")));
        }
        if !vartheta.is_finite() {
            return Err(Error::domain("drift must be finite"));
        }
        Ok(WienerParams { sigma, vartheta })
    }

    /// Diffusion matching a CTRW with mean sojourn `mu`:
    /// `ϑ = (γ-ρ)/(γρμ)`, `σ² = 2/(γρμ)`.
    pub fn diffusive_limit(jumps: &JumpLaw, mu: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::domain(format!("mean sojourn must be > 0, got {mu}")));
        }
        let scale = jumps.gamma() * jumps.rho() * mu;
        Self::new((2.0 / scale).sqrt(), (jumps.gamma() - jumps.rho()) / scale)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn vartheta(&self) -> f64 {
        self.vartheta
    }

    /// `(ᾱ, β̄)` at Laplace variable `s`.
    pub fn exponents(&self, s: f64) -> (f64, f64) {
        let var = self.sigma * self.sigma;
        let root = (self.vartheta * self.vartheta + 2.0 * var * s).sqrt();
        ((-self.vartheta + root) / var, (-self.vartheta - root) / var)
    }

    fn exponents_complex(&self, s: Complex64) -> (Complex64, Complex64) {
        let var = self.sigma * self.sigma;
        let root = (s * (2.0 * var) + self.vartheta * self.vartheta).sqrt();
        ((root - self.vartheta) / var, (-root - self.vartheta) / var)
    }
}

/// Wiener-process counterpart of `Φ̂±`: `(1/s)(1 - (S₀/K₀)^{ᾱ or β̄})`.
pub fn wiener_phi(params: &WienerParams, k0_log: f64, x0: f64, s: f64, side: Side) -> Result<f64> {
    check_s(s)?;
    check_side(side, k0_log, x0)?;
    let (up, down) = params.exponents(s);
    let exponent = match side {
        Side::Up => up,
        Side::Down => down,
    };
    Ok((1.0 - (exponent * (x0 - k0_log)).exp()) / s)
}

/// [`wiener_phi`] at complex `s`.
#[derive(Debug, Clone, Copy)]
pub struct WienerPhiTransform {
    params: WienerParams,
    side: Side,
    log_moneyness: f64,
}

impl WienerPhiTransform {
    pub fn new(params: WienerParams, side: Side, k0_log: f64, x0: f64) -> Result<Self> {
        check_side(side, k0_log, x0)?;
        Ok(WienerPhiTransform { params, side, log_moneyness: x0 - k0_log })
    }
}

impl LaplaceTransform for WienerPhiTransform {
    fn eval(&self, s: Complex64) -> Complex64 {
        let (up, down) = self.params.exponents_complex(s);
        let exponent = match self.side {
            Side::Up => up,
            Side::Down => down,
        };
        (Complex64::new(1.0, 0.0) - (exponent * self.log_moneyness).exp()) / s
    }

    fn eval_extended(&self, s: DoubleDouble) -> Option<DoubleDouble> {
        let var = self.params.sigma * self.params.sigma;
        let drift = self.params.vartheta;
        let root = (s * (2.0 * var) + drift * drift).sqrt();
        let exponent = match self.side {
            Side::Up => (root - drift) / var,
            Side::Down => -(root + drift) / var,
        };
        Some((DoubleDouble::ONE - (exponent * self.log_moneyness).exp()) / s)
    }
}
