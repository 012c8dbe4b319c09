//! Risk-neutral perpetual American prices.
//!
//! Under the risk-neutral model the exponents simplify at `s = r` to `α = 1`
//! and `β = -(γ-ρ+1)`, and the price of a claim paying at the first crossing
//! of a constant boundary follows from the survival transform at `s = r`.
//! Overshoots past the boundary are exponential and memoryless, so the
//! expected vanilla payoff at exercise does not depend on the exercise time.

use crate::error::{Error, Result};
use crate::process::{JumpLaw, MarketModel};
use crate::survival::{phi_minus_laplace, phi_plus_laplace, Side};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OptionSpec {
    /// Pays 1 once the price rises above `k0`.
    BinaryCall { k0: f64 },
    /// Pays 1 once the price falls below `k0`.
    BinaryPut { k0: f64 },
    VanillaCall { strike: f64 },
    VanillaPut { strike: f64 },
}

impl OptionSpec {
    pub fn strike(&self) -> f64 {
        match *self {
            OptionSpec::BinaryCall { k0 } | OptionSpec::BinaryPut { k0 } => k0,
            OptionSpec::VanillaCall { strike } | OptionSpec::VanillaPut { strike } => strike,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.strike();
        if k.is_finite() && k > 0.0 {
            Ok(())
        } else {
            Err(Error::domain(format!("strike must be finite and > 0, got {k}")))
        }
    }

    /// Same contract with the strike multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        match *self {
            OptionSpec::BinaryCall { k0 } => OptionSpec::BinaryCall { k0: k0 * factor },
            OptionSpec::BinaryPut { k0 } => OptionSpec::BinaryPut { k0: k0 * factor },
            OptionSpec::VanillaCall { strike } => OptionSpec::VanillaCall { strike: strike * factor },
            OptionSpec::VanillaPut { strike } => OptionSpec::VanillaPut { strike: strike * factor },
        }
    }

    /// Payoff from exercising at price `spot`.
    pub fn intrinsic(&self, spot: f64) -> f64 {
        match *self {
            OptionSpec::BinaryCall { k0 } => f64::from(u8::from(spot > k0)),
            OptionSpec::BinaryPut { k0 } => f64::from(u8::from(spot < k0)),
            OptionSpec::VanillaCall { strike } => (spot - strike).max(0.0),
            OptionSpec::VanillaPut { strike } => (strike - spot).max(0.0),
        }
    }

    pub fn side(&self) -> Side {
        match self {
            OptionSpec::BinaryCall { .. } | OptionSpec::VanillaCall { .. } => Side::Up,
            OptionSpec::BinaryPut { .. } | OptionSpec::VanillaPut { .. } => Side::Down,
        }
    }
}

/// Optimal exercise boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    Level(f64),
    NeverExercise,
}

impl Boundary {
    pub fn level(&self) -> Option<f64> {
        match *self {
            Boundary::Level(h) => Some(h),
            Boundary::NeverExercise => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Spot is on the holding side of the boundary.
    Live,
    /// Spot is already past the boundary; the option is worth its payoff.
    Immediate,
    /// The option is never exercised.
    Never,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Live => "Live",
            Regime::Immediate => "Immediate",
            Regime::Never => "Never",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceResult {
    pub price: f64,
    pub boundary: Boundary,
    pub regime: Regime,
}

/// Jump parameters of a validated risk-neutral model.
fn risk_neutral_jumps(model: &MarketModel) -> Result<JumpLaw> {
    model.require_risk_neutral()?;
    Ok(*model.jumps())
}

/// Prices any supported contract.
pub fn price(model: &MarketModel, spec: &OptionSpec) -> Result<PriceResult> {
    match spec {
        OptionSpec::BinaryCall { .. } | OptionSpec::BinaryPut { .. } => binary_price(model, spec),
        OptionSpec::VanillaCall { .. } => vanilla_call_price(model, spec),
        OptionSpec::VanillaPut { .. } => vanilla_put_price(model, spec),
    }
}

/// Perpetual binary call `D⁺ = ((ρ-1)/ρ)(S₀/K₀)` and put
/// `D⁻ = ((ρ-1)/γ)(K₀/S₀)^{γ-ρ+1}`.
///
/// A spot strictly past `K₀` is exercised at once and worth 1. A spot exactly
/// at `K₀` is still live because crossing is strict.
pub fn binary_price(model: &MarketModel, spec: &OptionSpec) -> Result<PriceResult> {
    spec.validate()?;
    let jumps = risk_neutral_jumps(model)?;
    let (rho, gamma) = (jumps.rho(), jumps.gamma());
    let s0 = model.s0();
    let (price, regime) = match *spec {
        OptionSpec::BinaryCall { k0 } if s0 > k0 => (1.0, Regime::Immediate),
        OptionSpec::BinaryCall { k0 } => ((rho - 1.0) / rho * (s0 / k0), Regime::Live),
        OptionSpec::BinaryPut { k0 } if s0 < k0 => (1.0, Regime::Immediate),
        OptionSpec::BinaryPut { k0 } => ((rho - 1.0) / gamma * (k0 / s0).powf(gamma - rho + 1.0), Regime::Live),
        _ => return Err(Error::domain("binary_price needs a binary contract")),
    };
    Ok(PriceResult { price, boundary: Boundary::Level(spec.strike()), regime })
}

/// The same binary price through the survival transform,
/// `1 - r Φ̂±(s = r)`.
pub fn binary_price_via_survival(model: &MarketModel, spec: &OptionSpec) -> Result<f64> {
    spec.validate()?;
    model.require_risk_neutral()?;
    let (r, x0) = (model.r(), model.x0());
    let k0_log = spec.strike().ln();
    match spec {
        OptionSpec::BinaryCall { .. } if x0 > k0_log => Ok(1.0),
        OptionSpec::BinaryCall { .. } => Ok(1.0 - r * phi_plus_laplace(model, k0_log, x0, r)?),
        OptionSpec::BinaryPut { .. } if x0 < k0_log => Ok(1.0),
        OptionSpec::BinaryPut { .. } => Ok(1.0 - r * phi_minus_laplace(model, k0_log, x0, r)?),
        _ => Err(Error::domain("binary_price_via_survival needs a binary contract")),
    }
}

/// Put exercise boundary `H₀⁻ = K(γ+1)(γ-ρ+1) / (γ(γ-ρ+2))`, always below `K`.
pub fn put_boundary(jumps: &JumpLaw, strike: f64) -> f64 {
    let (rho, gamma) = (jumps.rho(), jumps.gamma());
    let excess = gamma - rho + 1.0;
    strike * (gamma + 1.0) * excess / (gamma * (excess + 1.0))
}

/// Perpetual vanilla put,
/// `V⁻ = (K - γ/(γ+1) H₀⁻)((ρ-1)/γ)(H₀⁻/S₀)^{γ-ρ+1}` for `S₀ ≥ H₀⁻`, and
/// `K - S₀` below the boundary.
pub fn vanilla_put_price(model: &MarketModel, spec: &OptionSpec) -> Result<PriceResult> {
    spec.validate()?;
    let OptionSpec::VanillaPut { strike } = *spec else {
        return Err(Error::domain("vanilla_put_price needs a vanilla put"));
    };
    let jumps = risk_neutral_jumps(model)?;
    let (rho, gamma) = (jumps.rho(), jumps.gamma());
    let h = put_boundary(&jumps, strike);
    let s0 = model.s0();
    let (price, regime) = if s0 >= h {
        let expected_payoff = strike - gamma / (gamma + 1.0) * h;
        (expected_payoff * (rho - 1.0) / gamma * (h / s0).powf(gamma - rho + 1.0), Regime::Live)
    } else {
        (strike - s0, Regime::Immediate)
    };
    Ok(PriceResult { price, boundary: Boundary::Level(h), regime })
}

/// Perpetual vanilla call: never exercised, worth the spot.
pub fn vanilla_call_price(model: &MarketModel, spec: &OptionSpec) -> Result<PriceResult> {
    spec.validate()?;
    if !matches!(spec, OptionSpec::VanillaCall { .. }) {
        return Err(Error::domain("vanilla_call_price needs a vanilla call"));
    }
    model.require_risk_neutral()?;
    Ok(PriceResult { price: model.s0(), boundary: Boundary::NeverExercise, regime: Regime::Never })
}

/// Candidate live call value `V⁺(S₀) = S₀ - ((ρ-1)/ρ)(S₀/H)K` for an assumed
/// finite boundary `H`.
pub fn call_value_for_boundary(jumps: &JumpLaw, strike: f64, boundary: f64, s0: f64) -> f64 {
    let rho = jumps.rho();
    s0 - (rho - 1.0) / rho * (s0 / boundary) * strike
}

/// Residual `V⁺(H) - (H - K)` of the exercise condition at each candidate
/// boundary. A finite call boundary would need a zero or a sign change.
pub fn call_exercise_residuals(model: &MarketModel, strike: f64, candidates: &[f64]) -> Result<Vec<f64>> {
    let jumps = risk_neutral_jumps(model)?;
    Ok(candidates
        .iter()
        .map(|&h| call_value_for_boundary(&jumps, strike, h, h) - (h - strike))
        .collect())
}

/// Expected asset price at the first crossing of `boundary`:
/// `Hρ/(ρ-1)` upward, `Hγ/(γ+1)` downward.
pub fn expected_exercise_payoff(model: &MarketModel, boundary: f64, side: Side) -> Result<f64> {
    let jumps = risk_neutral_jumps(model)?;
    if !(boundary.is_finite() && boundary > 0.0) {
        return Err(Error::domain(format!("boundary must be finite and > 0, got {boundary}")));
    }
    Ok(match side {
        Side::Up => boundary * jumps.rho() / (jumps.rho() - 1.0),
        Side::Down => boundary * jumps.gamma() / (jumps.gamma() + 1.0),
    })
}

/// Black-Scholes perpetual prices, the diffusive limit of the CTRW prices with
/// `ε = 2r/σ²`.
pub fn bs_limit_price(r: f64, sigma: f64, spec: &OptionSpec, s0: f64) -> Result<PriceResult> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::domain(format!("sigma must be finite and > 0, got {sigma}")));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::domain(format!("r must be finite and > 0, got {r}")));
    }
    if !(s0.is_finite() && s0 > 0.0) {
        return Err(Error::domain(format!("spot must be finite and > 0, got {s0}")));
    }
    spec.validate()?;
    let eps = 2.0 * r / (sigma * sigma);
    let live = |price| (price, Regime::Live);
    let result = match *spec {
        OptionSpec::BinaryCall { k0 } => {
            let (price, regime) = if s0 > k0 { (1.0, Regime::Immediate) } else { live(s0 / k0) };
            PriceResult { price, boundary: Boundary::Level(k0), regime }
        }
        OptionSpec::BinaryPut { k0 } => {
            let (price, regime) = if s0 < k0 { (1.0, Regime::Immediate) } else { live((k0 / s0).powf(eps)) };
            PriceResult { price, boundary: Boundary::Level(k0), regime }
        }
        OptionSpec::VanillaCall { .. } => PriceResult { price: s0, boundary: Boundary::NeverExercise, regime: Regime::Never },
        OptionSpec::VanillaPut { strike } => {
            let h = strike * eps / (1.0 + eps);
            let (price, regime) =
                if s0 >= h { live((strike - h) * (h / s0).powf(eps)) } else { (strike - s0, Regime::Immediate) };
            PriceResult { price, boundary: Boundary::Level(h), regime }
        }
    };
    Ok(result)
}

/// One point of the CTRW-to-Black-Scholes put convergence table, per unit
/// strike.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub rho: f64,
    pub moneyness: f64,
    pub v_ctrw: f64,
    pub v_bs: f64,
}

/// Vanilla put prices on a moneyness grid for each `ρ`, with
/// `γ = ρ - 1 + 2r/σ²` so that the diffusive limit is Black-Scholes with
/// volatility `σ`. Rows are sorted by `ρ`, then moneyness.
pub fn convergence_table(r: f64, sigma: f64, rho_list: &[f64], moneyness_grid: &[f64]) -> Result<Vec<ConvergenceRow>> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::domain(format!("sigma must be finite and > 0, got {sigma}")));
    }
    let eps = 2.0 * r / (sigma * sigma);
    let mut rhos = rho_list.to_vec();
    rhos.sort_by(f64::total_cmp);
    let mut grid = moneyness_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let spec = OptionSpec::VanillaPut { strike: 1.0 };
    let mut rows = Vec::with_capacity(rhos.len() * grid.len());
    for &rho in &rhos {
        let jumps = JumpLaw::new(rho, rho - 1.0 + eps)?;
        for &m in &grid {
            let model = MarketModel::risk_neutral(jumps, r, m)?;
            let v_ctrw = vanilla_put_price(&model, &spec)?.price;
            let v_bs = bs_limit_price(r, sigma, &spec, m)?.price;
            rows.push(ConvergenceRow { rho, moneyness: m, v_ctrw, v_bs });
        }
    }
    Ok(rows)
}
