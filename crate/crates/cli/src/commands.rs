use std::time::Instant;

use ctrw_core::laplace::invert_laplace;
use ctrw_core::pricing::convergence_table;
use ctrw_core::{
    binary_price, overshoot_distribution, phi_time, price, run, vanilla_put_price, Boundary, Estimator,
    InversionMethod, MarketModel, McEstimate, OptionSpec, PhiTransform, Region, Side, SimulationPlan,
};

use crate::config::{self, Settings};
use crate::csv::{number, Table};
use crate::error::CliError;

pub const DEFAULT_SURVIVAL_PATHS: u64 = 100_000;
pub const DEFAULT_VERIFY_PATHS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;
/// Fewer paths cannot resolve the tolerances checked by `verify`.
pub const MIN_VERIFY_PATHS: u64 = 1_000;

pub fn price_cmd(settings: &Settings) -> Result<(), CliError> {
    let spot = settings.required("spot")?;
    let model = config::model(settings, spot)?;
    let spec = config::option_spec(settings)?;
    let res = price(&model, &spec)?;
    let digits = settings.precision()?;
    let boundary = match res.boundary {
        Boundary::Level(h) => number(h, digits),
        Boundary::NeverExercise => "never".to_string(),
    };
    if settings.flag("csv")? || settings.output().is_some() {
        let mut table = Table::new(&["price", "boundary", "regime"]);
        table.push(&[number(res.price, digits), boundary, res.regime.to_string()]);
        table.emit(settings.output().as_deref())?;
    } else {
        println!("price {}", number(res.price, digits));
        println!("boundary {boundary}");
        println!("regime {}", res.regime);
    }
    Ok(())
}

fn barrier_region(side: Side, level: f64) -> Region {
    match side {
        Side::Up => Region::Up(level),
        Side::Down => Region::Down(level),
    }
}

pub fn survival_cmd(settings: &Settings) -> Result<(), CliError> {
    let spot = settings.required("spot")?;
    let model = config::model(settings, spot)?;
    let side = config::side(settings)?;
    let barrier = settings.required("barrier")?;
    if !(barrier.is_finite() && barrier > 0.0) {
        return Err(CliError::Invalid(format!("barrier: must be > 0, got {barrier}")));
    }
    let times = settings.list_or("times", &[1.0, 10.0, 100.0])?;
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(CliError::Invalid("times: every time must be finite and >= 0".into()));
    }
    let k0_log = barrier.ln();
    let plan = SimulationPlan::new(model, barrier_region(side, k0_log), Estimator::SurvivalAtTimes(times.clone()))
        .paths(settings.integer_or("paths", DEFAULT_SURVIVAL_PATHS)?)
        .seed(settings.integer_or("seed", DEFAULT_SEED)?);
    let mc = run(&plan)?;
    let digits = settings.precision()?;
    let mut table = Table::new(&["t", "phi", "mc", "mc_stderr"]);
    for (&t, est) in times.iter().zip(&mc) {
        // Nothing has moved at the start.
        let phi = if t == 0.0 { 1.0 } else { phi_time(&model, side, k0_log, model.x0(), t)?.value };
        table.push(&[number(t, digits), number(phi, digits), number(est.mean, digits), number(est.stderr, digits)]);
    }
    table.emit(settings.output().as_deref())?;
    Ok(())
}

pub fn fig2_cmd(settings: &Settings) -> Result<(), CliError> {
    let r = settings.number_or("r", 0.05)?;
    let sigma = settings.number_or("sigma", 0.1)?;
    let rhos = settings.list_or("rhos", &[2.0, 5.0, 20.0, 100.0, 1000.0])?;
    let grid = settings.list_or("moneyness", &[])?;
    let grid = if grid.is_empty() { (0..=65).map(|i| 0.85 + i as f64 * 0.01).collect() } else { grid };
    let rows = convergence_table(r, sigma, &rhos, &grid)?;
    let digits = settings.precision()?;
    let mut table = Table::new(&["rho", "moneyness", "v_ctrw", "v_bs"]);
    for row in rows {
        table.push(&[
            number(row.rho, digits),
            number(row.moneyness, digits),
            number(row.v_ctrw, digits),
            number(row.v_bs, digits),
        ]);
    }
    table.emit(settings.output().as_deref())?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// z-score against the closed form, or a p-value for the KS check.
    pub statistic: f64,
    pub threshold: f64,
}

fn z_check(name: impl Into<String>, est: &McEstimate, target: f64, limit: f64) -> Check {
    let z = est.z_score(target);
    Check { name: name.into(), passed: z <= limit, statistic: z, threshold: limit }
}

/// Runs every simulation-versus-closed-form check. Closed forms use the
/// martingale rate; simulations use the configured model, so a corrupted
/// `lambda` shows up as failures.
pub fn verification_suite(settings: &Settings, n_paths: u64, seed: u64) -> Result<Vec<Check>, CliError> {
    let sim = |spot: f64| config::model(settings, spot);
    let closed = |spot: f64| -> Result<MarketModel, CliError> {
        let mut auto = settings.clone();
        auto.set("lambda", "auto");
        config::model(&auto, spot)
    };
    let plan = |model: MarketModel, region: Region, estimator: Estimator| {
        SimulationPlan::new(model, region, estimator).paths(n_paths).seed(seed)
    };
    let r = closed(1.0)?.r();
    let mut checks = Vec::new();

    let times = [1.0, 5.0];
    let est = run(&plan(sim(1.0)?, Region::Unbounded, Estimator::MartingaleCheck(times.to_vec())))?;
    for (t, e) in times.iter().zip(&est) {
        checks.push(z_check(format!("martingale_t{t}"), e, 1.0, 4.0));
    }

    for (name, spec, spot) in [
        ("binary_call", OptionSpec::BinaryCall { k0: 1.0 }, 0.5),
        ("binary_put", OptionSpec::BinaryPut { k0: 1.0 }, 2.0),
    ] {
        let target = binary_price(&closed(spot)?, &spec)?.price;
        let est = run(&plan(sim(spot)?, barrier_region(spec.side(), 0.0), Estimator::DiscountedCrossing { s: r }))?;
        checks.push(z_check(name, &est[0], target, 3.0));
    }

    let spec = OptionSpec::VanillaPut { strike: 1.0 };
    let put = vanilla_put_price(&closed(1.0)?, &spec)?;
    let h = put.boundary.level().expect("put boundary is finite");
    let est = run(&plan(sim(1.0)?, Region::Down(h.ln()), Estimator::DiscountedPayoff { spec }))?;
    checks.push(z_check("vanilla_put", &est[0], put.price, 3.0));

    let times = [1.0, 10.0, 100.0];
    let reference = closed(0.5)?;
    let est = run(&plan(sim(0.5)?, Region::Up(0.0), Estimator::SurvivalAtTimes(times.to_vec())))?;
    let transform = PhiTransform::new(&reference, Side::Up, 0.0, reference.x0())?;
    for (&t, e) in times.iter().zip(&est) {
        let phi = phi_time(&reference, Side::Up, 0.0, reference.x0(), t)?;
        checks.push(z_check(format!("survival_t{t}"), e, phi.value, 3.0));
        let talbot = invert_laplace(&transform, t, InversionMethod::talbot())?;
        let gap = (phi.raw - talbot).abs();
        checks.push(Check { name: format!("inversion_t{t}"), passed: gap <= 1e-6, statistic: gap, threshold: 1e-6 });
    }

    let over_plan = plan(sim(1.0)?, Region::Up(0.3), Estimator::DiscountedCrossing { s: r }).horizon(1e6);
    let over = overshoot_distribution(&over_plan)?;
    checks.push(Check { name: "overshoot_ks".into(), passed: over.ks_p_value > 0.01, statistic: over.ks_p_value, threshold: 0.01 });
    Ok(checks)
}

pub fn verify_cmd(settings: &Settings) -> Result<(), CliError> {
    let mut settings = settings.clone();
    for (key, default) in [("rho", "2"), ("gamma", "3"), ("r", "0.05")] {
        if settings.get(key).is_none() {
            settings.set(key, default);
        }
    }
    let n_paths = settings.integer_or("paths", DEFAULT_VERIFY_PATHS)?;
    if n_paths < MIN_VERIFY_PATHS {
        return Err(CliError::InsufficientPower { n_paths, minimum: MIN_VERIFY_PATHS });
    }
    let seed = settings.integer_or("seed", DEFAULT_SEED)?;
    let start = Instant::now();
    let checks = verification_suite(&settings, n_paths, seed)?;
    let digits = settings.precision()?;
    let mut table = Table::new(&["check", "status", "statistic", "threshold"]);
    for c in &checks {
        let status = if c.passed { "pass" } else { "fail" };
        table.push(&[c.name.clone(), status.into(), number(c.statistic, digits), number(c.threshold, digits)]);
    }
    table.emit(settings.output().as_deref())?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    eprintln!("{} checks, {} failed, {:.1?}", checks.len(), failed.len(), start.elapsed());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join(", ")))
    }
}
