//! Monte Carlo first-passage oracle.
//!
//! Paths are simulated jump by jump, exactly: the log-price is a pure step
//! process, so there is nothing to discretise. Each path draws from its own
//! ChaCha stream keyed by `(seed, path index)`, paths are grouped into
//! fixed-size chunks, and chunk statistics are merged pairwise in index
//! order. The result is therefore bitwise identical for any thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pricing::OptionSpec;
use crate::process::{sample_jump, MarketModel};
use crate::survival::Side;

const CHUNK: usize = 1024;

/// Default cap on the discounted weight of unresolved paths.
pub const DEFAULT_MAX_CENSORING: f64 = 1e-3;
pub const DEFAULT_MAX_JUMPS: u64 = 10_000_000;
/// Default horizon in units of the mean sojourn time.
pub const DEFAULT_HORIZON_SOJOURNS: f64 = 50.0;

/// Absorbing levels in log-price. Crossing is strict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Unbounded,
    /// Stop when the log-price rises strictly above the level.
    Up(f64),
    /// Stop when the log-price falls strictly below the level.
    Down(f64),
    Corridor { lower: f64, upper: f64 },
}

impl Region {
    fn contains(&self, x: f64) -> bool {
        match *self {
            Region::Unbounded => true,
            Region::Up(level) => x <= level,
            Region::Down(level) => x >= level,
            Region::Corridor { lower, upper } => x >= lower && x <= upper,
        }
    }

    fn is_bounded(&self) -> bool {
        !matches!(self, Region::Unbounded)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Estimator {
    /// Fraction of paths still inside the region at each time.
    SurvivalAtTimes(Vec<f64>),
    /// `E[e^{-sτ}]`, with `e^{-s·∞} = 0`.
    DiscountedCrossing { s: f64 },
    /// `E[∫₀^τ e^{-st} dt] = E[(1 - e^{-sτ})/s]`, the survival transform.
    LaplaceSurvival { s: f64 },
    /// `E[P(S(τ)) e^{-rτ}]` for a contract exercised on the region boundary.
    DiscountedPayoff { spec: OptionSpec },
    /// `E[S(t) e^{-rt}] / S₀` at each time.
    MartingaleCheck(Vec<f64>),
}

impl Estimator {
    fn outputs(&self) -> usize {
        match self {
            Estimator::SurvivalAtTimes(ts) | Estimator::MartingaleCheck(ts) => ts.len(),
            _ => 1,
        }
    }

    /// Discount rate for crossing-type estimators.
    fn discount(&self, model: &MarketModel) -> Option<f64> {
        match *self {
            Estimator::DiscountedCrossing { s } | Estimator::LaplaceSurvival { s } => Some(s),
            Estimator::DiscountedPayoff { .. } => Some(model.r()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationPlan {
    pub model: MarketModel,
    pub region: Region,
    pub estimator: Estimator,
    pub horizon: f64,
    pub max_jumps: u64,
    pub n_paths: u64,
    pub seed: u64,
    /// Largest admissible mean discount factor of unresolved paths.
    pub max_censoring: f64,
}

impl SimulationPlan {
    /// A plan with default horizon (50 mean sojourns), jump cap, `10⁵` paths
    /// and seed 0.
    pub fn new(model: MarketModel, region: Region, estimator: Estimator) -> Self {
        SimulationPlan {
            horizon: DEFAULT_HORIZON_SOJOURNS * model.waits().mean(),
            model,
            region,
            estimator,
            max_jumps: DEFAULT_MAX_JUMPS,
            n_paths: 100_000,
            seed: 0,
            max_censoring: DEFAULT_MAX_CENSORING,
        }
    }

    pub fn paths(mut self, n_paths: u64) -> Self {
        self.n_paths = n_paths;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn horizon(mut self, horizon: f64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn max_jumps(mut self, max_jumps: u64) -> Self {
        self.max_jumps = max_jumps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(Error::domain("n_paths must be >= 1"));
        }
        if !(self.horizon > 0.0) {
            return Err(Error::domain(format!("horizon must be > 0, got {}", self.horizon)));
        }
        if self.max_jumps == 0 {
            return Err(Error::domain("max_jumps must be >= 1"));
        }
        let x0 = self.model.x0();
        if !self.region.contains(x0) {
            return Err(Error::domain(format!("start {x0} lies outside the absorbing region {:?}", self.region)));
        }
        match &self.estimator {
            Estimator::SurvivalAtTimes(ts) | Estimator::MartingaleCheck(ts) => {
                if ts.is_empty() || ts.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
                    return Err(Error::domain("times must be a non-empty list of finite values >= 0"));
                }
                if matches!(self.estimator, Estimator::SurvivalAtTimes(_)) && !self.region.is_bounded() {
                    return Err(Error::domain("survival needs an absorbing region"));
                }
            }
            Estimator::DiscountedCrossing { s } | Estimator::LaplaceSurvival { s } => {
                if !(s.is_finite() && *s > 0.0) {
                    return Err(Error::domain(format!("discount rate must be > 0, got {s}")));
                }
                if !self.region.is_bounded() {
                    return Err(Error::domain("crossing estimators need an absorbing region"));
                }
            }
            Estimator::DiscountedPayoff { spec } => {
                spec.validate()?;
                let ok = matches!(
                    (spec.side(), self.region),
                    (Side::Up, Region::Up(_)) | (Side::Down, Region::Down(_))
                );
                if !ok {
                    return Err(Error::domain("payoff side must match the barrier direction"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    /// Paths resolved within the horizon and jump cap.
    pub n_effective: u64,
    /// Paths stopped by the horizon or the jump cap before resolution.
    pub censored: u64,
    /// Mean discount factor `e^{-s·t_stop}` carried by censored paths; bounds
    /// the censoring bias per unit payoff. Zero for undiscounted estimators.
    pub censoring_weight: f64,
}

impl McEstimate {
    /// `|mean - target| / stderr`; infinite when a zero-variance estimate
    /// misses.
    pub fn z_score(&self, target: f64) -> f64 {
        let gap = (self.mean - target).abs();
        if gap == 0.0 {
            0.0
        } else {
            gap / self.stderr
        }
    }
}

/// Running mean and centred second moment; merged with Chan's update.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(a: Moments, b: Moments) -> Moments {
        if a.n == 0 {
            return b;
        }
        if b.n == 0 {
            return a;
        }
        let n = a.n + b.n;
        let delta = b.mean - a.mean;
        let mean = a.mean + delta * (b.n as f64 / n as f64);
        let m2 = a.m2 + b.m2 + delta * delta * (a.n as f64 * b.n as f64 / n as f64);
        Moments { n, mean, m2 }
    }

    fn stderr(&self) -> f64 {
        if self.n < 2 {
            return f64::INFINITY;
        }
        (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
    }
}

#[derive(Debug, Clone, Default)]
struct ChunkStats {
    moments: Vec<Moments>,
    censored: u64,
    censoring_weight: Moments,
}

impl ChunkStats {
    fn merge(mut a: ChunkStats, b: ChunkStats) -> ChunkStats {
        if a.moments.is_empty() {
            return b;
        }
        for (x, y) in a.moments.iter_mut().zip(b.moments) {
            *x = Moments::merge(*x, y);
        }
        a.censored += b.censored;
        a.censoring_weight = Moments::merge(a.censoring_weight, b.censoring_weight);
        a
    }
}

/// Pairwise reduction in index order.
fn reduce_pairwise(mut parts: Vec<ChunkStats>) -> ChunkStats {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => ChunkStats::merge(a, b),
                None => a,
            });
        }
        parts = next;
    }
    parts.pop().unwrap_or_default()
}

/// The random stream of path `index`.
pub fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Stop {
    /// Left the region at `tau`, landing on `x`.
    Crossed { tau: f64, x: f64 },
    /// Next transaction falls after the horizon.
    Horizon,
    /// Jump cap hit at time `t`.
    JumpCap { t: f64 },
}

fn crossed(region: &Region, x: f64) -> bool {
    !region.contains(x)
}

/// Simulates until the region is left, the horizon passes or the jump cap is
/// reached.
fn first_exit(model: &MarketModel, region: &Region, horizon: f64, max_jumps: u64, rng: &mut ChaCha8Rng) -> Stop {
    let mut t = 0.0;
    let mut x = model.x0();
    for _ in 0..max_jumps {
        t += model.waits().sample(rng);
        if t > horizon {
            return Stop::Horizon;
        }
        x += sample_jump(model.jumps(), rng);
        if crossed(region, x) {
            return Stop::Crossed { tau: t, x };
        }
    }
    Stop::JumpCap { t }
}

/// Log-price at each of the (ascending-sorted) `times`.
fn positions_at(model: &MarketModel, times: &[f64], max_jumps: u64, rng: &mut ChaCha8Rng, out: &mut [f64]) -> bool {
    let mut x = model.x0();
    let mut jumps = 0u64;
    let mut next_t = model.waits().sample(rng);
    for (slot, &target) in out.iter_mut().zip(times) {
        while next_t <= target {
            if jumps == max_jumps {
                return false;
            }
            x += sample_jump(model.jumps(), rng);
            jumps += 1;
            next_t += model.waits().sample(rng);
        }
        *slot = x;
    }
    true
}

fn simulate_chunk(plan: &SimulationPlan, start: u64, end: u64) -> ChunkStats {
    let outputs = plan.estimator.outputs();
    let mut stats = ChunkStats { moments: vec![Moments::default(); outputs], ..Default::default() };
    let mut values = vec![0.0; outputs];
    let model = &plan.model;
    let discount = plan.estimator.discount(model);

    // Sorted view of the time grid plus the permutation back.
    let times: Option<(Vec<f64>, Vec<usize>)> = match &plan.estimator {
        Estimator::SurvivalAtTimes(ts) | Estimator::MartingaleCheck(ts) => {
            let mut order: Vec<usize> = (0..ts.len()).collect();
            order.sort_by(|&a, &b| ts[a].total_cmp(&ts[b]));
            Some((order.iter().map(|&i| ts[i]).collect(), order))
        }
        _ => None,
    };

    for index in start..end {
        let mut rng = path_rng(plan.seed, index);
        let mut censored_at = None;
        match &plan.estimator {
            Estimator::SurvivalAtTimes(_) => {
                let (sorted, order) = times.as_ref().expect("time grid");
                let t_max = *sorted.last().expect("non-empty");
                let stop = first_exit(model, &plan.region, t_max, plan.max_jumps, &mut rng);
                let tau = match stop {
                    Stop::Crossed { tau, .. } => tau,
                    Stop::Horizon => f64::INFINITY,
                    Stop::JumpCap { t } => {
                        censored_at = Some(t);
                        f64::INFINITY
                    }
                };
                for (k, &i) in order.iter().enumerate() {
                    values[i] = if tau > sorted[k] { 1.0 } else { 0.0 };
                }
            }
            Estimator::MartingaleCheck(_) => {
                let (sorted, order) = times.as_ref().expect("time grid");
                let mut xs = vec![0.0; sorted.len()];
                if !positions_at(model, sorted, plan.max_jumps, &mut rng, &mut xs) {
                    censored_at = Some(0.0);
                }
                for (k, &i) in order.iter().enumerate() {
                    values[i] = (xs[k] - model.x0() - model.r() * sorted[k]).exp();
                }
            }
            Estimator::DiscountedCrossing { s } | Estimator::LaplaceSurvival { s } => {
                let stop = first_exit(model, &plan.region, plan.horizon, plan.max_jumps, &mut rng);
                let hit = match stop {
                    Stop::Crossed { tau, .. } => (-s * tau).exp(),
                    Stop::Horizon => {
                        censored_at = Some(plan.horizon);
                        0.0
                    }
                    Stop::JumpCap { t } => {
                        censored_at = Some(t);
                        0.0
                    }
                };
                values[0] = match plan.estimator {
                    Estimator::LaplaceSurvival { .. } => (1.0 - hit) / s,
                    _ => hit,
                };
            }
            Estimator::DiscountedPayoff { spec } => {
                let stop = first_exit(model, &plan.region, plan.horizon, plan.max_jumps, &mut rng);
                values[0] = match stop {
                    Stop::Crossed { tau, x } => spec.intrinsic(x.exp()) * (-model.r() * tau).exp(),
                    Stop::Horizon => {
                        censored_at = Some(plan.horizon);
                        0.0
                    }
                    Stop::JumpCap { t } => {
                        censored_at = Some(t);
                        0.0
                    }
                };
            }
        }
        for (m, &v) in stats.moments.iter_mut().zip(&values) {
            m.push(v);
        }
        let weight = match (censored_at, discount) {
            (Some(t), Some(s)) => {
                stats.censored += 1;
                (-s * t).exp()
            }
            (Some(_), None) => {
                stats.censored += 1;
                1.0
            }
            (None, _) => 0.0,
        };
        stats.censoring_weight.push(weight);
    }
    stats
}

fn simulate(plan: &SimulationPlan) -> ChunkStats {
    let n = plan.n_paths;
    let chunks = n.div_ceil(CHUNK as u64);
    let parts: Vec<ChunkStats> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK as u64;
            simulate_chunk(plan, start, (start + CHUNK as u64).min(n))
        })
        .collect();
    reduce_pairwise(parts)
}

/// Runs the plan on the current rayon pool. Returns one estimate per time
/// point for time-grid estimators, else a single estimate.
pub fn run(plan: &SimulationPlan) -> Result<Vec<McEstimate>> {
    plan.validate()?;
    let stats = simulate(plan);
    let weight = stats.censoring_weight.mean;
    let enforce = match plan.estimator {
        Estimator::DiscountedCrossing { .. } | Estimator::LaplaceSurvival { .. } | Estimator::DiscountedPayoff { .. } => true,
        _ => stats.censored > 0,
    };
    if enforce && weight > plan.max_censoring {
        return Err(Error::ExcessiveCensoring {
            censored: stats.censored,
            n_paths: plan.n_paths,
            weight,
            bound: plan.max_censoring,
        });
    }
    Ok(stats
        .moments
        .iter()
        .map(|m| McEstimate {
            mean: m.mean,
            stderr: m.stderr(),
            n_effective: plan.n_paths - stats.censored,
            censored: stats.censored,
            censoring_weight: weight,
        })
        .collect())
}

/// Runs the plan on a dedicated pool of `threads` workers. The result does
/// not depend on `threads`.
pub fn run_with_threads(plan: &SimulationPlan, threads: usize) -> Result<Vec<McEstimate>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::domain(format!("thread pool: {e}")))?;
    pool.install(|| run(plan))
}

/// Log-space overshoots past a one-sided barrier.
#[derive(Debug, Clone, PartialEq)]
pub struct OvershootSample {
    pub side: Side,
    /// Overshoots in path-index order.
    pub overshoots: Vec<f64>,
    pub mean: f64,
    pub stderr: f64,
    /// Paths that never crossed within horizon and jump cap.
    pub censored: u64,
    /// Kolmogorov-Smirnov distance to `Exp(ρ)` (up) or `Exp(γ)` (down).
    pub ks_statistic: f64,
    pub ks_p_value: f64,
}

/// Collects overshoots `X(τ) - level` (up) or `level - X(τ)` (down) for the
/// plan's barrier and tests them against the exponential jump tail.
pub fn overshoot_distribution(plan: &SimulationPlan) -> Result<OvershootSample> {
    plan.validate()?;
    let (side, level, rate) = match plan.region {
        Region::Up(level) => (Side::Up, level, plan.model.jumps().rho()),
        Region::Down(level) => (Side::Down, level, plan.model.jumps().gamma()),
        _ => return Err(Error::domain("overshoots need a one-sided barrier")),
    };
    let n = plan.n_paths;
    let chunks = n.div_ceil(CHUNK as u64);
    let per_chunk: Vec<Vec<Option<f64>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK as u64;
            (start..(start + CHUNK as u64).min(n))
                .map(|index| {
                    let mut rng = path_rng(plan.seed, index);
                    match first_exit(&plan.model, &plan.region, plan.horizon, plan.max_jumps, &mut rng) {
                        Stop::Crossed { x, .. } => Some(match side {
                            Side::Up => x - level,
                            Side::Down => level - x,
                        }),
                        _ => None,
                    }
                })
                .collect()
        })
        .collect();
    let all: Vec<Option<f64>> = per_chunk.into_iter().flatten().collect();
    let overshoots: Vec<f64> = all.iter().flatten().copied().collect();
    let censored = (all.len() - overshoots.len()) as u64;
    if overshoots.len() < 2 {
        return Err(Error::domain("fewer than two crossings; cannot form an overshoot sample"));
    }
    let mut moments = Moments::default();
    overshoots.iter().for_each(|&v| moments.push(v));
    let (ks_statistic, ks_p_value) = ks_exponential(&overshoots, rate);
    Ok(OvershootSample { side, overshoots, mean: moments.mean, stderr: moments.stderr(), censored, ks_statistic, ks_p_value })
}

/// One-sample Kolmogorov-Smirnov test against `Exp(rate)`.
pub fn ks_exponential(sample: &[f64], rate: f64) -> (f64, f64) {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let d = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = 1.0 - (-rate * x.max(0.0)).exp();
            (cdf - i as f64 / n).max((i + 1) as f64 / n - cdf)
        })
        .fold(0.0, f64::max);
    let sqrt_n = n.sqrt();
    (d, kolmogorov_survival((sqrt_n + 0.12 + 0.11 / sqrt_n) * d))
}

/// `Pr{K > λ}` for the Kolmogorov distribution.
fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::{JumpLaw, WaitingLaw};

    fn model(s0: f64) -> MarketModel {
        MarketModel::risk_neutral(JumpLaw::new(2.0, 3.0).unwrap(), 0.05, s0).unwrap()
    }

    #[test]
    fn moments_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.3).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let mut a = Moments::default();
        let mut b = Moments::default();
        xs[..313].iter().for_each(|&x| a.push(x));
        xs[313..].iter().for_each(|&x| b.push(x));
        let merged = Moments::merge(a, b);
        assert_eq!(merged.n, whole.n);
        assert!((merged.mean - whole.mean).abs() < 1e-12);
        assert!((merged.m2 - whole.m2).abs() < 1e-8 * whole.m2);
    }

    #[test]
    fn plan_validation() {
        let m = model(1.0);
        let bad_side = SimulationPlan::new(m, Region::Up(-0.1), Estimator::DiscountedCrossing { s: 0.05 });
        assert!(run(&bad_side).is_err());
        let unbounded = SimulationPlan::new(m, Region::Unbounded, Estimator::DiscountedCrossing { s: 0.05 });
        assert!(run(&unbounded).is_err());
        let zero = SimulationPlan::new(m, Region::Up(0.1), Estimator::DiscountedCrossing { s: 0.05 }).paths(0);
        assert!(run(&zero).is_err());
        let mismatch =
            SimulationPlan::new(m, Region::Up(0.1), Estimator::DiscountedPayoff { spec: OptionSpec::VanillaPut { strike: 1.0 } });
        assert!(run(&mismatch).is_err());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let plan = SimulationPlan::new(model(2.0), Region::Down(0.0), Estimator::DiscountedCrossing { s: 0.05 })
            .paths(20_000)
            .seed(7);
        let one = run_with_threads(&plan, 1).unwrap();
        let four = run_with_threads(&plan, 4).unwrap();
        assert_eq!(one, four);
        assert_eq!(one[0].mean.to_bits(), four[0].mean.to_bits());
        let other_seed = run_with_threads(&plan.clone().seed(8), 4).unwrap();
        assert_ne!(one[0].mean, other_seed[0].mean);
    }

    #[test]
    fn censoring_accounting() {
        // Positive drift: most paths never fall below the barrier and end at
        // the horizon, where their discount weight is negligible.
        let plan = SimulationPlan::new(model(2.0), Region::Down(0.0), Estimator::DiscountedCrossing { s: 0.05 }).paths(5_000);
        let est = run(&plan).unwrap()[0];
        assert_eq!(est.n_effective + est.censored, 5_000);
        assert!(est.censored > 2_000);
        assert!(est.censoring_weight < 1e-10);

        // A tiny jump cap leaves paths unresolved at early times.
        let capped = plan.clone().max_jumps(1);
        assert!(matches!(run(&capped), Err(Error::ExcessiveCensoring { .. })));
    }

    #[test]
    fn martingale_estimator_without_jumps_is_exact() {
        // Deterministic sojourns longer than every time point: no jump occurs.
        let m = MarketModel::physical(JumpLaw::new(2.0, 3.0).unwrap(), WaitingLaw::Deterministic { period: 100.0 }, 0.05, 1.0)
            .unwrap();
        let plan = SimulationPlan::new(m, Region::Unbounded, Estimator::MartingaleCheck(vec![5.0, 1.0])).paths(100);
        let est = run(&plan).unwrap();
        assert!((est[0].mean - (-0.25f64).exp()).abs() < 1e-15);
        assert!((est[1].mean - (-0.05f64).exp()).abs() < 1e-15);
        assert_eq!(est[0].stderr, 0.0);
    }

    #[test]
    fn survival_times_keep_caller_order() {
        let plan = SimulationPlan::new(model(0.5), Region::Up(0.0), Estimator::SurvivalAtTimes(vec![100.0, 1.0, 10.0]))
            .paths(2_000);
        let est = run(&plan).unwrap();
        assert!(est[1].mean >= est[2].mean && est[2].mean >= est[0].mean);
    }

    #[test]
    fn ks_statistic_detects_wrong_rate() {
        let m = model(0.5);
        let plan = SimulationPlan::new(m, Region::Up(0.0), Estimator::DiscountedCrossing { s: 0.05 }).paths(20_000);
        let sample = overshoot_distribution(&plan).unwrap();
        let (_, p_wrong) = ks_exponential(&sample.overshoots, 3.0);
        assert!(p_wrong < 1e-6);
        assert!(sample.ks_p_value > 0.001);
    }

    #[test]
    fn kolmogorov_tail_reference_values() {
        // Classical critical values: Pr{K > 1.358} ≈ 0.05, Pr{K > 1.628} ≈ 0.01
        assert!((kolmogorov_survival(1.3581) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_survival(1.6276) - 0.01).abs() < 1e-3);
        assert_eq!(kolmogorov_survival(0.1), 1.0);
    }
}
