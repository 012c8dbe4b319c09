//! Randomised invariants of the closed forms.

use ctrw_core::{
    auxiliaries, martingale_rate, phi_laplace, price, survival_corridor_laplace, CorridorQuery, JumpLaw,
    MarketModel, OptionSpec, Side,
};
use proptest::prelude::*;

/// Jump tails with `ρ > 1` and `γ > ρ - 1`, away from the feasibility edge.
fn feasible_jumps() -> impl Strategy<Value = (f64, f64)> {
    (1.01f64..40.0, 0.01f64..40.0).prop_map(|(rho, extra)| (rho, rho - 1.0 + extra))
}

fn model(rho: f64, gamma: f64, r: f64, s0: f64) -> MarketModel {
    MarketModel::risk_neutral(JumpLaw::new(rho, gamma).unwrap(), r, s0).unwrap()
}

fn specs(k: f64) -> [OptionSpec; 4] {
    [
        OptionSpec::BinaryCall { k0: k },
        OptionSpec::BinaryPut { k0: k },
        OptionSpec::VanillaCall { strike: k },
        OptionSpec::VanillaPut { strike: k },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn auxiliary_identities(rho in 1.0f64..100.0, gamma in 0.01f64..100.0, psi in 0.0f64..=1.0) {
        let aux = auxiliaries(&JumpLaw::new(rho, gamma).unwrap(), psi).unwrap();
        let scale = rho.max(gamma);
        prop_assert!((aux.alpha + aux.beta - (rho - gamma)).abs() <= 1e-12 * scale);
        prop_assert!((aux.alpha * aux.beta + gamma * rho * (1.0 - psi)).abs() <= 1e-12 * scale * scale);
        prop_assert!(aux.alpha >= 0.0 && aux.beta <= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn prices_respect_intrinsic_floor_and_monotonicity(
        (rho, gamma) in feasible_jumps(),
        r in 0.001f64..0.2,
        k in 0.1f64..10.0,
    ) {
        let spots: Vec<f64> = (0..200).map(|i| k * (0.2 + i as f64 * 0.015)).collect();
        for spec in specs(k) {
            let prices: Vec<f64> = spots.iter().map(|&s| price(&model(rho, gamma, r, s), &spec).unwrap().price).collect();
            for (&s, &p) in spots.iter().zip(&prices) {
                prop_assert!(p >= spec.intrinsic(s) - 1e-12 * k, "{spec:?} at {s}: {p}");
                prop_assert!(p.is_finite());
            }
            let monotone = match spec.side() {
                Side::Up => prices.windows(2).all(|w| w[1] >= w[0] - 1e-15 * k),
                Side::Down => prices.windows(2).all(|w| w[1] <= w[0] + 1e-15 * k),
            };
            prop_assert!(monotone, "{spec:?} not monotone");
        }
    }

    #[test]
    fn prices_scale_with_the_numeraire(
        (rho, gamma) in feasible_jumps(),
        r in 0.001f64..0.2,
        k in 0.1f64..10.0,
        moneyness in 0.3f64..3.0,
        c in 0.01f64..100.0,
    ) {
        for spec in specs(k) {
            let base = price(&model(rho, gamma, r, moneyness * k), &spec).unwrap().price;
            let scaled = price(&model(rho, gamma, r, c * moneyness * k), &spec.scaled(c)).unwrap().price;
            let factor = match spec {
                OptionSpec::VanillaCall { .. } | OptionSpec::VanillaPut { .. } => c,
                _ => 1.0,
            };
            prop_assert!((scaled - factor * base).abs() <= 1e-12 * (factor * base).abs(), "{spec:?}: {scaled} vs {}", factor * base);
        }
    }

    #[test]
    fn survival_transform_is_a_probability_and_monotone(
        (rho, gamma) in feasible_jumps(),
        r in 0.001f64..0.2,
        s in 1e-4f64..10.0,
    ) {
        let m = model(rho, gamma, r, 1.0);
        for side in [Side::Up, Side::Down] {
            let sign = if side == Side::Up { -1.0 } else { 1.0 };
            let values: Vec<f64> = (0..100)
                .map(|i| s * phi_laplace(&m, side, 0.0, sign * i as f64 * 0.05, s).unwrap())
                .collect();
            for &v in &values {
                prop_assert!(v > 0.0 && v <= 1.0, "{side:?}: {v}");
            }
            prop_assert!(values.windows(2).all(|w| w[1] >= w[0]), "{side:?} not monotone in distance");
        }
    }

    #[test]
    fn corridor_survival_is_bounded_by_one_sided(
        (rho, gamma) in feasible_jumps(),
        r in 0.001f64..0.2,
        s in 1e-3f64..5.0,
        lower in 0.01f64..3.0,
        upper in 0.01f64..3.0,
    ) {
        let m = model(rho, gamma, r, 1.0);
        let q = CorridorQuery::finite(-lower, upper, 0.0, s).unwrap();
        let corridor = survival_corridor_laplace(&m, &q).unwrap();
        let up = phi_laplace(&m, Side::Up, upper, 0.0, s).unwrap();
        let down = phi_laplace(&m, Side::Down, -lower, 0.0, s).unwrap();
        prop_assert!(corridor > 0.0);
        prop_assert!(corridor <= up.min(down) * (1.0 + 1e-10), "{corridor} vs {up}, {down}");
    }

    #[test]
    fn martingale_rate_grows_with_r((rho, gamma) in feasible_jumps(), r in 0.001f64..0.2, bump in 1e-4f64..0.1) {
        let jumps = JumpLaw::new(rho, gamma).unwrap();
        let lo = martingale_rate(&jumps, r).unwrap();
        let hi = martingale_rate(&jumps, r + bump).unwrap();
        prop_assert!(hi > lo && lo > 0.0);
        let ratio = (rho - 1.0) * (gamma + 1.0) / (gamma - rho + 1.0);
        prop_assert!((lo - r * ratio).abs() <= 1e-12 * lo);
    }
}

#[test]
fn wide_corridor_matches_one_sided_forms() {
    let m = model(2.0, 3.0, 0.05, 1.0);
    let far = 40.0;
    for s in [0.01, 0.05, 1.0] {
        let aux = auxiliaries(m.jumps(), m.psi_hat(s).unwrap()).unwrap();
        // The far wall changes the answer by about e^{-α·far} (or e^{β·far}).
        let tol_down = 1e-8f64.max(10.0 * (-aux.alpha * far).exp());
        let tol_up = 1e-8f64.max(10.0 * (aux.beta * far).exp());
        for near in [0.1, 0.7, 2.0] {
            let q = CorridorQuery::finite(-near, far, 0.0, s).unwrap();
            let corridor = survival_corridor_laplace(&m, &q).unwrap();
            let down = phi_laplace(&m, Side::Down, -near, 0.0, s).unwrap();
            assert!((corridor - down).abs() <= tol_down * down, "s={s}, near={near}: {corridor} vs {down}");
            let q = CorridorQuery::finite(-far, near, 0.0, s).unwrap();
            let corridor = survival_corridor_laplace(&m, &q).unwrap();
            let up = phi_laplace(&m, Side::Up, near, 0.0, s).unwrap();
            assert!((corridor - up).abs() <= tol_up * up, "s={s}, near={near}: {corridor} vs {up}");
        }
    }
}

#[test]
fn exponents_take_diffusive_values_at_the_interest_rate() {
    let (r, eps) = (0.05, 10.0);
    for rho in [1.5, 10.0, 100.0, 1e3, 1e4, 1e5] {
        let m = model(rho, rho - 1.0 + eps, r, 1.0);
        let aux = auxiliaries(m.jumps(), m.psi_hat(r).unwrap()).unwrap();
        assert!((aux.alpha - 1.0).abs() <= 1e-12 * rho, "rho={rho}: alpha={}", aux.alpha);
        assert!((aux.beta + eps).abs() <= 1e-12 * rho, "rho={rho}: beta={}", aux.beta);
    }
}
