//! Numerical inversion of Laplace transforms.
//!
//! Two independent algorithms: Gaver-Stehfest, which samples the transform on
//! the positive real axis, and the fixed-contour Talbot method, which needs
//! the transform at complex arguments. They disagree only when one of them
//! is struggling, so each can check the other.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};

/// A Laplace-domain function `F(s)`, analytic to the right of its
/// singularities on the non-positive real axis.
pub trait LaplaceTransform {
    fn eval(&self, s: Complex64) -> Complex64;

    fn eval_real(&self, s: f64) -> f64 {
        self.eval(Complex64::new(s, 0.0)).re
    }

    /// `F(s)` at real `s` in double-double precision, when the transform can
    /// provide it. Enables Gaver-Stehfest beyond order 18.
    fn eval_extended(&self, _s: DoubleDouble) -> Option<DoubleDouble> {
        None
    }
}

impl<F> LaplaceTransform for F
where
    F: Fn(Complex64) -> Complex64,
{
    fn eval(&self, s: Complex64) -> Complex64 {
        self(s)
    }
}

pub const DEFAULT_STEHFEST_ORDER: usize = 16;
pub const DEFAULT_EXTENDED_ORDER: usize = 24;
pub const DEFAULT_STEHFEST_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_TALBOT_NODES: usize = 32;

/// Highest Gaver-Stehfest order usable with double-precision transform values.
pub const MAX_F64_ORDER: usize = 18;
pub const MAX_EXTENDED_ORDER: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InversionMethod {
    /// Stehfest order `order` (even, 10..=18) in double precision,
    /// cross-checked against order `order - 2`; the two must agree to
    /// `tolerance` relative to `max(|f|, 1)`.
    GaverStehfest { order: usize, tolerance: f64 },
    /// Same scheme with order up to 32, summed in double-double precision.
    /// Needs [`LaplaceTransform::eval_extended`].
    GaverStehfestExtended { order: usize, tolerance: f64 },
    /// Fixed Talbot contour with `nodes` nodes.
    Talbot { nodes: usize },
}

impl Default for InversionMethod {
    fn default() -> Self {
        InversionMethod::GaverStehfest { order: DEFAULT_STEHFEST_ORDER, tolerance: DEFAULT_STEHFEST_TOLERANCE }
    }
}

impl InversionMethod {
    pub fn talbot() -> Self {
        InversionMethod::Talbot { nodes: DEFAULT_TALBOT_NODES }
    }

    pub fn extended() -> Self {
        InversionMethod::GaverStehfestExtended { order: DEFAULT_EXTENDED_ORDER, tolerance: DEFAULT_STEHFEST_TOLERANCE }
    }
}

fn factorial(m: usize) -> DoubleDouble {
    (2..=m).fold(DoubleDouble::ONE, |acc, i| acc * i as f64)
}

/// Stehfest weights `V_k`, `k = 1..=n`, in double-double precision.
pub fn stehfest_weights_extended(n: usize) -> Vec<DoubleDouble> {
    assert!(n.is_multiple_of(2) && n >= 2, "Stehfest order must be even and >= 2");
    let half = n / 2;
    (1..=n)
        .map(|k| {
            let lo = k.div_ceil(2);
            let hi = k.min(half);
            let sum = (lo..=hi).fold(DoubleDouble::ZERO, |acc, j| {
                let num = DoubleDouble::from_u128((j as u128).pow(half as u32)) * factorial(2 * j);
                let den = factorial(half - j) * factorial(j) * factorial(j - 1) * factorial(k - j) * factorial(2 * j - k);
                acc + num / den
            });
            if (k + half).is_multiple_of(2) {
                sum
            } else {
                -sum
            }
        })
        .collect()
}

/// Stehfest weights rounded to `f64`.
pub fn stehfest_weights(n: usize) -> Vec<f64> {
    stehfest_weights_extended(n).into_iter().map(DoubleDouble::to_f64).collect()
}

fn stehfest<F: LaplaceTransform + ?Sized>(f: &F, t: f64, n: usize) -> f64 {
    let scale = LN_2 / t;
    stehfest_weights(n)
        .iter()
        .enumerate()
        .map(|(i, v)| v * f.eval_real((i + 1) as f64 * scale))
        .sum::<f64>()
        * scale
}

fn stehfest_extended<F: LaplaceTransform + ?Sized>(f: &F, t: f64, n: usize) -> Option<f64> {
    let scale = DoubleDouble::new(LN_2, 2.319_046_813_846_299_6e-17) / t;
    let mut acc = DoubleDouble::ZERO;
    for (i, v) in stehfest_weights_extended(n).into_iter().enumerate() {
        acc = acc + v * f.eval_extended(scale * (i + 1) as f64)?;
    }
    Some((acc * scale).to_f64())
}

fn talbot<F: LaplaceTransform + ?Sized>(f: &F, t: f64, nodes: usize) -> f64 {
    let m = nodes as f64;
    let r = 2.0 * m / (5.0 * t);
    let mut acc = 0.5 * (f.eval(Complex64::new(r, 0.0)) * (r * t).exp()).re;
    for k in 1..nodes {
        let theta = k as f64 * PI / m;
        let cot = theta.cos() / theta.sin();
        let s = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        acc += ((s * t).exp() * f.eval(s) * Complex64::new(1.0, sigma)).re;
    }
    acc * r / m
}

fn agreement(t: f64, coarse: f64, fine: f64, tolerance: f64) -> Result<f64> {
    if !fine.is_finite() || !coarse.is_finite() || (fine - coarse).abs() > tolerance * fine.abs().max(1.0) {
        return Err(Error::InversionUnstable { t, coarse, fine });
    }
    Ok(fine)
}

/// Approximates the inverse transform `f(t)` at `t > 0`.
pub fn invert_laplace<F: LaplaceTransform + ?Sized>(f: &F, t: f64, method: InversionMethod) -> Result<f64> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain(format!("inversion time must be finite and > 0, got {t}")));
    }
    match method {
        InversionMethod::GaverStehfest { order, tolerance } => {
            if order % 2 != 0 || !(10..=MAX_F64_ORDER).contains(&order) {
                return Err(Error::domain(format!("Stehfest order must be even in 10..=18, got {order}")));
            }
            agreement(t, stehfest(f, t, order - 2), stehfest(f, t, order), tolerance)
        }
        InversionMethod::GaverStehfestExtended { order, tolerance } => {
            if order % 2 != 0 || !(10..=MAX_EXTENDED_ORDER).contains(&order) {
                return Err(Error::domain(format!("extended Stehfest order must be even in 10..=32, got {order}")));
            }
            let missing = || Error::domain("transform has no extended-precision evaluator");
            let fine = stehfest_extended(f, t, order).ok_or_else(missing)?;
            let coarse = stehfest_extended(f, t, order - 2).ok_or_else(missing)?;
            agreement(t, coarse, fine, tolerance)
        }
        InversionMethod::Talbot { nodes } => {
            if nodes < 2 {
                return Err(Error::domain("Talbot needs at least two nodes"));
            }
            let v = talbot(f, t, nodes);
            if !v.is_finite() {
                return Err(Error::InversionUnstable { t, coarse: v, fine: v });
            }
            Ok(v)
        }
    }
}

/// Picks extended Gaver-Stehfest when the transform supports it, else the
/// double-precision scheme.
pub fn preferred_method<F: LaplaceTransform + ?Sized>(f: &F) -> InversionMethod {
    if f.eval_extended(DoubleDouble::ONE).is_some() {
        InversionMethod::extended()
    } else {
        InversionMethod::default()
    }
}

/// A time-domain survival probability after inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalPoint {
    /// Inverted value clamped to `[0, 1]`.
    pub value: f64,
    /// Unclamped inversion output.
    pub raw: f64,
    /// `raw - value`; nonzero only when the inversion left `[0, 1]`.
    pub residual: f64,
}

/// Inverts a survival transform and clamps the result to a probability.
pub fn invert_survival<F: LaplaceTransform + ?Sized>(f: &F, t: f64, method: InversionMethod) -> Result<SurvivalPoint> {
    let raw = invert_laplace(f, t, method)?;
    let value = raw.clamp(0.0, 1.0);
    Ok(SurvivalPoint { value, raw, residual: raw - value })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_over_s(s: Complex64) -> Complex64 {
        s.inv()
    }

    /// `1/s - c/(s(s+λ))`, the transform of `1 - (c/λ)(1 - e^{-λt})`.
    struct SurvivalLike {
        c: f64,
        lambda: f64,
    }

    impl SurvivalLike {
        fn exact(&self, t: f64) -> f64 {
            1.0 - self.c / self.lambda * (1.0 - (-self.lambda * t).exp())
        }
    }

    impl LaplaceTransform for SurvivalLike {
        fn eval(&self, s: Complex64) -> Complex64 {
            s.inv() - self.c / (s * (s + self.lambda))
        }

        fn eval_extended(&self, s: DoubleDouble) -> Option<DoubleDouble> {
            Some(DoubleDouble::ONE / s - self.c / (s * (s + self.lambda)))
        }
    }

    #[test]
    fn stehfest_weights_sum_to_zero() {
        for n in [10, 12, 14, 16, 18, 24, 32] {
            let w = stehfest_weights_extended(n);
            let scale = w.iter().map(|v| v.abs().to_f64()).fold(0.0, f64::max);
            let total = w.iter().fold(DoubleDouble::ZERO, |acc, &v| acc + v);
            assert!(total.abs().to_f64() < 1e-28 * scale, "n = {n}");
        }
        // Low-order weights from the classical table
        let w = stehfest_weights(4);
        assert_eq!(w, vec![-2.0, 26.0, -48.0, 24.0]);
        let w = stehfest_weights(10);
        assert!((w[0] - 1.0 / 12.0).abs() < 1e-17);
        assert!((w[1] + 385.0 / 12.0).abs() < 1e-14);
    }

    #[test]
    fn constant_function() {
        // Double-precision Stehfest loses about seven digits to cancellation.
        let v = invert_laplace(&one_over_s, 3.0, InversionMethod::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-6, "{v}");
        let v = invert_laplace(&one_over_s, 3.0, InversionMethod::talbot()).unwrap();
        assert!((v - 1.0).abs() < 1e-10, "{v}");
        let f = SurvivalLike { c: 0.0, lambda: 1.0 };
        let v = invert_laplace(&f, 3.0, InversionMethod::extended()).unwrap();
        assert!((v - 1.0).abs() < 1e-14, "{v}");
    }

    #[test]
    fn exponential_decay() {
        let f = |s: Complex64| (s + 0.1).inv();
        for method in [InversionMethod::default(), InversionMethod::talbot()] {
            let v = invert_laplace(&f, 10.0, method).unwrap();
            assert!((v - (-1.0f64).exp()).abs() < 1e-6, "{method:?}: {v}");
        }
    }

    #[test]
    fn survival_like_pair() {
        let f = SurvivalLike { c: 0.04, lambda: 0.1 };
        for t in [0.5, 5.0, 50.0] {
            for method in [InversionMethod::extended(), InversionMethod::talbot()] {
                let v = invert_laplace(&f, t, method).unwrap();
                assert!((v - f.exact(t)).abs() < 1e-6, "{method:?} t={t}: {v} vs {}", f.exact(t));
            }
        }
        // Double precision manages the short end only.
        let v = invert_laplace(&f, 5.0, InversionMethod::default()).unwrap();
        assert!((v - f.exact(5.0)).abs() < 1e-6);
    }

    #[test]
    fn preferred_method_follows_capability() {
        assert_eq!(preferred_method(&one_over_s), InversionMethod::default());
        assert_eq!(preferred_method(&SurvivalLike { c: 0.1, lambda: 1.0 }), InversionMethod::extended());
        let err = invert_laplace(&one_over_s, 1.0, InversionMethod::extended()).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(invert_laplace(&one_over_s, 0.0, InversionMethod::default()).is_err());
        assert!(invert_laplace(&one_over_s, 1.0, InversionMethod::GaverStehfest { order: 11, tolerance: 1e-6 }).is_err());
        assert!(invert_laplace(&one_over_s, 1.0, InversionMethod::GaverStehfest { order: 20, tolerance: 1e-6 }).is_err());
    }

    #[test]
    fn unstable_transform_is_reported() {
        // An oscillating original is beyond Stehfest.
        let f = |s: Complex64| (s * s + 400.0).inv() * 20.0;
        let err = invert_laplace(&f, 3.0, InversionMethod::default()).unwrap_err();
        assert!(matches!(err, Error::InversionUnstable { .. }));
    }

    #[test]
    fn survival_clamp_reports_residual() {
        let f = |s: Complex64| s.inv() * 1.5;
        let p = invert_survival(&f, 1.0, InversionMethod::talbot()).unwrap();
        assert_eq!(p.value, 1.0);
        assert!((p.residual - 0.5).abs() < 1e-8);
    }
}
