//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64`s,
//! giving about 32 significant digits. Used by the extended-precision
//! Gaver-Stehfest inversion, whose weights grow past `1e15` at high order.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

const LN_2: DoubleDouble = DoubleDouble { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        DoubleDouble { hi, lo }
    }

    /// Exact conversion of an integer below `2^106`.
    pub fn from_u128(n: u128) -> Self {
        let hi = n as f64;
        let rest = n as i128 - hi as i128;
        Self::new(hi, rest as f64)
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Self::ZERO } else { DoubleDouble { hi: f64::NAN, lo: f64::NAN } };
        }
        let y = self.hi.sqrt();
        let (p, e) = two_prod(y, y);
        let residual = ((self.hi - p) - e + self.lo) / (2.0 * y);
        Self::new(y, residual)
    }

    /// Natural exponential via `x = k ln 2 + r`, `e^r` from a Taylor series on
    /// `r / 2^10` followed by ten squarings.
    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return DoubleDouble { hi: f64::INFINITY, lo: 0.0 };
        }
        if self.hi < -745.0 {
            return Self::ZERO;
        }
        const SQUARINGS: i32 = 10;
        let k = (self.hi / std::f64::consts::LN_2).round();
        let r = (self - LN_2 * k) * (1.0 / f64::from(1 << SQUARINGS));
        // e^r - 1
        let mut term = r;
        let mut sum = r;
        for n in 2..=14 {
            term = term * r / n as f64;
            sum = sum + term;
            if term.hi.abs() < 1e-34 {
                break;
            }
        }
        // (1 + s)^2 - 1 = 2s + s^2
        for _ in 0..SQUARINGS {
            sum = sum * 2.0 + sum * sum;
        }
        let scale = 2f64.powi(k as i32);
        (sum + 1.0) * scale
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * q1;
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * q2;
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + DoubleDouble::from(q3)
    }
}

macro_rules! scalar_ops {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<f64> for DoubleDouble {
            type Output = Self;
            fn $method(self, rhs: f64) -> Self {
                $tr::$method(self, DoubleDouble::from(rhs))
            }
        }
        impl $tr<DoubleDouble> for f64 {
            type Output = DoubleDouble;
            fn $method(self, rhs: DoubleDouble) -> DoubleDouble {
                $tr::$method(DoubleDouble::from(self), rhs)
            }
        }
    )*};
}

scalar_ops!(Add add, Sub sub, Mul mul, Div div);

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: DoubleDouble, b: DoubleDouble, tol: f64) -> bool {
        (a - b).abs().to_f64() <= tol * b.abs().to_f64().max(1e-300)
    }

    #[test]
    fn arithmetic_beyond_f64() {
        let third = DoubleDouble::ONE / 3.0;
        assert!(close(third * 3.0, DoubleDouble::ONE, 1e-31));
        let big = DoubleDouble::from(1e20) + 1.0;
        assert_eq!((big - 1e20).to_f64(), 1.0);
    }

    #[test]
    fn sqrt_and_exp_identities() {
        let two = DoubleDouble::from(2.0);
        let r = two.sqrt();
        assert!(close(r * r, two, 1e-31));
        for x in [-30.0, -3.7, -0.2, 0.0, 0.5, 1.0, 12.3] {
            let e = DoubleDouble::from(x).exp();
            let back = DoubleDouble::from(-x).exp();
            assert!(close(e * back, DoubleDouble::ONE, 1e-30), "x = {x}");
            assert!((e.to_f64() - x.exp()).abs() <= 4.0 * f64::EPSILON * x.exp());
        }
        assert!(close(LN_2.exp(), two, 1e-31));
    }

    #[test]
    fn integers_convert_exactly() {
        let n: u128 = 15_511_210_043_330_985_984_000_000; // 25!
        let d = DoubleDouble::from_u128(n);
        let back = d.hi as i128 + d.lo as i128;
        assert_eq!(back as u128, n);
    }
}
