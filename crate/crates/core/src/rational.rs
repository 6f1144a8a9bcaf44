//! Reduced fractions over `i128`.
//!
//! A single rational type serves the whole crate: Gauss-sum parameters a/q,
//! the exact rational part of reduced phases, exponent arithmetic, and the
//! exact correction s with y₁ + s = 2π a₁/q.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A reduced fraction num/den with den ≥ 1 and gcd(|num|, den) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rational {
    num: i128,
    den: i128,
}

impl Rational {
    pub fn new(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::invalid("rational denominator must be nonzero"));
        }
        let sign = if den < 0 { -1 } else { 1 };
        let (mut num, mut den) = (num * sign, den * sign);
        let g = gcd_i128(num, den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        Ok(Rational { num, den })
    }

    pub fn integer(n: i128) -> Self {
        Rational { num: n, den: 1 }
    }

    pub fn zero() -> Self {
        Rational { num: 0, den: 1 }
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Exact dyadic decomposition of a finite f64. Fails when the value needs
    /// more than 127 bits of shift (never the case for the exponents in play).
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::invalid("non-finite float"));
        }
        if x == 0.0 {
            return Ok(Rational::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i128 } else { 1i128 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as i128;
        let (mantissa, e2) = if exp == 0 {
            (frac, -1074i64)
        } else {
            (frac | (1i128 << 52), exp - 1075)
        };
        if e2 >= 0 {
            let shifted = mantissa
                .checked_shl(e2 as u32)
                .ok_or_else(|| Error::invalid("float too large for exact rational"))?;
            Rational::new(sign * shifted, 1)
        } else {
            let shift = (-e2) as u32;
            if shift > 126 {
                // Trailing zero bits of the mantissa absorb part of the shift.
                let tz = mantissa.trailing_zeros().min(shift);
                let m = mantissa >> tz;
                let s = shift - tz;
                if s > 126 {
                    return Err(Error::invalid("float exponent too small for i128 rational"));
                }
                Rational::new(sign * m, 1i128 << s)
            } else {
                Rational::new(sign * mantissa, 1i128 << shift)
            }
        }
    }

    pub fn add(&self, other: &Rational) -> Rational {
        let num = self.num * other.den + other.num * self.den;
        let den = self.den * other.den;
        Rational::new(num, den).expect("nonzero den")
    }

    pub fn sub(&self, other: &Rational) -> Rational {
        let num = self.num * other.den - other.num * self.den;
        let den = self.den * other.den;
        Rational::new(num, den).expect("nonzero den")
    }

    pub fn mul(&self, other: &Rational) -> Rational {
        Rational::new(self.num * other.num, self.den * other.den).expect("nonzero den")
    }

    pub fn mul_int(&self, k: i128) -> Rational {
        Rational::new(self.num * k, self.den).expect("nonzero den")
    }

    pub fn div_int(&self, k: i128) -> Result<Rational> {
        Rational::new(self.num, self.den * k)
    }

    /// Fractional part in [0, 1), reduced exactly.
    pub fn mod_one(&self) -> Rational {
        let r = self.num.rem_euclid(self.den);
        Rational::new(r, self.den).expect("nonzero den")
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_on_construction() {
        let r = Rational::new(6, -4).unwrap();
        assert_eq!(r.num(), -3);
        assert_eq!(r.den(), 2);
    }

    #[test]
    fn rejects_zero_denominator() {
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn dyadic_from_f64_is_exact() {
        for &x in &[0.5, 0.25, -0.375, 3.0, 1.0 / 3.0, 0.1] {
            let r = Rational::from_f64(x).unwrap();
            assert_eq!(r.to_f64(), x, "round trip of {x}");
        }
    }

    #[test]
    fn mod_one_handles_negatives() {
        let r = Rational::new(-7, 4).unwrap().mod_one();
        assert_eq!((r.num(), r.den()), (1, 4));
    }

    #[test]
    fn arithmetic() {
        let a = Rational::new(1, 6).unwrap();
        let b = Rational::new(1, 3).unwrap();
        assert_eq!(a.add(&b), Rational::new(1, 2).unwrap());
        assert_eq!(b.sub(&a), a);
        assert_eq!(a.mul_int(3), Rational::new(1, 2).unwrap());
    }
}
