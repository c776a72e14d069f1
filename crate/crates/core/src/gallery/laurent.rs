use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Laurent polynomial in `t` with exact rational coefficients; zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    pub fn monomial(c: BigRational, exp: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    /// `Σ c t^e` over integer pairs `(e, c)`.
    pub fn from_pairs(pairs: &[(i32, i64)]) -> Self {
        let mut p = Self::zero();
        for &(e, c) in pairs {
            p.add_term(e, BigRational::from_integer(BigInt::from(c)));
        }
        p
    }

    fn add_term(&mut self, exp: i32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> BigRational {
        self.terms.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Lowest and highest exponents, or `None` for zero.
    pub fn exponent_range(&self) -> Option<(i32, i32)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (&e, c) in &self.terms {
            if e != 0 {
                out.add_term(e - 1, c * BigRational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Exact value at a nonzero rational `t`.
    pub fn eval_exact(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (&e, c) in &self.terms {
            acc += c * t.pow(e);
        }
        acc
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * t.powi(*e)).sum()
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&e, c)) in self.terms.iter().enumerate() {
            let sep = match (i, c.is_negative()) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let mag = c.abs();
            match e {
                0 => write!(f, "{sep}{mag}")?,
                1 => write!(f, "{sep}{mag}*t")?,
                _ => write!(f, "{sep}{mag}*t^{e}")?,
            }
        }
        Ok(())
    }
}

/// `ln|q|` for a nonzero rational of any size.
pub(crate) fn ln_abs(q: &BigRational) -> f64 {
    fn ln_int(n: &BigInt) -> f64 {
        let m = n.magnitude();
        let bits = m.bits();
        if bits <= 1000 {
            m.to_f64().unwrap_or(f64::INFINITY).ln()
        } else {
            let shift = bits - 64;
            (m >> shift).to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
    ln_int(q.numer()) - ln_int(q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_negative_powers() {
        let p = LaurentPoly::from_pairs(&[(-3, 2), (0, 5)]);
        assert_eq!(p.derivative(), LaurentPoly::from_pairs(&[(-4, -6)]));
    }

    #[test]
    fn exact_evaluation() {
        let p = LaurentPoly::from_pairs(&[(-2, 1), (1, 3)]);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(p.eval_exact(&half), BigRational::new(BigInt::from(11), BigInt::from(2)));
        assert!((p.eval(0.5) - 5.5).abs() < 1e-15);
        assert_eq!(p.to_string(), "1*t^-2 + 3*t");
    }

    #[test]
    fn product_cancels_to_zero() {
        let a = LaurentPoly::from_pairs(&[(-1, 1), (1, 1)]);
        let b = LaurentPoly::from_pairs(&[(-1, 1), (1, -1)]);
        assert_eq!(&a * &b, LaurentPoly::from_pairs(&[(-2, 1), (2, -1)]));
        assert!((&a + &LaurentPoly::from_pairs(&[(-1, -1), (1, -1)])).is_zero());
    }

    #[test]
    fn log_of_huge_rationals() {
        let big = BigRational::from_integer(BigInt::from(10).pow(400u32));
        assert!((ln_abs(&big) - 400.0 * 10f64.ln()).abs() < 1e-9);
        let small = BigRational::new(BigInt::from(-3), BigInt::from(10).pow(500u32));
        assert!((ln_abs(&small) - (3f64.ln() - 500.0 * 10f64.ln())).abs() < 1e-9);
    }
}
