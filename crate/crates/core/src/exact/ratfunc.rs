use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::Poly;
use super::rational::Rational;
use super::series::Series;
use crate::error::{Error, Result};

/// A reduced quotient of polynomials.
///
/// Canonical form: numerator and denominator are coprime; the denominator is
/// scaled so that `den(0) = 1` when `den(0) ≠ 0`, otherwise it is monic. Two
/// equal rational functions therefore compare equal structurally.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRatFunc")]
pub struct RatFunc {
    numerator: Poly,
    denominator: Poly,
}

#[derive(Deserialize)]
struct RawRatFunc {
    numerator: Poly,
    denominator: Poly,
}

impl TryFrom<RawRatFunc> for RatFunc {
    type Error = Error;
    fn try_from(r: RawRatFunc) -> Result<Self> {
        RatFunc::new(r.numerator, r.denominator)
    }
}

impl RatFunc {
    pub fn new(numerator: Poly, denominator: Poly) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::Precondition("zero denominator".into()));
        }
        if numerator.is_zero() {
            return Ok(RatFunc::zero());
        }
        let g = Poly::gcd(&numerator, &denominator);
        let mut num = numerator.div_exact(&g)?;
        let mut den = denominator.div_exact(&g)?;
        let c0 = den.coeff(0);
        let norm = if c0.is_zero() {
            den.leading().cloned().expect("nonzero")
        } else {
            c0
        };
        let inv = Rational::one() / norm;
        num = num.scale(&inv);
        den = den.scale(&inv);
        Ok(RatFunc {
            numerator: num,
            denominator: den,
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc::new(p, Poly::one()).expect("unit denominator")
    }

    pub fn zero() -> Self {
        RatFunc {
            numerator: Poly::zero(),
            denominator: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn eval(&self, u: &Rational) -> Option<Rational> {
        let d = self.denominator.eval(u);
        if d.is_zero() {
            None
        } else {
            Some(self.numerator.eval(u) / d)
        }
    }

    pub fn to_series(&self, order: usize) -> Result<Series> {
        let den = Series::from_poly(&self.denominator, order).recip()?;
        Ok(&Series::from_poly(&self.numerator, order) * &den)
    }

    pub fn recip(&self) -> Result<Self> {
        RatFunc::new(self.denominator.clone(), self.numerator.clone())
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs();
        RatFunc::new(base.numerator.pow(k), base.denominator.pow(k))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        let n = &(&self.numerator * &o.denominator) + &(&o.numerator * &self.denominator);
        RatFunc::new(n, &self.denominator * &o.denominator).expect("nonzero")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        let n = &(&self.numerator * &o.denominator) - &(&o.numerator * &self.denominator);
        RatFunc::new(n, &self.denominator * &o.denominator).expect("nonzero")
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        RatFunc::new(
            &self.numerator * &o.numerator,
            &self.denominator * &o.denominator,
        )
        .expect("nonzero")
    }
}

impl Div for &RatFunc {
    type Output = Result<RatFunc>;
    fn div(self, o: &RatFunc) -> Result<RatFunc> {
        RatFunc::new(
            &self.numerator * &o.denominator,
            &self.denominator * &o.numerator,
        )
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == Poly::one() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / ({})", self.numerator, self.denominator)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    #[test]
    fn reduces_common_factors() {
        let r = RatFunc::new(
            &Poly::from_ints(&[1, -1]) * &Poly::from_ints(&[1, 2]),
            &Poly::from_ints(&[2, -2]) * &Poly::from_ints(&[1, 3]),
        )
        .unwrap();
        assert_eq!(r.denominator(), &Poly::from_ints(&[1, 3]));
        assert_eq!(r.numerator(), &Poly::new(vec![rat(1, 2), int(1)]));
    }

    #[test]
    fn canonical_equality() {
        let a = RatFunc::new(Poly::from_ints(&[2, 0, -8]), Poly::from_ints(&[2, 0, -4])).unwrap();
        let b = RatFunc::new(Poly::from_ints(&[1, 0, -4]), Poly::from_ints(&[1, 0, -2])).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.eval(&rat(1, 10)), Some(rat(48, 49)));
    }

    #[test]
    fn arithmetic_round_trips() {
        let a = RatFunc::new(Poly::from_ints(&[1, 1]), Poly::from_ints(&[1, -2])).unwrap();
        let b = RatFunc::new(Poly::from_ints(&[3]), Poly::from_ints(&[1, 0, 1])).unwrap();
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!((&(&a * &b) / &b).unwrap(), a);
        assert_eq!(a.powi(-2).unwrap(), (&RatFunc::one() / &(&a * &a)).unwrap());
        assert!(RatFunc::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn series_expansion() {
        let r = RatFunc::new(Poly::from_ints(&[1, 0, -4]), Poly::from_ints(&[1, 0, -2])).unwrap();
        let s = r.to_series(8).unwrap();
        assert_eq!(
            s,
            Series::from_poly(&Poly::from_ints(&[1, 0, -2, 0, -4, 0, -8, 0, -16]), 8)
        );
    }

    #[test]
    fn serde_shape() {
        let r = RatFunc::new(Poly::from_ints(&[1, 0, -4]), Poly::from_ints(&[1, 0, -2])).unwrap();
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["numerator"], serde_json::json!(["1", "0", "-4"]));
        let back: RatFunc = serde_json::from_value(j).unwrap();
        assert_eq!(back, r);
    }
}
