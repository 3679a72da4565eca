//! Truncated power series with exact rational coefficients.
//!
//! A `Series` of order `M` knows its coefficients for degrees `0..=M`. Binary
//! operations truncate to the smaller of the two orders.

use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use super::poly::Poly;
use super::rational::{format_rational, int, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl Series {
    /// Builds a series of order `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least its constant term"
        );
        Series { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series::new(vec![Rational::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    pub fn from_poly(p: &Poly, order: usize) -> Self {
        Series::new((0..=order).map(|k| p.coeff(k)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn truncate(&self, order: usize) -> Self {
        Series::new(self.coeffs[..=order.min(self.order())].to_vec())
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Result<Series> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Precondition(
                "series inverse needs a nonzero constant term".into(),
            ));
        }
        let inv0 = Rational::one() / c0;
        let mut out: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for n in 1..self.coeffs.len() {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &out[n - k];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(Series::new(out))
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Precondition(
                "exp needs a series with zero constant term".into(),
            ));
        }
        let mut e: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        e.push(Rational::one());
        for n in 1..self.coeffs.len() {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += int(k as i64) * &self.coeffs[k] * &e[n - k];
                }
            }
            e.push(acc / int(n as i64));
        }
        Ok(Series::new(e))
    }

    /// Logarithm of a series with constant term one.
    pub fn log(&self) -> Result<Series> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Precondition(
                "log needs a series with constant term 1".into(),
            ));
        }
        let mut l: Vec<Rational> = vec![Rational::zero()];
        for n in 1..self.coeffs.len() {
            let mut acc = int(n as i64) * &self.coeffs[n];
            for (k, lk) in l.iter().enumerate().skip(1) {
                if !lk.is_zero() {
                    acc -= int(k as i64) * lk * &self.coeffs[n - k];
                }
            }
            l.push(acc / int(n as i64));
        }
        Ok(Series::new(l))
    }

    /// `exp(-Σ_{m=1}^{M} N_m u^m / m)`: the inverse zeta series of a trace sequence.
    pub fn from_traces<I>(traces: I, order: usize) -> Series
    where
        I: IntoIterator<Item = Rational>,
    {
        let mut s = Series::zero(order);
        for (i, t) in traces.into_iter().take(order).enumerate() {
            let m = i + 1;
            s.coeffs[m] = -t / int(m as i64);
        }
        s.exp().expect("constant term is zero")
    }

    /// Coefficients `N_1..N_M` of `-u s'(u)/s(u)` for `s(0) = 1`.
    pub fn log_derivative_counts(&self) -> Result<Vec<Rational>> {
        let l = self.log()?;
        Ok((1..=self.order())
            .map(|m| -(int(m as i64) * &l.coeffs[m]))
            .collect())
    }

    /// Index of the first coefficient where the two series differ, up to the common order.
    pub fn first_mismatch(&self, other: &Series) -> Option<usize> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, o: &Series) -> Series {
        Series::new(
            self.coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, o: &Series) -> Series {
        Series::new(
            self.coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, o: &Series) -> Series {
        let n = self.order().min(o.order());
        let mut v = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().take(n + 1 - i).enumerate() {
                v[i + j] += a * b;
            }
        }
        Series::new(v)
    }
}

impl Serialize for Series {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(format_rational))
    }
}

/// Companion of [`Series::exp`].
pub fn series_exp(s: &Series) -> Result<Series> {
    s.exp()
}

/// Companion of [`Series::log`].
pub fn series_log(s: &Series) -> Result<Series> {
    s.log()
}
