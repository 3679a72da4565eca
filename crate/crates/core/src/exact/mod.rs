//! Exact arithmetic kernel: rationals, polynomials, rational functions,
//! truncated power series, Padé approximants and exact determinants.
//!
//! Nothing in here touches floating point.

pub mod matrix;
pub mod pade;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod series;

pub use matrix::{det_exact, solve_linear, ExactRing, Matrix};
pub use pade::pade;
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use rational::{format_rational, int, parse_rational, rat, Rational};
pub use series::{series_exp, series_log, Series};

/// Coefficients `N_1..N_M` of `-u r'(u)/r(u)` for a rational function with `r(0) = 1`.
pub fn logderiv_counts(r: &RatFunc, m: usize) -> crate::Result<Vec<Rational>> {
    use num_traits::One;
    let at0 = r.eval(&Rational::from_integer(0.into()));
    if !at0.as_ref().is_some_and(One::is_one) {
        return Err(crate::Error::Precondition(
            "logderiv_counts needs r(0) = 1".into(),
        ));
    }
    r.to_series(m)?.log_derivative_counts()
}
