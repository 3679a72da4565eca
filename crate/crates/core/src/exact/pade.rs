use num_traits::{One, Zero};

use super::matrix::{solve_linear, Matrix};
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::rational::Rational;
use super::series::Series;
use crate::error::{Error, Result};

/// Padé approximant `P/Q` with `deg P ≤ num_degree`, `deg Q ≤ den_degree`, `Q(0) = 1`.
///
/// The denominator comes from the exact linear system for the coefficients of
/// `Q` (free variables, if any, are set to zero), the numerator from the
/// truncated product `s·Q`. The result is reduced and must reproduce `s`
/// through degree `num_degree + den_degree`; otherwise no approximant exists
/// at these degrees.
pub fn pade(s: &Series, num_degree: usize, den_degree: usize) -> Result<RatFunc> {
    let window = num_degree + den_degree;
    if s.order() < window {
        return Err(Error::Precondition(format!(
            "series of order {} is too short for Padé degrees ({num_degree}, {den_degree})",
            s.order()
        )));
    }
    let c = |k: isize| -> Rational {
        if k < 0 {
            Rational::zero()
        } else {
            s.coeff(k as usize).clone()
        }
    };
    let no_approximant = || Error::NoApproximant {
        num_degree,
        den_degree,
    };

    // Σ_{j=1}^{dd} c_{k-j} q_j = -c_k for k = dn+1 ..= dn+dd.
    let a = Matrix::from_fn(den_degree, den_degree, |r, j| {
        c((num_degree + 1 + r) as isize - (j + 1) as isize)
    });
    let b: Vec<Rational> = (0..den_degree)
        .map(|r| -c((num_degree + 1 + r) as isize))
        .collect();
    let q_tail = solve_linear(&a, &b).ok_or_else(no_approximant)?;
    let mut q = vec![Rational::one()];
    q.extend(q_tail);
    let q = Poly::new(q);

    let p = Poly::new(
        (0..=num_degree)
            .map(|i| {
                (0..=i.min(den_degree))
                    .map(|j| q.coeff(j) * c((i - j) as isize))
                    .sum()
            })
            .collect(),
    );
    let r = RatFunc::new(p, q)?;
    if r.denominator().coeff(0).is_zero() {
        return Err(no_approximant());
    }
    let check = r.to_series(window)?;
    if check.first_mismatch(&s.truncate(window)).is_some() {
        return Err(no_approximant());
    }
    Ok(r)
}
