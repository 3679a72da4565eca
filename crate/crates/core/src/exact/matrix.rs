//! Dense exact matrices: fraction-free determinants over integral domains,
//! characteristic polynomials over the rationals, and exact linear solves.

use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// The operations fraction-free elimination needs from an integral domain.
pub trait ExactRing: Clone + PartialEq {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn ring_is_zero(&self) -> bool;
    fn mul(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Division known to be exact.
    fn div_exact(&self, o: &Self) -> Self;
}

impl ExactRing for Rational {
    fn ring_zero() -> Self {
        Zero::zero()
    }
    fn ring_one() -> Self {
        One::one()
    }
    fn ring_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
}

impl ExactRing for Poly {
    fn ring_zero() -> Self {
        Poly::zero()
    }
    fn ring_one() -> Self {
        Poly::one()
    }
    fn ring_is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Self {
        Poly::div_exact(self, o).expect("Bareiss quotients are exact")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

impl<T: ExactRing> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| {
            if r == c {
                T::ring_one()
            } else {
                T::ring_zero()
            }
        })
    }

    /// Determinant by Bareiss fraction-free elimination with row pivoting.
    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::ring_one());
        }
        let mut m = self.clone();
        let mut negate = false;
        let mut prev = T::ring_one();
        for k in 0..n - 1 {
            if m[(k, k)].ring_is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].ring_is_zero()) {
                    Some(p) => {
                        m.swap_rows(k, p);
                        negate = !negate;
                    }
                    None => return Ok(T::ring_zero()),
                }
            }
            let pivot = m[(k, k)].clone();
            for i in k + 1..n {
                let lead = m[(i, k)].clone();
                for j in k + 1..n {
                    let v = m[(i, j)].mul(&pivot).sub(&lead.mul(&m[(k, j)]));
                    m[(i, j)] = v.div_exact(&prev);
                }
                m[(i, k)] = T::ring_zero();
            }
            prev = pivot;
        }
        let d = m[(n - 1, n - 1)].clone();
        Ok(if negate { d.neg() } else { d })
    }
}

impl Matrix<Rational> {
    pub fn mul(&self, o: &Matrix<Rational>) -> Result<Matrix<Rational>> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, o.cols, |r, c| {
            let mut acc = Rational::zero();
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if !a.is_zero() {
                    acc += a * &o[(k, c)];
                }
            }
            acc
        }))
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .sum()
    }

    /// `det(xI - A)` via similarity reduction to upper Hessenberg form.
    pub fn charpoly(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::Dimension(
                "characteristic polynomial of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(p) = (j + 1..n).find(|&i| !h[(i, j)].is_zero()) else {
                continue;
            };
            h.swap_rows(p, j + 1);
            h.swap_cols(p, j + 1);
            let piv = h[(j + 1, j)].clone();
            for i in j + 2..n {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let f = &h[(i, j)] / &piv;
                for c in 0..n {
                    let v = &f * &h[(j + 1, c)];
                    h[(i, c)] -= v;
                }
                for r in 0..n {
                    let v = &f * &h[(r, i)];
                    h[(r, j + 1)] += v;
                }
            }
        }
        // 1-indexed recurrence on the leading principal blocks of H.
        let at = |i: usize, j: usize| &h[(i - 1, j - 1)];
        let x = Poly::monomial(Rational::one(), 1);
        let mut p: Vec<Poly> = vec![Poly::one()];
        for k in 1..=n {
            let mut pk = &(&x - &Poly::constant(at(k, k).clone())) * &p[k - 1];
            let mut prod = Rational::one();
            for i in (1..k).rev() {
                prod *= at(i + 1, i);
                if prod.is_zero() {
                    break;
                }
                let c = at(i, k) * &prod;
                if !c.is_zero() {
                    pk = &pk - &p[i - 1].scale(&c);
                }
            }
            p.push(pk);
        }
        Ok(p.pop().expect("nonempty"))
    }

    /// `det(1 - uA)`, the reversed characteristic polynomial.
    pub fn det_one_minus_u(&self) -> Result<Poly> {
        Ok(self.charpoly()?.reversed(self.rows))
    }
}

/// Solves `A x = b` exactly. Free variables are set to zero; `None` when inconsistent.
pub fn solve_linear(a: &Matrix<Rational>, b: &[Rational]) -> Option<Vec<Rational>> {
    let (rows, cols) = (a.rows(), a.cols());
    assert_eq!(rows, b.len());
    let mut m = Matrix::from_fn(rows, cols + 1, |r, c| {
        if c < cols {
            a[(r, c)].clone()
        } else {
            b[r].clone()
        }
    });
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[(r, col)].is_zero()) else {
            continue;
        };
        m.swap_rows(row, p);
        let inv = Rational::one() / &m[(row, col)];
        for c in col..=cols {
            m[(row, c)] *= &inv;
        }
        for r in 0..rows {
            if r != row && !m[(r, col)].is_zero() {
                let f = m[(r, col)].clone();
                for c in col..=cols {
                    let v = &f * &m[(row, c)];
                    m[(r, c)] -= v;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    if (row..rows).any(|r| !m[(r, cols)].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[(r, cols)].clone();
    }
    Some(x)
}

/// Exact determinant of a square matrix with polynomial entries.
pub fn det_exact(m: &Matrix<Poly>) -> Result<Poly> {
    m.det()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};
    use proptest::prelude::*;

    fn ints(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    /// Leibniz expansion: independent oracle for the elimination routes.
    fn permutation_det<T: ExactRing>(m: &Matrix<T>) -> T {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.rows();
        let mut acc = T::ring_zero();
        for p in perms(n) {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let mut term = T::ring_one();
            for (r, &c) in p.iter().enumerate() {
                term = term.mul(&m[(r, c)]);
            }
            acc = if inversions % 2 == 0 {
                acc.sub(&term.neg())
            } else {
                acc.sub(&term)
            };
        }
        acc
    }

    #[test]
    fn identity_and_diagonal() {
        let id: Matrix<Poly> = Matrix::identity(3);
        assert_eq!(det_exact(&id).unwrap(), Poly::one());
        let d = Matrix::from_rows(vec![
            vec![Poly::from_ints(&[1, -1]), Poly::zero()],
            vec![Poly::zero(), Poly::from_ints(&[1, 1])],
        ])
        .unwrap();
        assert_eq!(det_exact(&d).unwrap(), Poly::from_ints(&[1, 0, -1]));
    }

    #[test]
    fn non_square_is_rejected() {
        let m: Matrix<Poly> = Matrix::from_fn(2, 3, |_, _| Poly::one());
        assert!(matches!(det_exact(&m), Err(Error::Dimension(_))));
    }

    #[test]
    fn needs_pivoting() {
        let m = ints(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(m.det().unwrap(), int(-2));
        assert_eq!(permutation_det(&m), int(-2));
    }

    #[test]
    fn charpoly_small() {
        let m = ints(&[&[2, 1], &[1, 2]]);
        assert_eq!(m.charpoly().unwrap(), Poly::from_ints(&[3, -4, 1]));
        assert_eq!(m.det_one_minus_u().unwrap(), Poly::from_ints(&[1, -4, 3]));
        let empty = Matrix::<Rational>::from_fn(0, 0, |_, _| int(0));
        assert_eq!(empty.det_one_minus_u().unwrap(), Poly::one());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = ints(&[&[1, 2], &[2, 4]]);
        assert_eq!(
            solve_linear(&a, &[int(3), int(6)]),
            Some(vec![int(3), int(0)])
        );
        assert_eq!(solve_linear(&a, &[int(3), int(7)]), None);
        let b = ints(&[&[2, 1], &[1, 3]]);
        assert_eq!(
            solve_linear(&b, &[int(1), int(2)]),
            Some(vec![rat(1, 5), rat(3, 5)])
        );
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = Matrix<Rational>> {
        proptest::collection::vec((-4i64..5, 1i64..3), n * n).prop_map(move |v| {
            Matrix::from_fn(n, n, |r, c| {
                let (p, q) = v[r * n + c];
                rat(p, q)
            })
        })
    }

    fn poly_matrix(n: usize) -> impl Strategy<Value = Matrix<Poly>> {
        proptest::collection::vec(proptest::collection::vec(-3i64..4, 0..3), n * n)
            .prop_map(move |v| Matrix::from_fn(n, n, |r, c| Poly::from_ints(&v[r * n + c])))
    }

    proptest! {
        #[test]
        fn det_is_multiplicative((a, b) in (1usize..6).prop_flat_map(|n| (small_matrix(n), small_matrix(n)))) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
        }

        #[test]
        fn bareiss_matches_permutation_expansion(m in (1usize..6).prop_flat_map(small_matrix)) {
            prop_assert_eq!(m.det().unwrap(), permutation_det(&m));
        }

        #[test]
        fn polynomial_bareiss_matches_permutation_expansion(m in (1usize..5).prop_flat_map(poly_matrix)) {
            prop_assert_eq!(det_exact(&m).unwrap(), permutation_det(&m));
        }

        #[test]
        fn charpoly_matches_polynomial_determinant(m in (1usize..6).prop_flat_map(small_matrix)) {
            let n = m.rows();
            let xi_minus_a = Matrix::from_fn(n, n, |r, c| {
                let x = if r == c { Poly::from_ints(&[0, 1]) } else { Poly::zero() };
                &x - &Poly::constant(m[(r, c)].clone())
            });
            prop_assert_eq!(m.charpoly().unwrap(), det_exact(&xi_minus_a).unwrap());
        }
    }
}
