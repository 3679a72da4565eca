use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::{truncate, CuspidalGraph, EdgeRef, Truncation};
use crate::error::{Error, Result};
use crate::exact::{int, Matrix, Poly, Rational};

/// Sparse integer matrix on oriented edges. `entries[(row, col)]`: the column is
/// the source edge, so `T e = Σ_row entries[(row, e)]·row`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeMatrix {
    pub index: Vec<String>,
    #[serde(serialize_with = "entries_as_list")]
    pub entries: BTreeMap<(usize, usize), i64>,
}

fn entries_as_list<S: serde::Serializer>(
    e: &BTreeMap<(usize, usize), i64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(e.iter().map(|(&(r, c), &v)| (r, c, v)))
}

impl EdgeMatrix {
    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.entries.get(&(row, col)).copied().unwrap_or(0)
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.iter().position(|x| x == id)
    }

    fn set(&mut self, row: usize, col: usize, v: i64) {
        if v == 0 {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), v);
        }
    }

    fn clear_column(&mut self, col: usize) {
        self.entries.retain(|&(_, c), _| c != col);
    }

    /// For each column, its nonzero `(row, value)` pairs.
    pub fn columns(&self) -> Vec<Vec<(usize, i64)>> {
        let mut cols = vec![Vec::new(); self.dim()];
        for (&(r, c), &v) in &self.entries {
            cols[c].push((r, v));
        }
        cols
    }

    pub fn column_sums(&self) -> Vec<i64> {
        let mut s = vec![0; self.dim()];
        for (&(_, c), &v) in &self.entries {
            s[c] += v;
        }
        s
    }

    pub fn to_rational(&self) -> Matrix<Rational> {
        Matrix::from_fn(self.dim(), self.dim(), |r, c| int(self.entry(r, c)))
    }

    /// The polynomial matrix `1 − u·M`.
    pub fn one_minus_u(&self) -> Matrix<Poly> {
        Matrix::from_fn(self.dim(), self.dim(), |r, c| {
            let d = if r == c { 1 } else { 0 };
            Poly::from_ints(&[d, -self.entry(r, c)])
        })
    }

    /// `det(1 − u·M)` as the reversed characteristic polynomial.
    pub fn det_one_minus_u(&self) -> Poly {
        self.to_rational()
            .det_one_minus_u()
            .expect("edge matrices are square")
    }

    /// `Tr(M^m)` for `m = 1..=max`, by iterating `M` on every basis vector.
    pub fn trace_powers(&self, max: usize) -> Vec<BigInt> {
        let cols = self.columns();
        let n = self.dim();
        let mut traces = vec![BigInt::zero(); max];
        for start in 0..n {
            let mut v: Vec<BigInt> = vec![BigInt::zero(); n];
            v[start] = BigInt::from(1);
            for tr in traces.iter_mut() {
                let mut w = vec![BigInt::zero(); n];
                for (c, x) in v.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for &(r, a) in &cols[c] {
                        w[r] += x * a;
                    }
                }
                v = w;
                *tr += &v[start];
            }
        }
        traces
    }

    /// True when the nonzero pattern is strongly connected (the matrix is indecomposable).
    pub fn is_irreducible(&self) -> bool {
        let n = self.dim();
        if n == 0 {
            return false;
        }
        let mut fwd = vec![Vec::new(); n];
        let mut bwd = vec![Vec::new(); n];
        for &(r, c) in self.entries.keys() {
            fwd[c].push(r);
            bwd[r].push(c);
        }
        let reach_all = |adj: &[Vec<usize>]| {
            let mut seen = vec![false; n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach_all(&fwd) && reach_all(&bwd)
    }
}

/// The transfer matrix `T` of a truncation: `entry(e', e) = w(e, e')`.
pub fn transfer_matrix(t: &Truncation) -> EdgeMatrix {
    let mut m = EdgeMatrix {
        index: t.edges.iter().map(|e| e.id.clone()).collect(),
        entries: BTreeMap::new(),
    };
    for (i, succ) in t.successors().iter().enumerate() {
        for &(j, w) in succ {
            m.set(j, i, w as i64);
        }
    }
    m
}

/// Grouped vertex adjacency `A` and valency-minus-one `Q` of a truncation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexMatrix {
    pub index: Vec<String>,
    /// `adjacency[x'][x] = Σ w(f)` over retained `f` with `o(f) = x`, `t(f) = x'`.
    pub adjacency: Vec<Vec<i64>>,
    /// Diagonal of `Q`: retained outgoing weight minus one.
    pub q: Vec<i64>,
}

pub fn vertex_operators(t: &Truncation) -> VertexMatrix {
    let n = t.num_vertices();
    let mut adjacency = vec![vec![0i64; n]; n];
    for e in &t.edges {
        adjacency[e.terminus][e.origin] += e.weight as i64;
    }
    VertexMatrix {
        index: t.vertex_ids.clone(),
        adjacency,
        q: t.boundary_valency.iter().map(|&b| b as i64 - 1).collect(),
    }
}

impl VertexMatrix {
    pub fn dim(&self) -> usize {
        self.index.len()
    }

    /// `1 − uA + u²Q`
    pub fn ihara_matrix(&self) -> Matrix<Poly> {
        Matrix::from_fn(self.dim(), self.dim(), |r, c| {
            let d = if r == c { 1 } else { 0 };
            let q = if r == c { self.q[r] } else { 0 };
            Poly::from_ints(&[d, -self.adjacency[r][c], q])
        })
    }

    /// `1 − uA + u²Q` evaluated at a rational `u`.
    pub fn ihara_at(&self, u: &Rational) -> Matrix<Rational> {
        let u2 = u * u;
        Matrix::from_fn(self.dim(), self.dim(), |r, c| {
            let mut v = -(u * int(self.adjacency[r][c]));
            if r == c {
                v += int(1) + &u2 * int(self.q[r]);
            }
            v
        })
    }
}

/// Transfer matrix of the depth-`N` closure `A_N`.
///
/// Built on the truncation that keeps edges `u_0..u_N`, `d_0..d_N` of every ray;
/// the outermost pair is closed up: `A(u_N) = q·d_N` and
/// `A(d_N) = (q − 1)·d_{N−1} + u_N`, with `q` the cusp's eventual value.
pub fn closure_matrix(g: &CuspidalGraph, depth: usize) -> Result<EdgeMatrix> {
    let mut values = Vec::with_capacity(g.cusps().len());
    for c in g.cusps() {
        let q = c.eventual_value().ok_or_else(|| {
            Error::UnsupportedMethod(format!(
                "closure requires period one (cusp `{}` has period {:?})",
                c.id, c.period
            ))
        })?;
        if depth <= c.preperiod.len() || depth == 0 {
            return Err(Error::Precondition(format!(
                "closure depth {depth} must exceed the preperiod length {} of cusp `{}` and be at least 1",
                c.preperiod.len(),
                c.id
            )));
        }
        values.push(q as i64);
    }
    let t = truncate(g, depth + 1);
    let mut m = transfer_matrix(&t);
    for (cusp, &q) in values.iter().enumerate() {
        let pos = |e: EdgeRef| t.edge_position(e).expect("edge retained at depth N+1");
        let out_n = pos(EdgeRef::Out { cusp, n: depth });
        let in_n = pos(EdgeRef::In { cusp, n: depth });
        let in_prev = pos(EdgeRef::In { cusp, n: depth - 1 });
        m.clear_column(out_n);
        m.set(in_n, out_n, q);
        m.clear_column(in_n);
        m.set(in_prev, in_n, q - 1);
        m.set(out_n, in_n, 1);
    }
    Ok(m)
}
