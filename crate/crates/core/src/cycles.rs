//! Closed paths and prime cycles of nonzero weight, found by direct search.
//!
//! Paths of length `m` only ever leave the core by at most `m/2` ray steps, so
//! every search runs on the truncation of depth `m + 1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Poly, Rational, Series};
use crate::graph::{truncate, CuspidalGraph, EdgeRef, Truncation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedPath {
    pub edges: Vec<String>,
    pub weight: u128,
}

impl ClosedPath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// A rotation class of closed paths, `c = c₀^multiplicity`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeCycleClass {
    /// Least rotation under the graph's edge order.
    pub representative: Vec<String>,
    #[serde(skip)]
    pub edge_refs: Vec<EdgeRef>,
    pub length: usize,
    pub weight: u128,
    pub is_prime: bool,
    pub multiplicity: usize,
    pub prime_length: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CycleCensus {
    pub max_len: usize,
    /// Every cycle class of length `≤ max_len`, primes and proper powers alike,
    /// ordered by length and then representative.
    pub cycles: Vec<PrimeCycleClass>,
}

impl CycleCensus {
    pub fn primes(&self) -> impl Iterator<Item = &PrimeCycleClass> {
        self.cycles.iter().filter(|c| c.is_prime)
    }

    /// `(length, weight, is_prime) → count`
    pub fn grouped(&self) -> BTreeMap<(usize, u128, bool), usize> {
        let mut g = BTreeMap::new();
        for c in &self.cycles {
            *g.entry((c.length, c.weight, c.is_prime)).or_insert(0) += 1;
        }
        g
    }

    /// Text export: a header line, then `length weight count is_prime` rows.
    pub fn to_lines(&self) -> Vec<String> {
        let mut out = vec![format!("# complete through max_len {}", self.max_len)];
        out.extend(
            self.grouped()
                .into_iter()
                .map(|((l, w, p), n)| format!("{l} {w} {n} {p}")),
        );
        out
    }

    fn check_range(&self, m: usize) -> Result<()> {
        if m > self.max_len {
            return Err(Error::Range {
                what: "cycle length",
                value: m,
                max: self.max_len,
            });
        }
        Ok(())
    }
}

fn path_weight(t: &Truncation, path: &[usize]) -> u128 {
    let n = path.len();
    (0..n)
        .map(|j| t.step_weight(path[j], path[(j + 1) % n]) as u128)
        .try_fold(1u128, |acc, w| acc.checked_mul(w))
        .expect("cycle weight exceeds 128 bits")
}

/// Depth-first search for closed paths of exactly `length` edges starting at
/// `start`, using only edges at positions `≥ floor`.
fn closed_from(
    succ: &[Vec<(usize, u64)>],
    start: usize,
    floor: usize,
    length: usize,
    out: &mut Vec<Vec<usize>>,
) {
    fn go(
        succ: &[Vec<(usize, u64)>],
        start: usize,
        floor: usize,
        length: usize,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let last = *path.last().expect("path starts nonempty");
        if path.len() == length {
            if succ[last].iter().any(|&(j, _)| j == start) {
                out.push(path.clone());
            }
            return;
        }
        for &(j, _) in &succ[last] {
            if j >= floor {
                path.push(j);
                go(succ, start, floor, length, path, out);
                path.pop();
            }
        }
    }
    let mut path = vec![start];
    go(succ, start, floor, length, &mut path, out);
}

/// Every closed path of exactly `length` edges with nonzero weight. Rotations
/// count as distinct paths.
pub fn enumerate_closed_paths(g: &CuspidalGraph, length: usize) -> Vec<ClosedPath> {
    if length == 0 {
        return Vec::new();
    }
    let t = truncate(g, length + 1);
    let succ = t.successors();
    let paths: Vec<Vec<usize>> = (0..t.num_edges())
        .into_par_iter()
        .flat_map_iter(|s| {
            let mut out = Vec::new();
            closed_from(&succ, s, 0, length, &mut out);
            out
        })
        .collect();
    paths
        .iter()
        .map(|p| ClosedPath {
            edges: p.iter().map(|&i| t.edges[i].id.clone()).collect(),
            weight: path_weight(&t, p),
        })
        .collect()
}

fn least_rotation(p: &[usize]) -> Vec<usize> {
    (0..p.len())
        .map(|k| [&p[k..], &p[..k]].concat())
        .min()
        .unwrap_or_default()
}

fn primitive_period(p: &[usize]) -> usize {
    let n = p.len();
    (1..=n)
        .find(|&d| n.is_multiple_of(d) && (0..n).all(|i| p[i] == p[(i + d) % n]))
        .unwrap_or(n)
}

/// All cycle classes of length `1..=max_len`.
pub fn cycle_census(g: &CuspidalGraph, max_len: usize) -> CycleCensus {
    let t = truncate(g, max_len + 1);
    let succ = t.successors();
    let jobs: Vec<(usize, usize)> = (1..=max_len)
        .flat_map(|l| (0..t.num_edges()).map(move |s| (l, s)))
        .collect();
    // A class is found from its least edge; keep only the least rotation.
    let reps: Vec<Vec<usize>> = jobs
        .into_par_iter()
        .flat_map_iter(|(l, s)| {
            let mut out = Vec::new();
            closed_from(&succ, s, s, l, &mut out);
            out.into_iter().filter(|p| least_rotation(p) == *p)
        })
        .collect();
    let mut cycles: Vec<PrimeCycleClass> = reps
        .iter()
        .map(|p| {
            let period = primitive_period(p);
            PrimeCycleClass {
                representative: p.iter().map(|&i| t.edges[i].id.clone()).collect(),
                edge_refs: p.iter().map(|&i| t.edges[i].edge).collect(),
                length: p.len(),
                weight: path_weight(&t, p),
                is_prime: period == p.len(),
                multiplicity: p.len() / period,
                prime_length: period,
            }
        })
        .collect();
    cycles.sort_by(|a, b| {
        a.length
            .cmp(&b.length)
            .then_with(|| ordinals(g, a).cmp(&ordinals(g, b)))
    });
    CycleCensus { max_len, cycles }
}

fn ordinals(g: &CuspidalGraph, c: &PrimeCycleClass) -> Vec<usize> {
    c.edge_refs.iter().map(|&e| g.edge_ordinal(e)).collect()
}

/// `N_m = Σ w(c)·l(c₀)` over cycles of length `m`.
pub fn n_via_cycles(census: &CycleCensus, m: usize) -> Result<BigInt> {
    let (p, r) = primitive_split(census, m)?;
    Ok(p + r)
}

/// `N_m` split into prime cycles and proper powers.
pub fn primitive_split(census: &CycleCensus, m: usize) -> Result<(BigInt, BigInt)> {
    census.check_range(m)?;
    let mut prim = BigInt::from(0);
    let mut rest = BigInt::from(0);
    for c in census.cycles.iter().filter(|c| c.length == m) {
        let term = BigInt::from(c.weight) * BigInt::from(c.prime_length);
        if c.is_prime {
            prim += term;
        } else {
            rest += term;
        }
    }
    Ok((prim, rest))
}

/// `Π (1 − w(c₀)u^{l(c₀)})` over prime cycles, truncated at `degree`.
pub fn euler_product_series(census: &CycleCensus, degree: usize) -> Result<Series> {
    census.check_range(degree)?;
    let mut acc = Series::one(degree);
    for c in census.primes().filter(|c| c.length <= degree) {
        let f = Poly::one_minus(Rational::from(BigInt::from(c.weight)), c.length);
        acc = &acc * &Series::from_poly(&f, degree);
    }
    Ok(acc)
}

/// Whether every prime's powers up to `max_len` are listed with weight `w(c₀)^k`.
pub fn power_law_holds(census: &CycleCensus) -> bool {
    census.primes().all(|c| {
        (2..=census.max_len / c.length).all(|k| {
            let rep: Vec<String> = c
                .representative
                .iter()
                .cycle()
                .take(k * c.length)
                .cloned()
                .collect();
            census.cycles.iter().any(|d| {
                d.length == k * c.length
                    && d.multiplicity == k
                    && d.weight == c.weight.pow(k as u32)
                    && same_rotation_class(&d.representative, &rep)
            })
        })
    })
}

fn same_rotation_class(a: &[String], b: &[String]) -> bool {
    a.len() == b.len() && (0..a.len()).any(|k| a[k..].iter().chain(&a[..k]).eq(b.iter()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, nagao, single_edge_pair, GraphBuilder};

    #[test]
    fn nagao_short_paths() {
        let g = nagao(&[2], None).unwrap();
        let p = enumerate_closed_paths(&g, 2);
        assert_eq!(p.len(), 2);
        assert!(p.iter().all(|x| x.weight == 2));
        assert!(enumerate_closed_paths(&g, 3).is_empty());
        assert!(enumerate_closed_paths(&single_edge_pair(), 2).is_empty());
    }

    #[test]
    fn nagao_census() {
        let g = nagao(&[2], None).unwrap();
        let c = cycle_census(&g, 4);
        let primes: Vec<_> = c.primes().map(|p| (p.length, p.weight)).collect();
        assert_eq!(primes, vec![(2, 2), (4, 4)]);
        assert_eq!(n_via_cycles(&c, 2).unwrap(), BigInt::from(4));
        assert_eq!(n_via_cycles(&c, 3).unwrap(), BigInt::from(0));
        assert_eq!(n_via_cycles(&c, 4).unwrap(), BigInt::from(24));
        assert_eq!(
            primitive_split(&c, 4).unwrap(),
            (BigInt::from(16), BigInt::from(8))
        );
        assert_eq!(
            primitive_split(&c, 2).unwrap(),
            (BigInt::from(4), BigInt::from(0))
        );
        assert!(n_via_cycles(&c, 5).is_err());
        let s = euler_product_series(&c, 4).unwrap();
        assert_eq!(
            s,
            Series::from_poly(&Poly::from_ints(&[1, 0, -2, 0, -4]), 4)
        );
        assert!(power_law_holds(&c));
    }

    #[test]
    fn k4_triangles() {
        let c = cycle_census(&complete(4), 3);
        assert_eq!(c.primes().count(), 8);
        assert!(c.primes().all(|p| p.length == 3 && p.weight == 1));
        let s = euler_product_series(&c, 3).unwrap();
        assert_eq!(s, Series::from_poly(&Poly::from_ints(&[1, 0, 0, -8]), 3));
        assert_eq!(
            c.to_lines(),
            vec!["# complete through max_len 3", "3 1 8 true"]
        );
    }

    #[test]
    fn trees_have_no_cycles() {
        let g = GraphBuilder::new()
            .vertex("a")
            .vertex("b")
            .vertex("c")
            .pair("ab", "a", "b", 1, 1)
            .pair("bc", "b", "c", 1, 1)
            .build()
            .unwrap();
        let c = cycle_census(&g, 6);
        assert!(c.cycles.is_empty());
        assert_eq!(euler_product_series(&c, 6).unwrap(), Series::one(6));
    }

    #[test]
    fn closed_path_count_recursion() {
        let g = nagao(&[2], None).unwrap();
        for n in 1..=5 {
            assert_eq!(enumerate_closed_paths(&g, 2 * n).len(), (1 << (n + 1)) - 2);
        }
    }
}
