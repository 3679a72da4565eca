//! L-functions twisted by matrix weights `W(f, f')` along consecutive edges.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycles::CycleCensus;
use crate::error::{Error, Result};
use crate::exact::rational::RationalStr;
use crate::exact::{format_rational, int, Matrix, Poly, RatFunc, Rational, Series};
use crate::graph::{truncate, CuspidalGraph, EdgeRef, Truncation};
use crate::zeta::{stable_pade, PADE_MARGIN};

/// JSON form of a [`BlockAssignment`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockDoc {
    #[serde(default)]
    pub dims: BTreeMap<String, usize>,
    /// Dimension of every edge not listed in `dims`.
    #[serde(default = "one")]
    pub default_dim: usize,
    #[serde(default)]
    pub blocks: Vec<BlockEntryDoc>,
    #[serde(default)]
    pub cusp_rule: bool,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockEntryDoc {
    pub from: String,
    pub to: String,
    pub matrix: Vec<Vec<RationalStr>>,
}

/// Edge dimensions and explicit blocks, checked against a graph.
/// Unlisted consecutive pairs get `w(f, f')·I`.
#[derive(Debug, Clone)]
pub struct BlockAssignment {
    dims: BTreeMap<EdgeRef, usize>,
    default_dim: usize,
    blocks: BTreeMap<(EdgeRef, EdgeRef), Matrix<Rational>>,
    cusp_rule: bool,
}

fn is_ray(e: EdgeRef) -> bool {
    !matches!(e, EdgeRef::Core(_))
}

impl BlockAssignment {
    /// Dimension one everywhere and no explicit blocks.
    pub fn trivial() -> Self {
        BlockAssignment {
            dims: BTreeMap::new(),
            default_dim: 1,
            blocks: BTreeMap::new(),
            cusp_rule: true,
        }
    }

    pub fn from_json(g: &CuspidalGraph, s: &str) -> Result<Self> {
        let doc: BlockDoc = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_doc(g, &doc)
    }

    pub fn from_doc(g: &CuspidalGraph, doc: &BlockDoc) -> Result<Self> {
        if doc.default_dim == 0 {
            return Err(Error::BlockShape("default_dim must be positive".into()));
        }
        if g.has_cusps() && !doc.cusp_rule {
            return Err(Error::CuspRule(
                "graphs with cusps need cusp_rule: true".into(),
            ));
        }
        let mut dims = BTreeMap::new();
        for (id, &d) in &doc.dims {
            let e = g.parse_edge(id)?;
            if d == 0 {
                return Err(Error::BlockShape(format!("edge `{id}` has dimension 0")));
            }
            if is_ray(e) && d != doc.default_dim {
                return Err(Error::CuspRule(format!(
                    "ray edge `{id}` must keep the default dimension {}",
                    doc.default_dim
                )));
            }
            dims.insert(e, d);
        }
        let mut b = BlockAssignment {
            dims,
            default_dim: doc.default_dim,
            blocks: BTreeMap::new(),
            cusp_rule: doc.cusp_rule,
        };
        for entry in &doc.blocks {
            let (f, f2) = (g.parse_edge(&entry.from)?, g.parse_edge(&entry.to)?);
            if g.step_weight(f, f2) == 0 {
                return Err(Error::BlockShape(format!(
                    "`{}` → `{}` is not a consecutive pair of nonzero weight",
                    entry.from, entry.to
                )));
            }
            if b.cusp_rule && is_ray(f) && is_ray(f2) {
                return Err(Error::CuspRule(format!(
                    "explicit block on ray pair `{}` → `{}`",
                    entry.from, entry.to
                )));
            }
            let rows: Vec<Vec<Rational>> = entry
                .matrix
                .iter()
                .map(|r| r.iter().map(|x| x.0.clone()).collect())
                .collect();
            let m = Matrix::from_rows(rows).map_err(|e| Error::BlockShape(e.to_string()))?;
            let (want_r, want_c) = (b.dim(f2), b.dim(f));
            if m.rows() != want_r || m.cols() != want_c {
                return Err(Error::BlockShape(format!(
                    "block `{}` → `{}` is {}x{}, expected {want_r}x{want_c}",
                    entry.from,
                    entry.to,
                    m.rows(),
                    m.cols()
                )));
            }
            if b.blocks.insert((f, f2), m).is_some() {
                return Err(Error::BlockShape(format!(
                    "duplicate block `{}` → `{}`",
                    entry.from, entry.to
                )));
            }
        }
        Ok(b)
    }

    pub fn dim(&self, e: EdgeRef) -> usize {
        self.dims.get(&e).copied().unwrap_or(self.default_dim)
    }

    /// `W(f, f')`, of shape `d_{f'} × d_f`.
    pub fn block(&self, g: &CuspidalGraph, f: EdgeRef, f2: EdgeRef) -> Result<Matrix<Rational>> {
        if let Some(m) = self.blocks.get(&(f, f2)) {
            return Ok(m.clone());
        }
        let (d, d2) = (self.dim(f), self.dim(f2));
        if d != d2 {
            return Err(Error::BlockShape(format!(
                "no block for `{}` → `{}` and dimensions {d} ≠ {d2}",
                g.edge_id(f),
                g.edge_id(f2)
            )));
        }
        let w = int(g.step_weight(f, f2) as i64);
        Ok(Matrix::from_fn(d, d, |r, c| {
            if r == c {
                w.clone()
            } else {
                Rational::zero()
            }
        }))
    }
}

/// Block form of `T_ω` on a truncation.
#[derive(Debug, Clone)]
pub struct BlockMatrix {
    pub index: Vec<(String, usize)>,
    offsets: Vec<usize>,
    /// `(row edge, column edge) → W(column, row)`
    pub entries: BTreeMap<(usize, usize), Matrix<Rational>>,
}

impl BlockMatrix {
    pub fn total_dim(&self) -> usize {
        self.index.iter().map(|(_, d)| d).sum()
    }

    pub fn to_dense(&self) -> Matrix<Rational> {
        let n = self.total_dim();
        let mut m = Matrix::from_fn(n, n, |_, _| Rational::zero());
        for (&(r, c), b) in &self.entries {
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    m[(self.offsets[r] + i, self.offsets[c] + j)] = b[(i, j)].clone();
                }
            }
        }
        m
    }

    /// `Tr(T_ωᵐ)` for `m = 1..=max`.
    pub fn trace_powers(&self, max: usize) -> Vec<Rational> {
        let n = self.total_dim();
        let mut cols: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
        for (&(r, c), b) in &self.entries {
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    if !b[(i, j)].is_zero() {
                        cols[self.offsets[c] + j].push((self.offsets[r] + i, b[(i, j)].clone()));
                    }
                }
            }
        }
        let mut tr = vec![Rational::zero(); max];
        for start in 0..n {
            let mut v = vec![Rational::zero(); n];
            v[start] = Rational::one();
            for t in tr.iter_mut() {
                let mut w = vec![Rational::zero(); n];
                for (c, x) in v.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (r, a) in &cols[c] {
                        w[*r] += x * a;
                    }
                }
                v = w;
                *t += &v[start];
            }
        }
        tr
    }
}

pub fn block_transfer(
    g: &CuspidalGraph,
    t: &Truncation,
    b: &BlockAssignment,
) -> Result<BlockMatrix> {
    let index: Vec<(String, usize)> = t
        .edges
        .iter()
        .map(|e| (e.id.clone(), b.dim(e.edge)))
        .collect();
    let offsets = index
        .iter()
        .scan(0, |acc, (_, d)| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect();
    let mut entries = BTreeMap::new();
    for (i, succ) in t.successors().iter().enumerate() {
        for &(j, _) in succ {
            let blk = b.block(g, t.edges[i].edge, t.edges[j].edge)?;
            entries.insert((j, i), blk);
        }
    }
    Ok(BlockMatrix {
        index,
        offsets,
        entries,
    })
}

/// `Tr(T_ωᵐ)` for `m = 1..=max`, each on the truncation of depth `m + 1`.
pub fn block_traces(g: &CuspidalGraph, b: &BlockAssignment, max: usize) -> Result<Vec<Rational>> {
    (1..=max)
        .into_par_iter()
        .map(|m| {
            let bm = block_transfer(g, &truncate(g, m + 1), b)?;
            Ok(bm.trace_powers(m).pop().expect("m ≥ 1"))
        })
        .collect()
}

/// `L(ω, u)⁻¹` reconstructed from block traces through order `max`.
pub fn lfunction(g: &CuspidalGraph, b: &BlockAssignment, max: usize) -> Result<RatFunc> {
    if g.has_cusps() && !b.cusp_rule {
        return Err(Error::CuspRule("graphs with cusps need cusp_rule".into()));
    }
    let tr = block_traces(g, b, max)?;
    let (r, _) = stable_pade(&Series::from_traces(tr, max), PADE_MARGIN)?;
    Ok(r)
}

/// `W(c) = W(e_n, e_1)·…·W(e_1, e_2)` along a closed path.
pub fn cycle_block(
    g: &CuspidalGraph,
    b: &BlockAssignment,
    path: &[EdgeRef],
) -> Result<Matrix<Rational>> {
    let n = path.len();
    let d = b.dim(path[0]);
    let mut acc = Matrix::identity(d);
    for j in 0..n {
        let w = b.block(g, path[j], path[(j + 1) % n])?;
        acc = w.mul(&acc)?;
    }
    Ok(acc)
}

/// `det(1 − u^l·W(p))` for a closed path of length `l`.
pub fn cycle_factor(g: &CuspidalGraph, b: &BlockAssignment, path: &[EdgeRef]) -> Result<Poly> {
    let w = cycle_block(g, b, path)?;
    Ok(w.det_one_minus_u()?.compose_power(path.len()))
}

/// `Π det(1 − u^{l(c)}W(c))` over prime cycles, truncated at `degree`.
pub fn l_euler_series(
    g: &CuspidalGraph,
    census: &CycleCensus,
    b: &BlockAssignment,
    degree: usize,
) -> Result<Series> {
    if degree > census.max_len {
        return Err(Error::Range {
            what: "Euler product degree",
            value: degree,
            max: census.max_len,
        });
    }
    let mut acc = Series::one(degree);
    for c in census.primes().filter(|c| c.length <= degree) {
        let f = cycle_factor(g, b, &c.edge_refs)?;
        acc = &acc * &Series::from_poly(&f, degree);
    }
    Ok(acc)
}

/// Whether `det(1 − u^l W(p))` is the same for every rotation of every stored
/// representative, listing the offending representatives otherwise.
pub fn rotation_invariance(
    g: &CuspidalGraph,
    census: &CycleCensus,
    b: &BlockAssignment,
) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    for c in &census.cycles {
        let base = cycle_factor(g, b, &c.edge_refs)?;
        for k in 1..c.length {
            let rot: Vec<EdgeRef> = c.edge_refs[k..]
                .iter()
                .chain(&c.edge_refs[..k])
                .copied()
                .collect();
            if cycle_factor(g, b, &rot)? != base {
                bad.push(c.representative.join(","));
                break;
            }
        }
    }
    Ok(bad)
}

/// `Σ_{c: l(c) = n} l(c₀)·tr W(c)` over the census.
pub fn block_trace_via_cycles(
    g: &CuspidalGraph,
    census: &CycleCensus,
    b: &BlockAssignment,
    n: usize,
) -> Result<Rational> {
    let mut acc = Rational::zero();
    for c in census.cycles.iter().filter(|c| c.length == n) {
        acc += int(c.prime_length as i64) * cycle_block(g, b, &c.edge_refs)?.trace();
    }
    Ok(acc)
}

impl BlockAssignment {
    pub fn to_doc(&self, g: &CuspidalGraph) -> BlockDoc {
        BlockDoc {
            dims: self.dims.iter().map(|(&e, &d)| (g.edge_id(e), d)).collect(),
            default_dim: self.default_dim,
            blocks: self
                .blocks
                .iter()
                .map(|(&(f, f2), m)| BlockEntryDoc {
                    from: g.edge_id(f),
                    to: g.edge_id(f2),
                    matrix: (0..m.rows())
                        .map(|r| {
                            (0..m.cols())
                                .map(|c| RationalStr(m[(r, c)].clone()))
                                .collect()
                        })
                        .collect(),
                })
                .collect(),
            cusp_rule: self.cusp_rule,
        }
    }
}

/// Block entries rendered as strings, for reports.
pub fn format_block(m: &Matrix<Rational>) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| format_rational(&m[(r, c)])).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::cycle_census;
    use crate::graph::{cycle, nagao, transfer_matrix};
    use crate::zeta::zeta_via_closure;
    use serde_json::json;

    fn sign_doc() -> serde_json::Value {
        let pairs = [
            ("e0", "e1"),
            ("e1", "e2"),
            ("e2", "e0"),
            ("e1'", "e0'"),
            ("e2'", "e1'"),
            ("e0'", "e2'"),
        ];
        json!({
            "blocks": pairs.iter().map(|(a, b)| json!({"from": a, "to": b, "matrix": [["-1"]]})).collect::<Vec<_>>()
        })
    }

    fn swap_doc() -> serde_json::Value {
        json!({
            "default_dim": 2,
            "blocks": [
                {"from": "e2", "to": "e0", "matrix": [["0", "1"], ["1", "0"]]},
                {"from": "e0'", "to": "e2'", "matrix": [["0", "1"], ["1", "0"]]}
            ]
        })
    }

    #[test]
    fn trivial_blocks_match_transfer_matrix() {
        let g = nagao(&[2], None).unwrap();
        let t = truncate(&g, 3);
        let bm = block_transfer(&g, &t, &BlockAssignment::trivial()).unwrap();
        assert_eq!(bm.to_dense(), transfer_matrix(&t).to_rational());
        let z = lfunction(&g, &BlockAssignment::trivial(), 12).unwrap();
        assert_eq!(z, zeta_via_closure(&g).unwrap().inverse_zeta);
    }

    #[test]
    fn sign_representation() {
        let g = cycle(3);
        let b = BlockAssignment::from_json(&g, &sign_doc().to_string()).unwrap();
        let l = lfunction(&g, &b, 16).unwrap();
        assert_eq!(
            l,
            RatFunc::from_poly(Poly::from_ints(&[1, 0, 0, 2, 0, 0, 1]))
        );
        let census = cycle_census(&g, 6);
        let s = l_euler_series(&g, &census, &b, 5).unwrap();
        assert_eq!(s, Series::from_poly(&Poly::from_ints(&[1, 0, 0, 2]), 5));
    }

    #[test]
    fn swap_representation() {
        let g = cycle(3);
        let b = BlockAssignment::from_json(&g, &swap_doc().to_string()).unwrap();
        let t = truncate(&g, 0);
        assert_eq!(block_transfer(&g, &t, &b).unwrap().total_dim(), 12);
        let l = lfunction(&g, &b, 28).unwrap();
        assert_eq!(
            l,
            RatFunc::from_poly(Poly::from_ints(&[1, 0, 0, 0, 0, 0, -2, 0, 0, 0, 0, 0, 1]))
        );
        let census = cycle_census(&g, 6);
        let s = l_euler_series(&g, &census, &b, 6).unwrap();
        assert_eq!(
            s,
            Series::from_poly(&Poly::from_ints(&[1, 0, 0, 0, 0, 0, -2]), 6)
        );
        assert!(rotation_invariance(&g, &census, &b).unwrap().is_empty());
    }

    #[test]
    fn rejected_documents() {
        let g = cycle(3);
        let bad_pair = json!({"blocks": [{"from": "e0", "to": "e0'", "matrix": [["1"]]}]});
        assert!(matches!(
            BlockAssignment::from_json(&g, &bad_pair.to_string()),
            Err(Error::BlockShape(_))
        ));
        let bad_shape = json!({"blocks": [{"from": "e0", "to": "e1", "matrix": [["1", "0"]]}]});
        assert!(matches!(
            BlockAssignment::from_json(&g, &bad_shape.to_string()),
            Err(Error::BlockShape(_))
        ));
        let mismatched = json!({"dims": {"e0": 2}});
        let b = BlockAssignment::from_json(&g, &mismatched.to_string()).unwrap();
        assert!(matches!(
            block_transfer(&g, &truncate(&g, 0), &b),
            Err(Error::BlockShape(_))
        ));
        let n = nagao(&[2], None).unwrap();
        assert!(matches!(
            BlockAssignment::from_json(&n, "{}"),
            Err(Error::CuspRule(_))
        ));
        let ray = json!({"cusp_rule": true, "blocks": [{"from": "c.u0", "to": "c.u1", "matrix": [["2"]]}]});
        assert!(matches!(
            BlockAssignment::from_json(&n, &ray.to_string()),
            Err(Error::CuspRule(_))
        ));
        assert!(matches!(
            BlockAssignment::from_json(&g, &json!({"dims": {"zz": 1}}).to_string()),
            Err(Error::UnknownEdge(_))
        ));
    }

    #[test]
    fn block_traces_match_cycles() {
        let g = cycle(3);
        let b = BlockAssignment::from_json(&g, &swap_doc().to_string()).unwrap();
        let census = cycle_census(&g, 8);
        let tr = block_traces(&g, &b, 8).unwrap();
        for n in 1..=8 {
            assert_eq!(
                tr[n - 1],
                block_trace_via_cycles(&g, &census, &b, n).unwrap()
            );
        }
    }
}
