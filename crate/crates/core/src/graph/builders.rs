use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{validate, CuspDoc, CuspidalGraph, EdgeDoc, GraphDoc};
use crate::error::{Error, Result};

/// Incremental construction of a graph document. Tree valencies are filled in
/// from the outgoing weights, so builders always describe saturated vertices.
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    vertices: Vec<String>,
    edges: Vec<EdgeDoc>,
    cusps: Vec<CuspDoc>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, id: &str) -> Self {
        self.vertices.push(id.to_string());
        self
    }

    /// Edge `id: a → b` of weight `w_ab` and its inverse `id'` of weight `w_ba`.
    pub fn pair(mut self, id: &str, a: &str, b: &str, w_ab: u64, w_ba: u64) -> Self {
        let back = format!("{id}'");
        self.edges.push(EdgeDoc {
            id: id.to_string(),
            origin: a.to_string(),
            terminus: b.to_string(),
            inverse: back.clone(),
            weight: w_ab as i64,
        });
        self.edges.push(EdgeDoc {
            id: back,
            origin: b.to_string(),
            terminus: a.to_string(),
            inverse: id.to_string(),
            weight: w_ba as i64,
        });
        self
    }

    pub fn cusp(
        mut self,
        id: &str,
        attach: &str,
        entry: u64,
        preperiod: &[u64],
        period: &[u64],
    ) -> Self {
        self.cusps.push(CuspDoc {
            id: id.to_string(),
            attach: attach.to_string(),
            entry_weight: entry as i64,
            preperiod: preperiod.iter().map(|&q| q as i64).collect(),
            period: period.iter().map(|&q| q as i64).collect(),
        });
        self
    }

    pub fn doc(&self) -> GraphDoc {
        let mut tree_valency: BTreeMap<String, i64> =
            self.vertices.iter().map(|v| (v.clone(), 0)).collect();
        for e in &self.edges {
            if let Some(k) = tree_valency.get_mut(&e.origin) {
                *k += e.weight;
            }
        }
        for c in &self.cusps {
            if let Some(k) = tree_valency.get_mut(&c.attach) {
                *k += c.entry_weight;
            }
        }
        GraphDoc {
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
            cusps: self.cusps.clone(),
            tree_valency,
        }
    }

    pub fn build(&self) -> Result<CuspidalGraph> {
        validate(&self.doc())
    }
}

/// One vertex `x0` and one cusp `c` unfolding the `(q_0+1, q_1+1, …)` tree
/// quotient: `x0` sends weight `q_0 + 1` into the ray, and ray vertex `y_n` has
/// parameter `q_{n mod k}`. An optional preperiod is inserted before the cycle.
pub fn nagao(qs: &[u64], preperiod: Option<&[u64]>) -> Result<CuspidalGraph> {
    let (&q0, rest) = qs
        .split_first()
        .ok_or_else(|| Error::Precondition("nagao needs at least one parameter".into()))?;
    if qs.contains(&0) {
        return Err(Error::Precondition(
            "nagao parameters must be positive".into(),
        ));
    }
    let mut period: Vec<u64> = rest.to_vec();
    period.push(q0);
    GraphBuilder::new()
        .vertex("x0")
        .cusp("c", "x0", q0 + 1, preperiod.unwrap_or(&[]), &period)
        .build()
}

/// Two core vertices joined by one edge, each carrying a cusp; every vertex has valency `q + 1`.
pub fn two_cusp(q: u64) -> CuspidalGraph {
    GraphBuilder::new()
        .vertex("a")
        .vertex("b")
        .pair("ab", "a", "b", q, 1)
        .cusp("A", "a", 1, &[], &[q])
        .cusp("B", "b", q, &[], &[q])
        .build()
        .expect("two-cusp graph is valid")
}

pub fn complete(n: usize) -> CuspidalGraph {
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b = b.vertex(&format!("v{i}"));
    }
    for i in 0..n {
        for j in i + 1..n {
            b = b.pair(
                &format!("v{i}v{j}"),
                &format!("v{i}"),
                &format!("v{j}"),
                1,
                1,
            );
        }
    }
    b.build().expect("complete graph is valid")
}

pub fn cycle(n: usize) -> CuspidalGraph {
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b = b.vertex(&format!("v{i}"));
    }
    for i in 0..n {
        let j = (i + 1) % n;
        b = b.pair(&format!("e{i}"), &format!("v{i}"), &format!("v{j}"), 1, 1);
    }
    b.build().expect("cycle graph is valid")
}

pub fn petersen() -> CuspidalGraph {
    let mut b = GraphBuilder::new();
    for i in 0..10 {
        b = b.vertex(&format!("p{i}"));
    }
    for i in 0..5 {
        let (o, o1) = (format!("p{i}"), format!("p{}", (i + 1) % 5));
        let (n, n2) = (format!("p{}", i + 5), format!("p{}", (i + 2) % 5 + 5));
        b = b
            .pair(&format!("o{i}"), &o, &o1, 1, 1)
            .pair(&format!("s{i}"), &o, &n, 1, 1)
            .pair(&format!("i{i}"), &n, &n2, 1, 1);
    }
    b.build().expect("Petersen graph is valid")
}

pub fn single_edge_pair() -> CuspidalGraph {
    GraphBuilder::new()
        .vertex("a")
        .vertex("b")
        .pair("ab", "a", "b", 1, 1)
        .build()
        .expect("edge pair is valid")
}

pub fn isolated_vertex() -> CuspidalGraph {
    GraphBuilder::new()
        .vertex("x")
        .build()
        .expect("single vertex is valid")
}

/// Seeded connected multigraph on `n` vertices: a random spanning tree plus
/// `extra` further edges, which may be parallel edges or loops.
pub fn random_multigraph(seed: u64, n: usize, extra: usize) -> CuspidalGraph {
    let n = n.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b = b.vertex(&format!("v{i}"));
    }
    let mut k = 0;
    for i in 1..n {
        let j = rng.gen_range(0..i);
        b = b.pair(&format!("e{k}"), &format!("v{j}"), &format!("v{i}"), 1, 1);
        k += 1;
    }
    for _ in 0..extra {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        b = b.pair(&format!("e{k}"), &format!("v{i}"), &format!("v{j}"), 1, 1);
        k += 1;
    }
    b.build().expect("random multigraph is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(complete(4).core_edges().len(), 12);
        assert_eq!(complete(4).core_euler_char(), -2);
        assert_eq!(petersen().core_euler_char(), -5);
        assert_eq!(petersen().lie_type(), Some(2));
        assert_eq!(cycle(5).core_euler_char(), 0);
        assert_eq!(isolated_vertex().core_tree_valency(), &[0]);
        let g = two_cusp(2);
        assert_eq!(g.core_tree_valency(), &[3, 3]);
        assert_eq!(g.core_euler_char(), 1);
    }

    #[test]
    fn nagao_shapes() {
        let g = nagao(&[4, 9], Some(&[5])).unwrap();
        let c = &g.cusps()[0];
        assert_eq!(c.entry_weight, 5);
        assert_eq!(c.preperiod, vec![5]);
        assert_eq!(c.period, vec![9, 4]);
        assert!(nagao(&[], None).is_err());
        assert!(nagao(&[0], None).is_err());
    }

    #[test]
    fn random_multigraph_is_seeded() {
        let a = random_multigraph(7, 5, 4);
        let b = random_multigraph(7, 5, 4);
        assert_eq!(a.to_doc(), b.to_doc());
        assert_eq!(a.core_euler_char(), 1 - 4);
    }
}
