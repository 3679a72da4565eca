//! Edge-weighted oriented quotient graphs with periodic cusp rays.
//!
//! A [`CuspidalGraph`] is a finite connected core plus finitely many rays. Each
//! ray `c` attached at a core vertex generates vertices `c.y1, c.y2, …`, outward
//! edges `c.u0: attach → y1`, `c.un: yn → yn+1` and inward edges
//! `c.d0: y1 → attach`, `c.dn: yn+1 → yn`. Outward weights are the entry weight
//! for `u0` and `1` beyond; inward `dn` has weight `q_{n+1}`, where
//! `q_1, q_2, …` is the preperiod followed by the repeating period.

mod builders;
mod doc;
mod operators;
mod truncation;

use std::collections::HashMap;

pub use builders::{
    complete, cycle, isolated_vertex, nagao, petersen, random_multigraph, single_edge_pair,
    two_cusp, GraphBuilder,
};
pub use doc::{validate, CuspDoc, EdgeDoc, GraphDoc, Violation};
pub use operators::{closure_matrix, transfer_matrix, vertex_operators, EdgeMatrix, VertexMatrix};
pub use truncation::{induced, truncate, TEdge, Truncation};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreEdge {
    pub id: String,
    pub origin: usize,
    pub terminus: usize,
    pub inverse: usize,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspRay {
    pub id: String,
    pub attach: usize,
    pub entry_weight: u64,
    pub preperiod: Vec<u64>,
    pub period: Vec<u64>,
}

impl CuspRay {
    /// Parameter `q_n` of ray vertex `y_n`, `n ≥ 1`.
    pub fn param(&self, n: usize) -> u64 {
        assert!(n >= 1, "ray vertices start at y1");
        let k = n - 1;
        if k < self.preperiod.len() {
            self.preperiod[k]
        } else {
            self.period[(k - self.preperiod.len()) % self.period.len()]
        }
    }

    /// The constant value `q` when the period has length one (or is constant).
    pub fn eventual_value(&self) -> Option<u64> {
        let first = self.period[0];
        self.period.iter().all(|&q| q == first).then_some(first)
    }

    /// Weight of outward edge `u_n`.
    pub fn out_weight(&self, n: usize) -> u64 {
        if n == 0 {
            self.entry_weight
        } else {
            1
        }
    }

    /// Weight of inward edge `d_n`.
    pub fn in_weight(&self, n: usize) -> u64 {
        self.param(n + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexRef {
    Core(usize),
    /// Ray vertex `y_index`, `index ≥ 1`.
    Ray {
        cusp: usize,
        index: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeRef {
    Core(usize),
    Out { cusp: usize, n: usize },
    In { cusp: usize, n: usize },
}

/// A validated, immutable cuspidal graph.
#[derive(Debug, Clone)]
pub struct CuspidalGraph {
    vertices: Vec<String>,
    vertex_index: HashMap<String, usize>,
    edges: Vec<CoreEdge>,
    edge_index: HashMap<String, usize>,
    cusps: Vec<CuspRay>,
    tree_valency: Vec<u64>,
}

impl CuspidalGraph {
    pub(crate) fn from_parts(
        vertices: Vec<String>,
        edges: Vec<CoreEdge>,
        cusps: Vec<CuspRay>,
        tree_valency: Vec<u64>,
    ) -> Self {
        let vertex_index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let edge_index = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), i))
            .collect();
        CuspidalGraph {
            vertices,
            vertex_index,
            edges,
            edge_index,
            cusps,
            tree_valency,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        validate(&doc)
    }

    pub fn core_vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn core_edges(&self) -> &[CoreEdge] {
        &self.edges
    }

    pub fn cusps(&self) -> &[CuspRay] {
        &self.cusps
    }

    pub fn has_cusps(&self) -> bool {
        !self.cusps.is_empty()
    }

    pub fn core_tree_valency(&self) -> &[u64] {
        &self.tree_valency
    }

    pub fn tree_valency(&self, v: VertexRef) -> u64 {
        match v {
            VertexRef::Core(i) => self.tree_valency[i],
            VertexRef::Ray { cusp, index } => self.cusps[cusp].param(index) + 1,
        }
    }

    /// `χ = |V| − |E|` of the core, counting unoriented edges.
    pub fn core_euler_char(&self) -> i64 {
        self.vertices.len() as i64 - (self.edges.len() / 2) as i64
    }

    /// `Some(q)` when every vertex of the tree has valency `q + 1`.
    pub fn lie_type(&self) -> Option<u64> {
        let q = self.tree_valency.first().copied()?.checked_sub(1)?;
        let core_ok = self.tree_valency.iter().all(|&v| v == q + 1);
        let rays_ok = self
            .cusps
            .iter()
            .all(|c| c.preperiod.iter().chain(&c.period).all(|&p| p == q));
        (core_ok && rays_ok && q >= 1).then_some(q)
    }

    /// Largest tree valency over core and rays.
    pub fn max_tree_valency(&self) -> u64 {
        let core = self.tree_valency.iter().copied().max().unwrap_or(0);
        let rays = self
            .cusps
            .iter()
            .flat_map(|c| c.preperiod.iter().chain(&c.period))
            .map(|&q| q + 1)
            .max()
            .unwrap_or(0);
        core.max(rays)
    }

    pub fn vertex_id(&self, v: VertexRef) -> String {
        match v {
            VertexRef::Core(i) => self.vertices[i].clone(),
            VertexRef::Ray { cusp, index } => format!("{}.y{index}", self.cusps[cusp].id),
        }
    }

    pub fn edge_id(&self, e: EdgeRef) -> String {
        match e {
            EdgeRef::Core(i) => self.edges[i].id.clone(),
            EdgeRef::Out { cusp, n } => format!("{}.u{n}", self.cusps[cusp].id),
            EdgeRef::In { cusp, n } => format!("{}.d{n}", self.cusps[cusp].id),
        }
    }

    fn split_ray_id(&self, id: &str) -> Option<(usize, char, usize)> {
        let (cusp, tail) = id.rsplit_once('.')?;
        let c = self.cusps.iter().position(|x| x.id == cusp)?;
        let mut chars = tail.chars();
        let tag = chars.next()?;
        let n: usize = chars.as_str().parse().ok()?;
        Some((c, tag, n))
    }

    pub fn parse_vertex(&self, id: &str) -> Result<VertexRef> {
        if let Some(&i) = self.vertex_index.get(id) {
            return Ok(VertexRef::Core(i));
        }
        match self.split_ray_id(id) {
            Some((cusp, 'y', index)) if index >= 1 => Ok(VertexRef::Ray { cusp, index }),
            _ => Err(Error::UnknownVertex(id.to_string())),
        }
    }

    pub fn parse_edge(&self, id: &str) -> Result<EdgeRef> {
        if let Some(&i) = self.edge_index.get(id) {
            return Ok(EdgeRef::Core(i));
        }
        match self.split_ray_id(id) {
            Some((cusp, 'u', n)) => Ok(EdgeRef::Out { cusp, n }),
            Some((cusp, 'd', n)) => Ok(EdgeRef::In { cusp, n }),
            _ => Err(Error::UnknownEdge(id.to_string())),
        }
    }

    /// Position of an edge in the fixed total order: core edges first, then ray
    /// edges depth by depth, cusp by cusp, outward before inward.
    pub fn edge_ordinal(&self, e: EdgeRef) -> usize {
        let core = self.edges.len();
        let s = self.cusps.len();
        match e {
            EdgeRef::Core(i) => i,
            EdgeRef::Out { cusp, n } => core + 2 * (n * s + cusp),
            EdgeRef::In { cusp, n } => core + 2 * (n * s + cusp) + 1,
        }
    }

    pub fn endpoints(&self, e: EdgeRef) -> (VertexRef, VertexRef) {
        let ray = |cusp: usize, k: usize| {
            if k == 0 {
                VertexRef::Core(self.cusps[cusp].attach)
            } else {
                VertexRef::Ray { cusp, index: k }
            }
        };
        match e {
            EdgeRef::Core(i) => (
                VertexRef::Core(self.edges[i].origin),
                VertexRef::Core(self.edges[i].terminus),
            ),
            EdgeRef::Out { cusp, n } => (ray(cusp, n), ray(cusp, n + 1)),
            EdgeRef::In { cusp, n } => (ray(cusp, n + 1), ray(cusp, n)),
        }
    }

    pub fn inverse(&self, e: EdgeRef) -> EdgeRef {
        match e {
            EdgeRef::Core(i) => EdgeRef::Core(self.edges[i].inverse),
            EdgeRef::Out { cusp, n } => EdgeRef::In { cusp, n },
            EdgeRef::In { cusp, n } => EdgeRef::Out { cusp, n },
        }
    }

    pub fn weight(&self, e: EdgeRef) -> u64 {
        match e {
            EdgeRef::Core(i) => self.edges[i].weight,
            EdgeRef::Out { cusp, n } => self.cusps[cusp].out_weight(n),
            EdgeRef::In { cusp, n } => self.cusps[cusp].in_weight(n),
        }
    }

    /// `w(e, e')`: `w(e')`, minus one when `e'` reverses `e`; zero unless consecutive.
    pub fn step_weight(&self, e: EdgeRef, next: EdgeRef) -> u64 {
        if self.endpoints(e).1 != self.endpoints(next).0 {
            return 0;
        }
        let w = self.weight(next);
        if self.inverse(e) == next {
            w - 1
        } else {
            w
        }
    }

    /// Serializable document for this graph.
    pub fn to_doc(&self) -> GraphDoc {
        GraphDoc {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    origin: self.vertices[e.origin].clone(),
                    terminus: self.vertices[e.terminus].clone(),
                    inverse: self.edges[e.inverse].id.clone(),
                    weight: e.weight as i64,
                })
                .collect(),
            cusps: self
                .cusps
                .iter()
                .map(|c| CuspDoc {
                    id: c.id.clone(),
                    attach: self.vertices[c.attach].clone(),
                    entry_weight: c.entry_weight as i64,
                    preperiod: c.preperiod.iter().map(|&q| q as i64).collect(),
                    period: c.period.iter().map(|&q| q as i64).collect(),
                })
                .collect(),
            tree_valency: self
                .vertices
                .iter()
                .zip(&self.tree_valency)
                .map(|(v, &k)| (v.clone(), k as i64))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("graph documents serialize")
    }
}
