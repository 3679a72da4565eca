use std::collections::{BTreeSet, HashMap};

use super::{CuspidalGraph, EdgeRef, VertexRef};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TEdge {
    pub id: String,
    pub edge: EdgeRef,
    pub origin: usize,
    pub terminus: usize,
    pub inverse: usize,
    pub weight: u64,
}

/// A finite full subgraph: either the core plus the first `depth` vertices of
/// every ray, or an arbitrary induced subgraph (see [`induced`]).
#[derive(Debug, Clone)]
pub struct Truncation {
    pub depth: usize,
    pub vertices: Vec<VertexRef>,
    pub vertex_ids: Vec<String>,
    /// Sorted by the graph's global edge order, so a shallower truncation's
    /// edges form a prefix of a deeper one's.
    pub edges: Vec<TEdge>,
    pub euler_char: i64,
    /// Sum of weights of retained outgoing edges, per vertex.
    pub boundary_valency: Vec<u64>,
    /// Valency of the vertex in the ambient tree.
    pub tree_valency: Vec<u64>,
}

pub fn truncate(g: &CuspidalGraph, depth: usize) -> Truncation {
    let mut vs: Vec<VertexRef> = (0..g.core_vertices().len()).map(VertexRef::Core).collect();
    for index in 1..=depth {
        for cusp in 0..g.cusps().len() {
            vs.push(VertexRef::Ray { cusp, index });
        }
    }
    let mut t = induced(g, &vs);
    t.depth = depth;
    t
}

/// The full subgraph on a finite vertex set; `depth` is the largest ray index present.
pub fn induced(g: &CuspidalGraph, vertices: &[VertexRef]) -> Truncation {
    let set: BTreeSet<VertexRef> = vertices.iter().copied().collect();
    let mut vs: Vec<VertexRef> = set.iter().copied().collect();
    // Core first, then ray vertices depth-major.
    vs.sort_by_key(|v| match *v {
        VertexRef::Core(i) => (0, i, 0),
        VertexRef::Ray { cusp, index } => (1, index, cusp),
    });
    let vpos: HashMap<VertexRef, usize> = vs.iter().enumerate().map(|(i, v)| (*v, i)).collect();

    let mut erefs: Vec<EdgeRef> = Vec::new();
    if vs.iter().any(|v| matches!(v, VertexRef::Core(_))) {
        erefs.extend((0..g.core_edges().len()).map(EdgeRef::Core));
    }
    for v in &vs {
        if let VertexRef::Ray { cusp, index } = *v {
            let n = index - 1;
            let e = EdgeRef::Out { cusp, n };
            if set.contains(&g.endpoints(e).0) {
                erefs.push(e);
                erefs.push(EdgeRef::In { cusp, n });
            }
        }
    }
    erefs.sort_by_key(|&e| g.edge_ordinal(e));
    let epos: HashMap<EdgeRef, usize> = erefs.iter().enumerate().map(|(i, e)| (*e, i)).collect();

    let edges: Vec<TEdge> = erefs
        .iter()
        .map(|&e| {
            let (o, t) = g.endpoints(e);
            TEdge {
                id: g.edge_id(e),
                edge: e,
                origin: vpos[&o],
                terminus: vpos[&t],
                inverse: epos[&g.inverse(e)],
                weight: g.weight(e),
            }
        })
        .collect();

    let mut boundary_valency = vec![0u64; vs.len()];
    for e in &edges {
        boundary_valency[e.origin] += e.weight;
    }
    let depth = vs
        .iter()
        .map(|v| match v {
            VertexRef::Ray { index, .. } => *index,
            VertexRef::Core(_) => 0,
        })
        .max()
        .unwrap_or(0);

    Truncation {
        depth,
        vertex_ids: vs.iter().map(|&v| g.vertex_id(v)).collect(),
        tree_valency: vs.iter().map(|&v| g.tree_valency(v)).collect(),
        euler_char: vs.len() as i64 - (edges.len() / 2) as i64,
        vertices: vs,
        edges,
        boundary_valency,
    }
}

impl Truncation {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// `w(e_i, e_j)` inside the truncation.
    pub fn step_weight(&self, i: usize, j: usize) -> u64 {
        let (a, b) = (&self.edges[i], &self.edges[j]);
        if a.terminus != b.origin {
            0
        } else if a.inverse == j {
            b.weight - 1
        } else {
            b.weight
        }
    }

    /// Nonzero-weight successors of every edge.
    pub fn successors(&self) -> Vec<Vec<(usize, u64)>> {
        let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); self.vertices.len()];
        for (j, e) in self.edges.iter().enumerate() {
            out_of[e.origin].push(j);
        }
        (0..self.edges.len())
            .map(|i| {
                out_of[self.edges[i].terminus]
                    .iter()
                    .map(|&j| (j, self.step_weight(i, j)))
                    .filter(|&(_, w)| w > 0)
                    .collect()
            })
            .collect()
    }

    pub fn components(&self) -> usize {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.origin), find(&mut parent, e.terminus));
            parent[a] = b;
        }
        (0..n).filter(|&x| find(&mut parent, x) == x).count()
    }

    pub fn edge_position(&self, e: EdgeRef) -> Option<usize> {
        self.edges.iter().position(|x| x.edge == e)
    }
}
