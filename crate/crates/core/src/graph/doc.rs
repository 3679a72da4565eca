use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{CoreEdge, CuspRay, CuspidalGraph};
use crate::error::{Error, Result};

/// JSON interchange document for a cuspidal graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
    #[serde(default)]
    pub cusps: Vec<CuspDoc>,
    pub tree_valency: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    pub origin: String,
    pub terminus: String,
    pub inverse: String,
    pub weight: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspDoc {
    pub id: String,
    pub attach: String,
    pub entry_weight: i64,
    #[serde(default)]
    pub preperiod: Vec<i64>,
    pub period: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyCore,
    DuplicateVertex(String),
    DuplicateEdge(String),
    DuplicateCusp(String),
    UnknownEndpoint {
        edge: String,
        vertex: String,
    },
    UnknownInverse {
        edge: String,
        inverse: String,
    },
    SelfInverse(String),
    InverseNotInvolution {
        edge: String,
        inverse: String,
    },
    EndpointMismatch {
        edge: String,
        inverse: String,
    },
    NonpositiveWeight {
        edge: String,
        weight: i64,
    },
    UnknownAttach {
        cusp: String,
        vertex: String,
    },
    NonpositiveEntryWeight {
        cusp: String,
        weight: i64,
    },
    EmptyPeriod(String),
    NonpositiveParameter {
        cusp: String,
        value: i64,
    },
    ReservedId {
        id: String,
        cusp: String,
    },
    MissingValency(String),
    UnknownValencyVertex(String),
    ValencyMismatch {
        vertex: String,
        declared: i64,
        computed: i64,
    },
    DisconnectedCore {
        unreached: Vec<String>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            EmptyCore => write!(f, "empty core: at least one vertex is required"),
            DuplicateVertex(v) => write!(f, "duplicate vertex `{v}`"),
            DuplicateEdge(e) => write!(f, "duplicate edge `{e}`"),
            DuplicateCusp(c) => write!(f, "duplicate cusp `{c}`"),
            UnknownEndpoint { edge, vertex } => {
                write!(f, "edge `{edge}` references unknown vertex `{vertex}`")
            }
            UnknownInverse { edge, inverse } => {
                write!(f, "edge `{edge}` has unknown inverse `{inverse}`")
            }
            SelfInverse(e) => write!(f, "self-inverse edge `{e}`"),
            InverseNotInvolution { edge, inverse } => write!(
                f,
                "inverse mismatch: inverse of `{edge}` is `{inverse}` but not vice versa"
            ),
            EndpointMismatch { edge, inverse } => write!(
                f,
                "inverse mismatch: `{inverse}` does not run opposite to `{edge}`"
            ),
            NonpositiveWeight { edge, weight } => {
                write!(f, "nonpositive weight {weight} on edge `{edge}`")
            }
            UnknownAttach { cusp, vertex } => {
                write!(f, "cusp `{cusp}` attaches to unknown vertex `{vertex}`")
            }
            NonpositiveEntryWeight { cusp, weight } => {
                write!(f, "nonpositive weight {weight} on entry edge of cusp `{cusp}`")
            }
            EmptyPeriod(c) => write!(f, "cusp `{c}` has an empty period"),
            NonpositiveParameter { cusp, value } => {
                write!(f, "nonpositive weight {value} in ray pattern of cusp `{cusp}`")
            }
            ReservedId { id, cusp } => write!(
                f,
                "id `{id}` collides with the generated ray ids of cusp `{cusp}`"
            ),
            MissingValency(v) => write!(f, "missing tree valency for vertex `{v}`"),
            UnknownValencyVertex(v) => write!(f, "tree valency given for unknown vertex `{v}`"),
            ValencyMismatch {
                vertex,
                declared,
                computed,
            } => write!(
                f,
                "valency mismatch at `{vertex}`: declared {declared}, outgoing weights sum to {computed}"
            ),
            DisconnectedCore { unreached } => {
                write!(f, "disconnected core: unreachable vertices {unreached:?}")
            }
        }
    }
}

/// Checks every invariant of the document and builds the immutable graph.
pub fn validate(doc: &GraphDoc) -> Result<CuspidalGraph> {
    let mut bad = Vec::new();

    if doc.vertices.is_empty() {
        bad.push(Violation::EmptyCore);
    }
    let mut vindex: HashMap<&str, usize> = HashMap::new();
    for (i, v) in doc.vertices.iter().enumerate() {
        if vindex.insert(v, i).is_some() {
            bad.push(Violation::DuplicateVertex(v.clone()));
        }
    }
    let mut eindex: HashMap<&str, usize> = HashMap::new();
    for (i, e) in doc.edges.iter().enumerate() {
        if eindex.insert(&e.id, i).is_some() {
            bad.push(Violation::DuplicateEdge(e.id.clone()));
        }
    }

    let mut edges = Vec::with_capacity(doc.edges.len());
    for e in &doc.edges {
        let o = vindex.get(e.origin.as_str()).copied();
        let t = vindex.get(e.terminus.as_str()).copied();
        for (v, found) in [(&e.origin, o), (&e.terminus, t)] {
            if found.is_none() {
                bad.push(Violation::UnknownEndpoint {
                    edge: e.id.clone(),
                    vertex: v.clone(),
                });
            }
        }
        if e.weight <= 0 {
            bad.push(Violation::NonpositiveWeight {
                edge: e.id.clone(),
                weight: e.weight,
            });
        }
        let inv = eindex.get(e.inverse.as_str()).copied();
        match inv {
            None => bad.push(Violation::UnknownInverse {
                edge: e.id.clone(),
                inverse: e.inverse.clone(),
            }),
            Some(_) if e.inverse == e.id => bad.push(Violation::SelfInverse(e.id.clone())),
            Some(j) => {
                let back = &doc.edges[j];
                if back.inverse != e.id {
                    bad.push(Violation::InverseNotInvolution {
                        edge: e.id.clone(),
                        inverse: e.inverse.clone(),
                    });
                } else if back.origin != e.terminus || back.terminus != e.origin {
                    bad.push(Violation::EndpointMismatch {
                        edge: e.id.clone(),
                        inverse: e.inverse.clone(),
                    });
                }
            }
        }
        if let (Some(o), Some(t), Some(inv)) = (o, t, inv) {
            edges.push(CoreEdge {
                id: e.id.clone(),
                origin: o,
                terminus: t,
                inverse: inv,
                weight: e.weight.max(0) as u64,
            });
        }
    }

    let mut cusp_ids: HashMap<&str, ()> = HashMap::new();
    let mut cusps = Vec::new();
    for c in &doc.cusps {
        if cusp_ids.insert(&c.id, ()).is_some() {
            bad.push(Violation::DuplicateCusp(c.id.clone()));
        }
        let attach = vindex.get(c.attach.as_str()).copied();
        if attach.is_none() {
            bad.push(Violation::UnknownAttach {
                cusp: c.id.clone(),
                vertex: c.attach.clone(),
            });
        }
        if c.entry_weight <= 0 {
            bad.push(Violation::NonpositiveEntryWeight {
                cusp: c.id.clone(),
                weight: c.entry_weight,
            });
        }
        if c.period.is_empty() {
            bad.push(Violation::EmptyPeriod(c.id.clone()));
        }
        for &q in c.preperiod.iter().chain(&c.period) {
            if q <= 0 {
                bad.push(Violation::NonpositiveParameter {
                    cusp: c.id.clone(),
                    value: q,
                });
            }
        }
        let prefix = format!("{}.", c.id);
        for id in doc.vertices.iter().chain(doc.edges.iter().map(|e| &e.id)) {
            if id.starts_with(&prefix) {
                bad.push(Violation::ReservedId {
                    id: id.clone(),
                    cusp: c.id.clone(),
                });
            }
        }
        if let Some(attach) = attach {
            cusps.push(CuspRay {
                id: c.id.clone(),
                attach,
                entry_weight: c.entry_weight.max(0) as u64,
                preperiod: c.preperiod.iter().map(|&q| q.max(0) as u64).collect(),
                period: c.period.iter().map(|&q| q.max(0) as u64).collect(),
            });
        }
    }

    // Tree valency must equal the sum of outgoing weights, entry edges included.
    let mut outgoing = vec![0i64; doc.vertices.len()];
    for e in &doc.edges {
        if let Some(&o) = vindex.get(e.origin.as_str()) {
            outgoing[o] += e.weight;
        }
    }
    for c in &doc.cusps {
        if let Some(&a) = vindex.get(c.attach.as_str()) {
            outgoing[a] += c.entry_weight;
        }
    }
    let mut tree_valency = vec![0u64; doc.vertices.len()];
    for (i, v) in doc.vertices.iter().enumerate() {
        match doc.tree_valency.get(v) {
            None => bad.push(Violation::MissingValency(v.clone())),
            Some(&declared) => {
                if declared != outgoing[i] {
                    bad.push(Violation::ValencyMismatch {
                        vertex: v.clone(),
                        declared,
                        computed: outgoing[i],
                    });
                }
                tree_valency[i] = declared.max(0) as u64;
            }
        }
    }
    for v in doc.tree_valency.keys() {
        if !vindex.contains_key(v.as_str()) {
            bad.push(Violation::UnknownValencyVertex(v.clone()));
        }
    }

    if !doc.vertices.is_empty() {
        let mut adj = vec![Vec::new(); doc.vertices.len()];
        for e in &edges {
            adj[e.origin].push(e.terminus);
            adj[e.terminus].push(e.origin);
        }
        let mut seen = vec![false; doc.vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        let unreached: Vec<String> = doc
            .vertices
            .iter()
            .zip(&seen)
            .filter(|(_, s)| !**s)
            .map(|(v, _)| v.clone())
            .collect();
        if !unreached.is_empty() {
            bad.push(Violation::DisconnectedCore { unreached });
        }
    }

    if !bad.is_empty() {
        return Err(Error::Validation(bad));
    }
    Ok(CuspidalGraph::from_parts(
        doc.vertices.clone(),
        edges,
        cusps,
        tree_valency,
    ))
}
