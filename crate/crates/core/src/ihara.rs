//! The Ihara determinant on finite truncations and nets of principal minors.

use std::collections::BTreeSet;

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{det_exact, format_rational, int, rational, Matrix, Poly, RatFunc, Rational};
use crate::graph::{
    induced, transfer_matrix, truncate, vertex_operators, CuspidalGraph, Truncation, VertexRef,
};
use crate::zeta::zeta_finite;

fn one_minus_u2() -> RatFunc {
    RatFunc::from_poly(Poly::from_ints(&[1, 0, -1]))
}

/// `det(1 − uA + u²Q)` of a truncation.
pub fn ihara_det(t: &Truncation) -> Poly {
    det_exact(&vertex_operators(t).ihara_matrix()).expect("vertex matrices are square")
}

/// `det(1 − uA + u²Q) / (1 − u²)^χ`
pub fn ihara_rhs(t: &Truncation) -> RatFunc {
    let d = RatFunc::from_poly(ihara_det(t));
    let f = one_minus_u2()
        .powi(t.euler_char as i32)
        .expect("1 - u^2 is invertible");
    (&d / &f).expect("1 - u^2 is nonzero")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BassReport {
    pub passed: bool,
    pub euler_char: i64,
    /// `det(1 − uT)·(1 − u²)^χ`
    pub lhs: String,
    /// `det(1 − uA + u²Q)`
    pub rhs: String,
}

/// Compares `det(1 − uT)·(1 − u²)^χ` with `det(1 − uA + u²Q)` exactly.
pub fn bass_identity_check(t: &Truncation) -> BassReport {
    let f = one_minus_u2()
        .powi(t.euler_char as i32)
        .expect("1 - u^2 is invertible");
    let lhs = &zeta_finite(t) * &f;
    let rhs = RatFunc::from_poly(ihara_det(t));
    BassReport {
        passed: lhs == rhs,
        euler_char: t.euler_char,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NetMode {
    /// Minors of `1 − uT` on edges.
    Transfer,
    /// Minors of `1 − uA + u²Q` on vertices.
    Vertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    Connected,
    /// Connected truncations interleaved with ones carrying a detached ray segment.
    Adversarial,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinorNetSample {
    pub depth: usize,
    pub vertices: Vec<String>,
    pub connected: bool,
    #[serde(with = "rational::as_string")]
    pub value: Rational,
}

impl MinorNetSample {
    /// `depth connected p/q`
    pub fn to_row(&self) -> String {
        format!(
            "{} {} {}",
            self.depth,
            self.connected,
            format_rational(&self.value)
        )
    }
}

/// The detached pair `y_{2d+2}, y_{2d+3}` on the first cusp.
fn detached_segment(depth: usize) -> [VertexRef; 2] {
    [
        VertexRef::Ray {
            cusp: 0,
            index: 2 * depth + 2,
        },
        VertexRef::Ray {
            cusp: 0,
            index: 2 * depth + 3,
        },
    ]
}

fn minor_value(t: &Truncation, u: &Rational, mode: NetMode) -> Rational {
    let m: Matrix<Rational> = match mode {
        NetMode::Transfer => {
            let tm = transfer_matrix(t);
            Matrix::from_fn(tm.dim(), tm.dim(), |r, c| {
                let d = if r == c { Rational::one() } else { int(0) };
                d - u * int(tm.entry(r, c))
            })
        }
        NetMode::Vertex => vertex_operators(t).ihara_at(u),
    };
    m.det().expect("minors are square")
}

/// Samples `det` of the principal minors over a schedule of finite index sets,
/// for depths `0..=max_depth`.
pub fn minor_net(
    g: &CuspidalGraph,
    u: &Rational,
    mode: NetMode,
    schedule: Schedule,
    max_depth: usize,
) -> Result<Vec<MinorNetSample>> {
    if schedule == Schedule::Adversarial && !g.has_cusps() {
        return Err(Error::Precondition(
            "the adversarial schedule needs a cusp to detach segments from".into(),
        ));
    }
    let mut sets: Vec<(usize, Vec<VertexRef>)> = Vec::new();
    for d in 0..=max_depth {
        let base = truncate(g, d).vertices;
        if schedule == Schedule::Adversarial {
            let mut far = base.clone();
            far.extend(detached_segment(d));
            sets.push((d, base));
            sets.push((d, far));
        } else {
            sets.push((d, base));
        }
    }
    Ok(sets
        .par_iter()
        .map(|(d, vs)| {
            let t = induced(g, vs);
            MinorNetSample {
                depth: *d,
                vertices: t.vertex_ids.clone(),
                connected: t.components() == 1,
                value: minor_value(&t, u, mode),
            }
        })
        .collect())
}

/// The value a connected net converges to, given `Z⁻¹`.
pub fn net_limit(
    g: &CuspidalGraph,
    inverse_zeta: &RatFunc,
    u: &Rational,
    mode: NetMode,
) -> Result<Rational> {
    let z = inverse_zeta
        .eval(u)
        .ok_or_else(|| Error::Precondition(format!("Z^-1 has a pole at u = {u}")))?;
    Ok(match mode {
        NetMode::Transfer => z,
        NetMode::Vertex => {
            let f = Rational::one() - u * u;
            z * rational_pow(&f, g.core_euler_char())
        }
    })
}

fn rational_pow(x: &Rational, e: i64) -> Rational {
    let p = (0..e.unsigned_abs()).fold(Rational::one(), |acc, _| acc * x);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// Two cofinal subsequences of the adversarial vertex-mode net.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceWitness {
    #[serde(serialize_with = "rationals")]
    pub connected: Vec<Rational>,
    #[serde(serialize_with = "rationals")]
    pub detached: Vec<Rational>,
    /// `detached / connected`, when it is the same at every depth.
    #[serde(serialize_with = "opt_rational")]
    pub ratio: Option<Rational>,
}

fn rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

fn opt_rational<S: serde::Serializer>(
    v: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&format_rational(r)),
        None => s.serialize_none(),
    }
}

pub fn divergence_witness(
    g: &CuspidalGraph,
    u: &Rational,
    max_depth: usize,
) -> Result<DivergenceWitness> {
    let samples = minor_net(g, u, NetMode::Vertex, Schedule::Adversarial, max_depth)?;
    let (conn, det): (Vec<_>, Vec<_>) = samples.into_iter().partition(|s| s.connected);
    let connected: Vec<Rational> = conn.into_iter().map(|s| s.value).collect();
    let detached: Vec<Rational> = det.into_iter().map(|s| s.value).collect();
    let ratios: BTreeSet<Rational> = connected
        .iter()
        .zip(&detached)
        .filter(|(c, _)| !num_traits::Zero::is_zero(*c))
        .map(|(c, d)| d / c)
        .collect();
    let ratio = (ratios.len() == 1).then(|| ratios.into_iter().next().expect("one ratio"));
    Ok(DivergenceWitness {
        connected,
        detached,
        ratio,
    })
}

/// A connected finite superset of `f`: the core, `f`, and the ray paths back to the core.
pub fn connected_closure(g: &CuspidalGraph, f: &[String]) -> Result<Vec<String>> {
    if f.is_empty() {
        return Err(Error::Precondition(
            "connected closure of an empty set".into(),
        ));
    }
    let mut set: BTreeSet<VertexRef> = (0..g.core_vertices().len()).map(VertexRef::Core).collect();
    for id in f {
        match g.parse_vertex(id)? {
            VertexRef::Ray { cusp, index } => {
                set.extend((1..=index).map(|i| VertexRef::Ray { cusp, index: i }));
            }
            v => {
                set.insert(v);
            }
        }
    }
    let vs: Vec<VertexRef> = set.into_iter().collect();
    Ok(induced(g, &vs).vertex_ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::graph::{complete, isolated_vertex, nagao, single_edge_pair, two_cusp};

    #[test]
    fn rhs_examples() {
        let g = nagao(&[2], None).unwrap();
        assert_eq!(
            ihara_rhs(&truncate(&g, 1)),
            RatFunc::from_poly(Poly::from_ints(&[1, 0, -2]))
        );
        let k4 = truncate(&complete(4), 0);
        assert_eq!(ihara_rhs(&k4), zeta_finite(&k4));
        assert_eq!(ihara_rhs(&truncate(&isolated_vertex(), 0)), RatFunc::one());
    }

    #[test]
    fn bass_on_small_graphs() {
        for g in [
            nagao(&[2], None).unwrap(),
            nagao(&[3], None).unwrap(),
            two_cusp(2),
        ] {
            for d in 0..5 {
                let r = bass_identity_check(&truncate(&g, d));
                assert!(r.passed, "{r:?}");
            }
        }
        assert!(bass_identity_check(&truncate(&single_edge_pair(), 0)).passed);
    }

    #[test]
    fn nets_on_nagao() {
        let g = nagao(&[2], None).unwrap();
        let u = rat(1, 10);
        let t = minor_net(&g, &u, NetMode::Transfer, Schedule::Connected, 8).unwrap();
        let v = minor_net(&g, &u, NetMode::Vertex, Schedule::Connected, 8).unwrap();
        let z = RatFunc::new(Poly::from_ints(&[1, 0, -4]), Poly::from_ints(&[1, 0, -2])).unwrap();
        assert_eq!(
            net_limit(&g, &z, &u, NetMode::Transfer).unwrap(),
            rat(48, 49)
        );
        assert_eq!(
            net_limit(&g, &z, &u, NetMode::Vertex).unwrap(),
            rat(1188, 1225)
        );
        let u2 = &u * &u;
        for (d, (a, b)) in t.iter().zip(&v).enumerate() {
            let tail = rational_pow(&(int(2) * &u2), d as i64 + 1) / (int(1) - int(2) * &u2);
            assert_eq!(a.value, rat(48, 49) + &tail);
            assert_eq!(b.value, (rat(48, 49) + &tail) * (int(1) - &u2));
            assert!(a.connected && b.connected);
        }
    }

    #[test]
    fn adversarial_witness() {
        let g = nagao(&[2], None).unwrap();
        let w = divergence_witness(&g, &rat(1, 10), 6).unwrap();
        assert_eq!(w.ratio, Some(rat(99, 100)));
        assert_eq!(w.connected.len(), 7);
        let t = minor_net(&g, &rat(1, 10), NetMode::Transfer, Schedule::Adversarial, 3).unwrap();
        for pair in t.chunks(2) {
            assert_eq!(pair[0].value, pair[1].value);
            assert!(!pair[1].connected);
        }
    }

    #[test]
    fn closures() {
        let g = nagao(&[2], None).unwrap();
        assert_eq!(connected_closure(&g, &["x0".into()]).unwrap(), vec!["x0"]);
        assert_eq!(
            connected_closure(&g, &["c.y3".into()]).unwrap(),
            vec!["x0", "c.y1", "c.y2", "c.y3"]
        );
        let h = two_cusp(2);
        let c = connected_closure(&h, &["A.y2".into(), "B.y1".into()]).unwrap();
        assert_eq!(c, vec!["a", "b", "A.y1", "B.y1", "A.y2"]);
        assert!(connected_closure(&g, &["zz".into()]).is_err());
        assert!(connected_closure(&g, &[]).is_err());
    }
}
