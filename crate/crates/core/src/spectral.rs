//! Root analysis of `Z⁻¹` and the graph prime geodesic count.
//!
//! This is the one place that uses floating point. Roots are extracted exactly
//! where possible (rational roots, and rational roots in `x²`), the rest are
//! found numerically on square-free factors and certified by the disk bound
//! `|z − root| ≤ n·|p(z)/p'(z)|`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::rational::to_f64;
use crate::exact::{format_rational, int, logderiv_counts, Poly, RatFunc, Rational};
use crate::graph::{CuspidalGraph, EdgeMatrix};
use crate::zeta::{TraceSeries, ZetaResult};

/// Required radius of every certified root disk.
pub const ROOT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum RootKind {
    Rational(Rational),
    /// A root of `x² = c` with `c` not a rational square.
    SquareRoot(Rational),
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    pub value: Complex64,
    /// Radius of a disk around `value` known to contain the root.
    pub radius: f64,
    pub multiplicity: usize,
    pub kind: RootKind,
}

impl Root {
    pub fn modulus(&self) -> f64 {
        match &self.kind {
            RootKind::Rational(r) => to_f64(r).abs(),
            RootKind::SquareRoot(c) => to_f64(c).abs().sqrt(),
            RootKind::Numeric => self.value.norm(),
        }
    }

    /// `|root|^k` as an exact rational, when known.
    pub fn exact_modulus_pow(&self, k: usize) -> Option<Rational> {
        let pow = |r: Rational, e: usize| (0..e).fold(Rational::one(), |acc, _| acc * &r);
        match &self.kind {
            RootKind::Rational(r) => Some(pow(r.abs(), k)),
            RootKind::SquareRoot(c) if k.is_multiple_of(2) => Some(pow(c.abs(), k / 2)),
            _ => None,
        }
    }

    fn describe(&self) -> Option<String> {
        match &self.kind {
            RootKind::Rational(r) => Some(format_rational(r)),
            RootKind::SquareRoot(c) => {
                let sign = if self.value.re + self.value.im < 0.0 {
                    "-"
                } else {
                    ""
                };
                let unit = if c.is_negative() { "i*" } else { "" };
                Some(format!("{sign}{unit}sqrt({})", format_rational(&c.abs())))
            }
            RootKind::Numeric => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootApprox {
    pub re: String,
    pub im: String,
    pub modulus: String,
    pub error_bound: String,
    pub multiplicity: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl From<&Root> for RootApprox {
    fn from(r: &Root) -> Self {
        RootApprox {
            re: format!("{:.12}", r.value.re),
            im: format!("{:.12}", r.value.im),
            modulus: format!("{:.12}", r.modulus()),
            error_bound: format!("{:.1e}", r.radius),
            multiplicity: r.multiplicity,
            exact: r.describe(),
        }
    }
}

/// Square-free decomposition `p = c·Π f_i^i` (Yun). Returns `(f_i, i)` with
/// nonconstant `f_i`.
pub fn squarefree_decomposition(p: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let dp = p.derivative();
    let a = Poly::gcd(p, &dp);
    let mut b = p.div_exact(&a).expect("gcd divides");
    let mut c = dp.div_exact(&a).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let ai = Poly::gcd(&b, &d);
        if ai.degree().unwrap_or(0) > 0 {
            out.push((ai.clone(), i));
        }
        b = b.div_exact(&ai).expect("gcd divides");
        c = d.div_exact(&ai).expect("gcd divides");
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

fn integer_coeffs(p: &Poly) -> Vec<BigInt> {
    let l = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.coeffs()
        .iter()
        .map(|c| (c * Rational::from(l.clone())).to_integer())
        .collect()
}

fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64()?;
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut k = 1u64;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            if k * k != n {
                out.push(n / k);
            }
        }
        k += 1;
    }
    out.sort_unstable();
    Some(out)
}

/// Rational roots of `p`, each listed once.
pub fn rational_roots(p: &Poly) -> Vec<Rational> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    let mut q = p.clone();
    if q.coeff(0).is_zero() {
        roots.push(Rational::zero());
        let k = q.low_order().unwrap_or(0);
        q = Poly::new(q.coeffs()[k..].to_vec());
    }
    let z = integer_coeffs(&q);
    let (Some(ps), Some(qs)) = (divisors(&z[0]), divisors(z.last().expect("nonzero"))) else {
        return roots;
    };
    for &num in &ps {
        for &den in &qs {
            if num.gcd(&den) != 1 {
                continue;
            }
            for s in [1i64, -1] {
                let r = Rational::new(BigInt::from(num) * s, BigInt::from(den));
                if q.eval(&r).is_zero() && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots
}

fn complex_eval(c: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    // Horner for p and p', plus the running bound Σ|c_k||z|^k for rounding.
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    let mut mag = 0.0;
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
        mag = mag * z.norm() + a.norm();
    }
    (p, dp, mag)
}

/// Aberth iteration on a square-free polynomial, followed by disk certification.
fn numeric_roots(p: &Poly) -> Result<Vec<(Complex64, f64)>> {
    let n = p.degree().unwrap_or(0);
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = to_f64(p.leading().expect("nonzero"));
    let c: Vec<Complex64> = p
        .coeffs()
        .iter()
        .map(|x| Complex64::new(to_f64(x) / lead, 0.0))
        .collect();
    let radius = (0..n)
        .map(|k| c[k].norm().powf(1.0 / (n - k) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                radius,
                2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4,
            )
        })
        .collect();
    for _ in 0..1000 {
        let mut step = 0.0f64;
        for i in 0..n {
            let (pv, dv, _) = complex_eval(&c, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dv;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::one() - ratio * s);
            z[i] -= w;
            step = step.max(w.norm() / z[i].norm().max(1.0));
        }
        if step < 1e-15 {
            break;
        }
    }
    let mut out = Vec::with_capacity(n);
    for mut zi in z {
        for _ in 0..3 {
            let (pv, dv, _) = complex_eval(&c, zi);
            if dv.norm() > 0.0 {
                zi -= pv / dv;
            }
        }
        let (pv, dv, mag) = complex_eval(&c, zi);
        let err = 4.0 * (n as f64 + 1.0) * f64::EPSILON * mag;
        let r = n as f64 * (pv.norm() + err) / dv.norm();
        if !r.is_finite() || r > ROOT_TOLERANCE {
            return Err(Error::RootIsolation(format!(
                "root near {zi} of {p} only certified to radius {r:e}"
            )));
        }
        out.push((zi, r));
    }
    for i in 0..n {
        for j in i + 1..n {
            if (out[i].0 - out[j].0).norm() <= out[i].1 + out[j].1 {
                return Err(Error::RootIsolation(format!(
                    "root disks around {} and {} overlap",
                    out[i].0, out[j].0
                )));
            }
        }
    }
    Ok(out)
}

fn roots_of_squarefree(f: &Poly, mult: usize, out: &mut Vec<Root>) -> Result<()> {
    let mut rest = f.clone();
    for r in rational_roots(f) {
        rest = rest
            .div_exact(&Poly::new(vec![-r.clone(), Rational::one()]))
            .expect("rational root divides");
        out.push(Root {
            value: Complex64::new(to_f64(&r), 0.0),
            radius: 0.0,
            multiplicity: mult,
            kind: RootKind::Rational(r),
        });
    }
    // Rational roots in x² when only even powers remain.
    if rest.degree().unwrap_or(0) >= 2 && rest.coeffs().iter().skip(1).step_by(2).all(Zero::is_zero)
    {
        let s = Poly::new(rest.coeffs().iter().step_by(2).cloned().collect());
        for c in rational_roots(&s) {
            let quad = Poly::new(vec![-c.clone(), int(0), int(1)]);
            rest = rest.div_exact(&quad).expect("quadratic factor divides");
            let m = to_f64(&c).abs().sqrt();
            let unit = if c.is_negative() {
                Complex64::new(0.0, m)
            } else {
                Complex64::new(m, 0.0)
            };
            for v in [unit, -unit] {
                out.push(Root {
                    value: v,
                    radius: 0.0,
                    multiplicity: mult,
                    kind: RootKind::SquareRoot(c.clone()),
                });
            }
        }
    }
    for (v, r) in numeric_roots(&rest)? {
        out.push(Root {
            value: v,
            radius: r,
            multiplicity: mult,
            kind: RootKind::Numeric,
        });
    }
    Ok(())
}

/// Inverse roots of `p` (roots of its reversal), with multiplicity.
pub fn inverse_roots(p: &Poly) -> Result<Vec<Root>> {
    let Some(deg) = p.degree() else {
        return Err(Error::Precondition(
            "inverse roots of the zero polynomial".into(),
        ));
    };
    let rev = p.reversed(deg);
    let mut out = Vec::new();
    for (f, m) in squarefree_decomposition(&rev) {
        roots_of_squarefree(&f, m, &mut out)?;
    }
    out.sort_by(|a, b| {
        b.modulus()
            .total_cmp(&a.modulus())
            .then(a.value.arg().total_cmp(&b.value.arg()))
    });
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub numerator: Poly,
    pub denominator: Poly,
    /// Inverse zeros of the numerator.
    pub a_roots: Vec<RootApprox>,
    /// Inverse zeros of the denominator.
    pub den_roots: Vec<RootApprox>,
    pub den_moduli: Vec<String>,
    /// `q` when every tree vertex has valency `q + 1`.
    pub q: Option<u64>,
    pub s: usize,
    pub dominant_modulus: f64,
    /// `dominant_modulus^delta`, exactly.
    #[serde(serialize_with = "opt_rational")]
    pub dominant_power: Option<Rational>,
    pub delta: Option<usize>,
    pub epsilon: Option<f64>,
    /// `|max|a_j| − q| ≤ 1e-9`; absent for inputs that are not of Lie type.
    pub max_modulus_is_q: Option<bool>,
    /// Largest `|Σ a_jᵐ − Σ b_kᵐ − N_m| / max(1, ρ)ᵐ` for `m ≤ 12`.
    pub reconstruction_error: f64,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub roots: Vec<Root>,
    #[serde(skip)]
    pub poles: Vec<Root>,
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

fn power_sum(roots: &[Root], m: usize) -> f64 {
    roots
        .iter()
        .map(|r| r.multiplicity as f64 * r.value.powu(m as u32).re)
        .sum()
}

pub fn spectral_report(z: &ZetaResult, g: &CuspidalGraph) -> Result<SpectralReport> {
    spectral_report_for(&z.inverse_zeta, g)
}

pub fn spectral_report_for(z: &RatFunc, g: &CuspidalGraph) -> Result<SpectralReport> {
    let roots = inverse_roots(z.numerator())?;
    let poles = inverse_roots(z.denominator())?;
    let mut notes = Vec::new();
    let q = g.lie_type();
    let rho = roots.iter().map(Root::modulus).fold(0.0, f64::max);
    let tol = |r: &Root| ROOT_TOLERANCE * rho.max(1.0) + r.radius;

    let dominant: Vec<&Root> = roots
        .iter()
        .filter(|r| (r.modulus() - rho).abs() <= tol(r))
        .collect();
    let (mut delta, mut dominant_power) = (None, None);
    if roots.is_empty() {
        notes.push("no cycles: the numerator is constant".into());
    } else if dominant.iter().any(|r| r.multiplicity > 1) {
        notes.push("dominant inverse roots are repeated; no Δ".into());
    } else {
        let k = dominant.len();
        // The dominant roots must be ρ times the k-th roots of unity.
        let unity = (0..k).all(|j| {
            let w = Complex64::from_polar(rho, 2.0 * std::f64::consts::PI * j as f64 / k as f64);
            dominant
                .iter()
                .any(|r| (r.value - w).norm() <= tol(r) + 1e-9)
        });
        if unity {
            delta = Some(k);
            let exact: Vec<Rational> = dominant
                .iter()
                .filter_map(|r| r.exact_modulus_pow(k))
                .collect();
            if exact.len() == k && exact.windows(2).all(|w| w[0] == w[1]) {
                dominant_power = exact.into_iter().next();
            }
        } else {
            notes.push(format!(
                "the {k} roots of maximal modulus are not a rotated set of roots of unity"
            ));
        }
    }

    let second = roots
        .iter()
        .chain(&poles)
        .map(Root::modulus)
        .filter(|&m| m < rho - ROOT_TOLERANCE * rho.max(1.0))
        .fold(0.0, f64::max);
    let epsilon = (!roots.is_empty()).then_some(rho - second);

    let max_modulus_is_q = match q {
        Some(q) => Some((rho - q as f64).abs() <= ROOT_TOLERANCE),
        None => {
            notes.push(format!(
                "not of Lie type: reporting the dominant modulus {rho:.12} in place of q"
            ));
            None
        }
    };

    let counts = logderiv_counts(z, 12)?;
    let scale = rho.max(1.0);
    let reconstruction_error = (1..=12)
        .map(|m| {
            let est = power_sum(&roots, m) - power_sum(&poles, m);
            (est - to_f64(&counts[m - 1])).abs() / scale.powi(m as i32)
        })
        .fold(0.0, f64::max);

    Ok(SpectralReport {
        numerator: z.numerator().clone(),
        denominator: z.denominator().clone(),
        a_roots: roots.iter().map(RootApprox::from).collect(),
        den_roots: poles.iter().map(RootApprox::from).collect(),
        den_moduli: poles
            .iter()
            .map(|r| format!("{:.12}", r.modulus()))
            .collect(),
        q,
        s: g.cusps().len(),
        dominant_modulus: rho,
        dominant_power,
        delta,
        epsilon,
        max_modulus_is_q,
        reconstruction_error,
        notes,
        roots,
        poles,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PgtRow {
    pub m: usize,
    pub n_m: String,
    pub main_term: String,
    pub residual: String,
    #[serde(skip)]
    pub exact_residual: Option<BigInt>,
    #[serde(skip)]
    pub residual_f64: f64,
}

impl PgtRow {
    /// `m N_m main_term residual`
    pub fn to_row(&self) -> String {
        format!(
            "{} {} {} {}",
            self.m, self.n_m, self.main_term, self.residual
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PgtTable {
    pub rows: Vec<PgtRow>,
    pub exact: bool,
    /// `ρ − max |R_m|^{1/m}` over the upper half of the computed range.
    pub epsilon_prime: Option<f64>,
    pub passed: bool,
    pub notes: Vec<String>,
}

/// Residuals `R_m = N_m − Δ·[Δ | m]·ρᵐ`.
pub fn pgt_check(n: &TraceSeries, r: &SpectralReport) -> Result<PgtTable> {
    let Some(delta) = r.delta else {
        let note = if r.roots.is_empty() {
            "no cycles"
        } else {
            "Δ undefined"
        };
        return Ok(PgtTable {
            rows: Vec::new(),
            exact: true,
            epsilon_prime: None,
            passed: r.roots.is_empty() && n.values.iter().all(Zero::is_zero),
            notes: vec![note.into()],
        });
    };
    if n.max < 2 * delta {
        return Err(Error::Precondition(format!(
            "trace order {} is below 2Δ = {}",
            n.max,
            2 * delta
        )));
    }
    let exact_main = r
        .dominant_power
        .as_ref()
        .filter(|p| p.is_integer())
        .map(|p| p.to_integer());
    let rho = r.dominant_modulus;
    let rows: Vec<PgtRow> = (1..=n.max)
        .map(|m| {
            let nm = n.get(m).clone();
            let on = m % delta == 0;
            match &exact_main {
                Some(p) => {
                    let main = if on {
                        BigInt::from(delta) * num_traits::pow(p.clone(), m / delta)
                    } else {
                        BigInt::zero()
                    };
                    let res = &nm - &main;
                    PgtRow {
                        m,
                        n_m: nm.to_string(),
                        main_term: main.to_string(),
                        residual: res.to_string(),
                        residual_f64: res.to_f64().unwrap_or(f64::INFINITY),
                        exact_residual: Some(res),
                    }
                }
                None => {
                    let main = if on {
                        delta as f64 * rho.powi(m as i32)
                    } else {
                        0.0
                    };
                    let res = nm.to_f64().unwrap_or(f64::INFINITY) - main;
                    PgtRow {
                        m,
                        n_m: nm.to_string(),
                        main_term: format!("{main:.6}"),
                        residual: format!("{res:.6}"),
                        residual_f64: res,
                        exact_residual: None,
                    }
                }
            }
        })
        .collect();
    let growth = rows[(n.max - 1) / 2..]
        .iter()
        .filter(|row| row.residual_f64 != 0.0)
        .map(|row| row.residual_f64.abs().powf(1.0 / row.m as f64))
        .fold(0.0, f64::max);
    let epsilon_prime = rho - growth;
    let mut notes = Vec::new();
    if exact_main.is_none() {
        notes.push("main term evaluated in floating point".into());
    }
    Ok(PgtTable {
        exact: exact_main.is_some(),
        passed: epsilon_prime > 0.0,
        epsilon_prime: Some(epsilon_prime),
        rows,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnSumReport {
    pub passed: bool,
    /// `(edge id, column sum)` for every column that misses `q`.
    pub offending: Vec<(String, i64)>,
}

pub fn column_sum_check(m: &EdgeMatrix, q: i64) -> ColumnSumReport {
    let offending: Vec<(String, i64)> = m
        .column_sums()
        .into_iter()
        .enumerate()
        .filter(|&(_, s)| s != q)
        .map(|(i, s)| (m.index[i].clone(), s))
        .collect();
    ColumnSumReport {
        passed: offending.is_empty(),
        offending,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{closure_matrix, complete, nagao, transfer_matrix, truncate};
    use crate::zeta::{traces, zeta_via_closure, zeta_via_finite, zeta_via_pade};

    #[test]
    fn squarefree_parts() {
        // (x − 1)²(x + 2)
        let p = &Poly::from_ints(&[1, -2, 1]) * &Poly::from_ints(&[2, 1]);
        let d = squarefree_decomposition(&p);
        assert_eq!(
            d,
            vec![
                (Poly::from_ints(&[2, 1]), 1),
                (Poly::from_ints(&[-1, 1]), 2)
            ]
        );
    }

    #[test]
    fn rational_root_search() {
        let p = &Poly::from_ints(&[-1, 2]) * &Poly::from_ints(&[6, 0, 1]);
        assert_eq!(rational_roots(&p), vec![crate::exact::rat(1, 2)]);
    }

    #[test]
    fn nagao_report() {
        let g = nagao(&[2], None).unwrap();
        let z = zeta_via_closure(&g).unwrap();
        let r = spectral_report(&z, &g).unwrap();
        assert_eq!(r.delta, Some(2));
        assert_eq!(r.max_modulus_is_q, Some(true));
        assert!((r.dominant_modulus - 2.0).abs() < 1e-12);
        assert_eq!(r.dominant_power, Some(int(4)));
        assert!((r.epsilon.unwrap() - (2.0 - 2f64.sqrt())).abs() < 1e-12);
        assert!(r.reconstruction_error < 1e-9);
        let t = pgt_check(&traces(&g, 12), &r).unwrap();
        assert!(t.exact && t.passed);
        for row in &t.rows {
            let expected = if row.m % 2 == 0 {
                -2 * (1i64 << (row.m / 2))
            } else {
                0
            };
            assert_eq!(row.exact_residual, Some(BigInt::from(expected)));
        }
    }

    #[test]
    fn k4_report() {
        let g = complete(4);
        let z = zeta_via_finite(&g).unwrap();
        let r = spectral_report(&z, &g).unwrap();
        assert_eq!(r.delta, Some(1));
        assert_eq!(r.max_modulus_is_q, Some(true));
        assert!(r.reconstruction_error < 1e-6);
        assert_eq!(r.roots.iter().map(|x| x.multiplicity).sum::<usize>(), 12);
        let t = pgt_check(&traces(&g, 16), &r).unwrap();
        assert!(t.passed, "{t:?}");
    }

    #[test]
    fn biregular_report() {
        let g = nagao(&[2, 3], None).unwrap();
        let z = zeta_via_pade(&g, 16).unwrap();
        let r = spectral_report(&z, &g).unwrap();
        assert_eq!(r.q, None);
        assert_eq!(r.delta, Some(2));
        assert_eq!(r.dominant_power, Some(int(6)));
        assert!((r.dominant_modulus - 6f64.sqrt()).abs() < 1e-12);
        assert!((r.epsilon.unwrap() - (6f64.sqrt() - 6f64.powf(0.25))).abs() < 1e-9);
        assert!(pgt_check(&traces(&g, 16), &r).unwrap().passed);
    }

    #[test]
    fn tree_has_no_cycles() {
        let g = crate::graph::single_edge_pair();
        let z = zeta_via_finite(&g).unwrap();
        let r = spectral_report(&z, &g).unwrap();
        assert_eq!(r.delta, None);
        let t = pgt_check(&traces(&g, 8), &r).unwrap();
        assert_eq!(t.notes, vec!["no cycles"]);
    }

    #[test]
    fn column_sums() {
        let g = nagao(&[2], None).unwrap();
        for n in 1..5 {
            assert!(column_sum_check(&closure_matrix(&g, n).unwrap(), 2).passed);
        }
        let k4 = transfer_matrix(&truncate(&complete(4), 0));
        assert!(column_sum_check(&k4, 2).passed);
        let mut bad = k4.clone();
        let key = *bad.entries.keys().next().unwrap();
        bad.entries.insert(key, 5);
        let rep = column_sum_check(&bad, 2);
        assert!(!rep.passed);
        assert_eq!(rep.offending, vec![(bad.index[key.1].clone(), 6)]);
    }
}
