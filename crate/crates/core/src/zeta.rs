//! Inverse zeta functions `Z(u)⁻¹` by three independent routes.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{int, pade, Poly, RatFunc, Rational, Series};
use crate::graph::{closure_matrix, transfer_matrix, truncate, CuspidalGraph, Truncation};

/// Extra coefficients an approximant must reproduce beyond its defining window.
pub const PADE_MARGIN: usize = 4;

/// `N_1..N_M` with `N_m = Tr(Tᵐ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSeries {
    pub max: usize,
    pub values: Vec<BigInt>,
}

impl TraceSeries {
    /// `N_m`, one-based.
    pub fn get(&self, m: usize) -> &BigInt {
        &self.values[m - 1]
    }

    pub fn as_rationals(&self) -> Vec<Rational> {
        self.values.iter().cloned().map(Rational::from).collect()
    }

    /// `exp(−Σ N_m uᵐ/m)` through order `max`.
    pub fn inverse_zeta_series(&self) -> Series {
        Series::from_traces(self.as_rationals(), self.max)
    }
}

impl Serialize for TraceSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TraceSeries", 2)?;
        st.serialize_field("max", &self.max)?;
        let v: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
        st.serialize_field("values", &v)?;
        st.end()
    }
}

/// Traces computed with the truncation depth `m + offset` for each `m`.
pub fn traces_with_offset(g: &CuspidalGraph, max: usize, offset: usize) -> TraceSeries {
    let values = (1..=max)
        .into_par_iter()
        .map(|m| {
            let t = transfer_matrix(&truncate(g, m + offset));
            t.trace_powers(m).pop().expect("m ≥ 1")
        })
        .collect();
    TraceSeries { max, values }
}

pub fn traces(g: &CuspidalGraph, max: usize) -> TraceSeries {
    traces_with_offset(g, max, 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Pade,
    Closure,
    FiniteDet,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Pade => "pade",
            Method::Closure => "closure",
            Method::FiniteDet => "finite_det",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZetaResult {
    pub inverse_zeta: RatFunc,
    pub method: Method,
    /// Series agreement with the trace exponential was checked through this order.
    pub validated_order: usize,
    pub diagnostics: Vec<String>,
}

impl Serialize for ZetaResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ZetaResult", 5)?;
        st.serialize_field("method", &self.method)?;
        st.serialize_field("numerator", self.inverse_zeta.numerator())?;
        st.serialize_field("denominator", self.inverse_zeta.denominator())?;
        st.serialize_field("validated_order", &self.validated_order)?;
        st.serialize_field("diagnostics", &self.diagnostics)?;
        st.end()
    }
}

/// Reconstructs `Z⁻¹` from the exponentiated trace series.
pub fn zeta_via_pade(g: &CuspidalGraph, order: usize) -> Result<ZetaResult> {
    zeta_from_traces(&traces(g, order), PADE_MARGIN)
}

/// Padé search on a precomputed trace series.
pub fn zeta_from_traces(n: &TraceSeries, margin: usize) -> Result<ZetaResult> {
    let order = n.max;
    let (r, d) = stable_pade(&n.inverse_zeta_series(), margin)?;
    Ok(ZetaResult {
        inverse_zeta: r,
        method: Method::Pade,
        validated_order: order,
        diagnostics: vec![format!(
            "Padé degrees ({d}, {d}) reproduce the series through order {order}"
        )],
    })
}

/// Degrees `(d, d)` for `d = 1..=(M − margin)/2`; the first approximant that
/// reproduces the whole series through its order `M` wins.
pub fn stable_pade(s: &Series, margin: usize) -> Result<(RatFunc, usize)> {
    let order = s.order();
    if order < 2 + margin {
        return Err(Error::Precondition(format!(
            "trace order {order} is below the minimum {}",
            2 + margin
        )));
    }
    for d in 1..=(order - margin) / 2 {
        let Ok(r) = pade(s, d, d) else { continue };
        if r.to_series(order)?.first_mismatch(s).is_none() {
            return Ok((r, d));
        }
    }
    Err(Error::NoStableApproximant { order })
}

/// `det(1 − u·A_N) / Π_c (1 − q_c u²)` with the smallest admissible closure depth.
pub fn zeta_via_closure(g: &CuspidalGraph) -> Result<ZetaResult> {
    let depth = g
        .cusps()
        .iter()
        .map(|c| c.preperiod.len() + 1)
        .max()
        .unwrap_or(1);
    zeta_via_closure_at(g, depth)
}

pub fn zeta_via_closure_at(g: &CuspidalGraph, depth: usize) -> Result<ZetaResult> {
    let a = closure_matrix(g, depth)?;
    let det = a.det_one_minus_u();
    let mut den = Poly::one();
    let mut diagnostics = vec![format!("closure depth {depth}, dimension {}", a.dim())];
    for c in g.cusps() {
        let q = c
            .eventual_value()
            .expect("closure_matrix checked the period");
        den = &den * &Poly::one_minus(int(q as i64), 2);
        diagnostics.push(format!(
            "cusp `{}`: closure adds trace 2·{q}^(m/2) for even m, divided out by 1 - {q}u^2",
            c.id
        ));
    }
    Ok(ZetaResult {
        inverse_zeta: RatFunc::new(det, den)?,
        method: Method::Closure,
        validated_order: 0,
        diagnostics,
    })
}

/// `det(1 − u·T)` of a finite truncation.
pub fn zeta_finite(t: &Truncation) -> RatFunc {
    RatFunc::from_poly(transfer_matrix(t).det_one_minus_u())
}

/// [`zeta_finite`] on a graph without cusps.
pub fn zeta_via_finite(g: &CuspidalGraph) -> Result<ZetaResult> {
    if g.has_cusps() {
        return Err(Error::UnsupportedMethod(
            "the finite determinant needs a graph without cusps".into(),
        ));
    }
    Ok(ZetaResult {
        inverse_zeta: zeta_finite(&truncate(g, 0)),
        method: Method::FiniteDet,
        validated_order: 0,
        diagnostics: Vec::new(),
    })
}

/// Methods applicable to `g`, in a fixed order.
pub fn applicable_methods(g: &CuspidalGraph) -> Vec<Method> {
    let mut m = vec![Method::Pade];
    if g.cusps().iter().all(|c| c.eventual_value().is_some()) {
        m.push(Method::Closure);
    }
    if !g.has_cusps() {
        m.push(Method::FiniteDet);
    }
    m
}

pub fn zeta_with(g: &CuspidalGraph, method: Method, order: usize) -> Result<ZetaResult> {
    zeta_with_margin(g, method, order, PADE_MARGIN)
}

pub fn zeta_with_margin(
    g: &CuspidalGraph,
    method: Method,
    order: usize,
    margin: usize,
) -> Result<ZetaResult> {
    match method {
        Method::Pade => zeta_from_traces(&traces(g, order), margin),
        Method::Closure => zeta_via_closure(g),
        Method::FiniteDet => zeta_via_finite(g),
    }
}

/// Runs every applicable method and fails if any two disagree.
pub fn zeta_all(g: &CuspidalGraph, order: usize) -> Result<Vec<ZetaResult>> {
    zeta_all_with_margin(g, order, PADE_MARGIN)
}

pub fn zeta_all_with_margin(
    g: &CuspidalGraph,
    order: usize,
    margin: usize,
) -> Result<Vec<ZetaResult>> {
    let results = applicable_methods(g)
        .into_iter()
        .map(|m| zeta_with_margin(g, m, order, margin))
        .collect::<Result<Vec<_>>>()?;
    check_agreement(&results)?;
    Ok(results)
}

pub fn check_agreement(results: &[ZetaResult]) -> Result<()> {
    if let Some(first) = results.first() {
        for r in &results[1..] {
            if r.inverse_zeta != first.inverse_zeta {
                return Err(Error::MethodMismatch(format!(
                    "{} gives {} but {} gives {}",
                    first.method, first.inverse_zeta, r.method, r.inverse_zeta
                )));
            }
        }
    }
    Ok(())
}

/// `tr(A_Nᵐ) − tr(Tᵐ)` for `m = 1..=max`.
pub fn closure_trace_excess(g: &CuspidalGraph, depth: usize, max: usize) -> Result<Vec<BigInt>> {
    let a = closure_matrix(g, depth)?.trace_powers(max);
    let t = traces(g, max);
    Ok(a.into_iter().zip(t.values).map(|(x, y)| x - y).collect())
}

/// `D(u) = (1 − q)u / (1 − qu²)`, the fixed point of `D = a + (a + b)·b·D`
/// with `a = −(q − 1)u`, `b = −u`.
pub fn cusp_factor(q: u64) -> Result<RatFunc> {
    if q == 0 {
        return Err(Error::Precondition("cusp factor needs q ≥ 1".into()));
    }
    let q = int(q as i64);
    RatFunc::new(Poly::new(vec![int(0), int(1) - &q]), Poly::one_minus(q, 2))
}

/// `D − a − (a + b)·b·D`, which vanishes identically.
pub fn cusp_factor_residual(q: u64) -> Result<RatFunc> {
    let d = cusp_factor(q)?;
    let a = RatFunc::from_poly(Poly::new(vec![int(0), int(1) - int(q as i64)]));
    let b = RatFunc::from_poly(Poly::from_ints(&[0, -1]));
    let ab = &a + &b;
    Ok(&(&d - &a) - &(&(&ab * &b) * &d))
}
