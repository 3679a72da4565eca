//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use cuspzeta::cycles::{cycle_census, enumerate_closed_paths, euler_product_series, n_via_cycles};
use cuspzeta::exact::{format_rational, rat, Poly, RatFunc, Rational, Series};
use cuspzeta::graph::{
    complete, cycle, nagao, petersen, random_multigraph, truncate, two_cusp, CuspidalGraph,
};
use cuspzeta::ihara::{
    bass_identity_check, divergence_witness, minor_net, net_limit, NetMode, Schedule,
};
use cuspzeta::lfunc::{l_euler_series, lfunction, BlockAssignment};
use cuspzeta::spectral::{pgt_check, spectral_report, ROOT_TOLERANCE};
use cuspzeta::zeta::{
    applicable_methods, closure_trace_excess, traces, zeta_finite, zeta_via_closure,
    zeta_via_finite, zeta_via_pade, Method, ZetaResult,
};

type Check = Result<Vec<String>, String>;
type Criterion = (u32, fn() -> Check, u64);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn poly(c: &[i64]) -> Poly {
    Poly::from_ints(c)
}

fn rf(n: &[i64], d: &[i64]) -> RatFunc {
    RatFunc::new(poly(n), poly(d)).unwrap()
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// `(1 − q²u²)/(1 − qu²)`
fn single_cusp_form(q: i64) -> RatFunc {
    rf(&[1, 0, -q * q], &[1, 0, -q])
}

fn closed_forms() -> Check {
    let mut notes = Vec::new();
    for q in [2u64, 3, 5] {
        let g = e(nagao(&[q], None))?;
        let want = single_cusp_form(q as i64);
        let c = e(zeta_via_closure(&g))?.inverse_zeta;
        let p = e(zeta_via_pade(&g, 16))?.inverse_zeta;
        ensure!(c == want, "q={q}: closure gave {c}");
        ensure!(p == want, "q={q}: Padé gave {p}");
        notes.push(format!("q={q}: {want}"));
    }
    Ok(notes)
}

fn biregular() -> Check {
    let mut notes = Vec::new();
    for (q0, q1) in [(2i64, 3i64), (3, 2), (4, 9)] {
        let g = e(nagao(&[q0 as u64, q1 as u64], None))?;
        let z = e(zeta_via_pade(&g, 20))?.inverse_zeta;
        // (1 + q0 u²)(1 − q0 q1 u²) / (1 − q0 q1 u⁴)
        let num = &poly(&[1, 0, q0]) * &poly(&[1, 0, -q0 * q1]);
        let want = e(RatFunc::new(num, poly(&[1, 0, 0, 0, -q0 * q1])))?;
        ensure!(z == want, "({q0},{q1}): Padé gave {z}, expected {want}");
        let printed = e(RatFunc::new(
            poly(&[1, 0, 0, 0, -q0 * q1]),
            &poly(&[1, 0, q0]) * &poly(&[1, 0, -q0 * q1]),
        ))?;
        ensure!(e(z.recip())? == printed, "({q0},{q1}): reciprocal mismatch");
        notes.push(format!("({q0},{q1}): Z^-1 = {z}; Z = {printed}"));
    }
    for q in [2u64, 3, 5] {
        let g = e(nagao(&[q, q], None))?;
        let z = e(zeta_via_pade(&g, 20))?.inverse_zeta;
        ensure!(z == single_cusp_form(q as i64), "q0=q1={q}: gave {z}");
    }
    notes.push("q0 = q1 reduces to the single-parameter form".into());
    Ok(notes)
}

fn biregular_traces() -> Check {
    let (q0, q1) = (2i64, 3i64);
    let g = e(nagao(&[q0 as u64, q1 as u64], None))?;
    let t = traces(&g, 8);
    let pow = |b: i64, k: u32| BigInt::from(b).pow(k);
    let mut notes = Vec::new();
    for k in 1..=2u32 {
        // N_{4k−2} = 2 (q0 q1)^{2k−1} − 2 q0^{2k−1}
        let n = 4 * k as usize - 2;
        let want = 2 * pow(q0 * q1, 2 * k - 1) - 2 * pow(q0, 2 * k - 1);
        ensure!(
            t.get(n) == &want,
            "N_{n} = {} but closed form gives {want}",
            t.get(n)
        );
    }
    let expected = [(2, 8), (4, 56), (6, 416), (8, 2480)];
    for (m, v) in expected {
        ensure!(
            t.get(m) == &BigInt::from(v),
            "N_{m} = {}, expected {v}",
            t.get(m)
        );
    }
    ensure!(
        t.get(2) == &BigInt::from(2 * q0 * (q1 - 1)),
        "initial condition N_2 = 2 q0 (q1 − 1) fails"
    );
    for m in [1, 3, 5, 7] {
        ensure!(t.get(m) == &BigInt::from(0), "N_{m} should vanish");
    }
    notes.push("N_2, N_4, N_6, N_8 = 8, 56, 416, 2480".into());
    Ok(notes)
}

fn path_counts() -> Check {
    let g = e(nagao(&[2], None))?;
    let counts: Vec<usize> = (1..=6)
        .map(|k| enumerate_closed_paths(&g, 2 * k).len())
        .collect();
    ensure!(counts == [2, 6, 14, 30, 62, 126], "counts {counts:?}");
    for w in counts.windows(2) {
        ensure!(w[1] == 2 * w[0] + 2, "recursion fails on {w:?}");
    }
    Ok(vec![format!("lengths 2..12: {counts:?}")])
}

fn bass() -> Check {
    let mut checked = 0;
    for q in [2u64, 3] {
        let g = e(nagao(&[q], None))?;
        for d in 0..=6 {
            let r = bass_identity_check(&truncate(&g, d));
            ensure!(r.passed, "nagao({q}) depth {d}: {} vs {}", r.lhs, r.rhs);
            checked += 1;
        }
    }
    for (name, g) in [("K4", complete(4)), ("Petersen", petersen())] {
        let r = bass_identity_check(&truncate(&g, 0));
        ensure!(r.passed, "{name}: {} vs {}", r.lhs, r.rhs);
        checked += 1;
    }
    for seed in 0..20u64 {
        let g = random_multigraph(seed, 4 + (seed % 5) as usize, 2 + (seed % 4) as usize);
        let t = truncate(&g, 0);
        ensure!(t.components() == 1, "seed {seed}: disconnected");
        let r = bass_identity_check(&t);
        ensure!(r.passed, "random seed {seed}: {} vs {}", r.lhs, r.rhs);
        checked += 1;
    }
    // (1 − u²)²(1 − u)(1 − 2u)(1 + u + 2u²)³
    let mut want = &poly(&[1, 0, -1]).pow(2) * &poly(&[1, -1]);
    want = &want * &poly(&[1, -2]);
    want = &want * &poly(&[1, 1, 2]).pow(3);
    let k4 = zeta_finite(&truncate(&complete(4), 0));
    ensure!(k4 == RatFunc::from_poly(want.clone()), "K4 gave {k4}");
    Ok(vec![
        format!("{checked} instances pass"),
        format!("K4: {want}"),
    ])
}

fn corpus() -> Result<Vec<(&'static str, CuspidalGraph)>, String> {
    Ok(vec![
        ("nagao(2)", e(nagao(&[2], None))?),
        ("nagao([2,3])", e(nagao(&[2, 3], None))?),
        ("two_cusp(2)", two_cusp(2)),
    ])
}

fn cycles_vs_traces() -> Check {
    let mut notes = Vec::new();
    for (name, g) in corpus()? {
        let census = cycle_census(&g, 8);
        let t = traces(&g, 8);
        for m in 1..=8 {
            let n = e(n_via_cycles(&census, m))?;
            ensure!(
                &n == t.get(m),
                "{name}: N_{m} cycles {n} traces {}",
                t.get(m)
            );
        }
        let euler = e(euler_product_series(&census, 8))?;
        let series = t.inverse_zeta_series();
        ensure!(
            euler.first_mismatch(&series).is_none(),
            "{name}: Euler product differs"
        );
        notes.push(format!(
            "{name}: {} prime classes through length 8",
            census.primes().count()
        ));
    }
    Ok(notes)
}

fn trace_excess() -> Check {
    for q in [2u64, 3] {
        let g = e(nagao(&[q], None))?;
        for depth in 2..=5 {
            let x = e(closure_trace_excess(&g, depth, 10))?;
            for (i, v) in x.iter().enumerate() {
                let m = i + 1;
                let want = if m % 2 == 0 {
                    2 * BigInt::from(q).pow(m as u32 / 2)
                } else {
                    BigInt::from(0)
                };
                ensure!(
                    v == &want,
                    "q={q} N={depth} m={m}: excess {v}, expected {want}"
                );
            }
        }
    }
    Ok(vec!["excess is 2·q^(m/2) for even m, 0 for odd m".into()])
}

fn minor_nets() -> Check {
    let g = e(nagao(&[2], None))?;
    let u = rat(1, 10);
    let z = e(zeta_via_closure(&g))?;
    let one = rat(1, 1);
    let x = rat(1, 50); // 2u²
    let tail =
        |d: usize| -> Rational { rat(48, 49) + num_traits::pow(x.clone(), d + 1) / (&one - &x) };

    let transfer = e(minor_net(&g, &u, NetMode::Transfer, Schedule::Connected, 8))?;
    let vertex = e(minor_net(&g, &u, NetMode::Vertex, Schedule::Connected, 8))?;
    let vfactor = &one - &u * &u;
    for s in &transfer {
        ensure!(
            s.value == tail(s.depth),
            "transfer depth {}: {}",
            s.depth,
            format_rational(&s.value)
        );
    }
    for s in &vertex {
        ensure!(
            s.value == &tail(s.depth) * &vfactor,
            "vertex depth {}: {}",
            s.depth,
            format_rational(&s.value)
        );
    }
    let vlimit = e(net_limit(&g, &z.inverse_zeta, &u, NetMode::Vertex))?;
    let tlimit = e(net_limit(&g, &z.inverse_zeta, &u, NetMode::Transfer))?;
    ensure!(
        vlimit == rat(1188, 1225),
        "vertex limit {}",
        format_rational(&vlimit)
    );
    ensure!(
        tlimit == rat(48, 49),
        "transfer limit {}",
        format_rational(&tlimit)
    );
    let last = vertex.last().ok_or("empty net")?;
    let gap = (&last.value - &vlimit)
        .to_f64()
        .ok_or("residual overflow")?
        .abs();
    ensure!(gap.lt(&1e-12), "depth 8 residual {gap:e}");

    let w = e(divergence_witness(&g, &u, 8))?;
    ensure!(
        w.ratio == Some(rat(99, 100)),
        "ratio {:?}",
        w.ratio.as_ref().map(format_rational)
    );
    let adv = e(minor_net(
        &g,
        &u,
        NetMode::Transfer,
        Schedule::Adversarial,
        8,
    ))?;
    for s in adv.iter().filter(|s| !s.connected) {
        ensure!(
            s.value == tail(s.depth),
            "transfer mode sees the detached segment at {}",
            s.depth
        );
    }
    Ok(vec![
        format!("vertex limit 1188/1225, depth 8 residual {gap:.1e}"),
        "transfer limit 48/49".into(),
        "detached subsequence ratio 99/100".into(),
    ])
}

fn exact_zeta(g: &CuspidalGraph) -> Result<ZetaResult, String> {
    let methods = applicable_methods(g);
    if !g.has_cusps() {
        e(zeta_via_finite(g))
    } else if methods.contains(&Method::Closure) {
        e(zeta_via_closure(g))
    } else {
        e(zeta_via_pade(g, 20))
    }
}

fn lfunctions() -> Check {
    let mut notes = Vec::new();
    let mut graphs = corpus()?;
    graphs.push(("nagao(3)", e(nagao(&[3], None))?));
    graphs.push(("K4", complete(4)));
    graphs.push(("C3", cycle(3)));
    for (name, g) in &graphs {
        let z = exact_zeta(g)?.inverse_zeta;
        let order = 2 * z
            .numerator()
            .degree()
            .unwrap_or(0)
            .max(z.denominator().degree().unwrap_or(0))
            + 6;
        let l = e(lfunction(g, &BlockAssignment::trivial(), order))?;
        ensure!(l == z, "{name}: trivial L {l} vs Z^-1 {z}");
    }
    notes.push(format!("trivial representation on {} graphs", graphs.len()));

    let g = cycle(3);
    let sign = r#"{"blocks":[
        {"from":"e0","to":"e1","matrix":[["-1"]]},{"from":"e1","to":"e2","matrix":[["-1"]]},
        {"from":"e2","to":"e0","matrix":[["-1"]]},{"from":"e1'","to":"e0'","matrix":[["-1"]]},
        {"from":"e2'","to":"e1'","matrix":[["-1"]]},{"from":"e0'","to":"e2'","matrix":[["-1"]]}]}"#;
    let swap = r#"{"default_dim":2,"blocks":[
        {"from":"e2","to":"e0","matrix":[["0","1"],["1","0"]]},
        {"from":"e0'","to":"e2'","matrix":[["0","1"],["1","0"]]}]}"#;
    let census = cycle_census(&g, 6);
    for (name, doc, order, want) in [
        ("sign", sign, 16, poly(&[1, 0, 0, 1]).pow(2)),
        ("swap", swap, 28, poly(&[1, 0, 0, 0, 0, 0, -1]).pow(2)),
    ] {
        let b = e(BlockAssignment::from_json(&g, doc))?;
        let l = e(lfunction(&g, &b, order))?;
        ensure!(l == RatFunc::from_poly(want.clone()), "{name}: {l}");
        let euler = e(l_euler_series(&g, &census, &b, 6))?;
        ensure!(
            euler == Series::from_poly(&want, 6),
            "{name}: Euler product differs"
        );
        notes.push(format!("{name}: {l}"));
    }
    Ok(notes)
}

fn spectral() -> Check {
    let g = e(nagao(&[2], None))?;
    let z = exact_zeta(&g)?;
    let r = e(spectral_report(&z, &g))?;
    ensure!(
        (r.dominant_modulus - 2.0).abs().le(&ROOT_TOLERANCE),
        "max|a| = {}",
        r.dominant_modulus
    );
    ensure!(
        r.max_modulus_is_q == Some(true),
        "max|a| is not certified as q"
    );
    ensure!(r.delta == Some(2), "delta {:?}", r.delta);
    let t = pgt_check(&traces(&g, 12), &r).map_err(|e| e.to_string())?;
    ensure!(t.exact, "residuals not exact");
    ensure!(t.rows.len() == 12, "{} rows", t.rows.len());
    for row in &t.rows {
        let want = if row.m % 2 == 0 {
            -2 * BigInt::from(2).pow(row.m as u32 / 2)
        } else {
            BigInt::from(0)
        };
        ensure!(
            row.exact_residual.as_ref() == Some(&want),
            "R_{} = {}",
            row.m,
            row.residual
        );
    }
    ensure!(applicable_methods(&g).len() >= 2, "expected an exact route");
    Ok(vec![
        format!("max|a_j| = {:.12}, delta 2", r.dominant_modulus),
        "R_m = -2·2^(m/2)·[m even] for m ≤ 12".into(),
    ])
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, closed_forms, 5),
        (2, biregular, 30),
        (3, biregular_traces, 60),
        (4, path_counts, 60),
        (5, bass, 300),
        (6, cycles_vs_traces, 300),
        (7, trace_excess, 300),
        (8, minor_nets, 300),
        (9, lfunctions, 300),
        (10, spectral, 300),
    ];
    let mut failures = 0;
    for (n, f, limit) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(notes) if elapsed > Duration::from_secs(limit) => Err(format!(
                "took {elapsed:.1?}, limit {limit}s ({})",
                notes.join("; ")
            )),
            other => other,
        };
        match outcome {
            Ok(notes) => {
                println!("criterion {n}: PASS ({elapsed:.2?})");
                for note in notes {
                    println!("    {note}");
                }
            }
            Err(msg) => {
                failures += 1;
                println!("criterion {n}: FAIL ({elapsed:.2?})");
                println!("    {msg}");
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
