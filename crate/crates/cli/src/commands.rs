use std::fmt;
use std::path::Path;

use serde_json::{json, Value};

use cuspzeta::cycles::{cycle_census, n_via_cycles};
use cuspzeta::exact::{format_rational, parse_rational, Rational};
use cuspzeta::graph::{nagao, truncate, CuspidalGraph};
use cuspzeta::ihara::{
    bass_identity_check, divergence_witness, minor_net, net_limit, NetMode, Schedule,
};
use cuspzeta::lfunc::{l_euler_series, lfunction, rotation_invariance, BlockAssignment};
use cuspzeta::spectral::{pgt_check, spectral_report};
use cuspzeta::zeta::{
    applicable_methods, check_agreement, traces, zeta_with_margin, Method, ZetaResult, PADE_MARGIN,
};
use cuspzeta::Error;

use crate::args::{Cli, Command, MethodArg, ModeArg};

#[derive(Debug)]
pub enum Failure {
    /// Bad flag values.
    Input(String),
    Io(String),
    Core(Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Io(m) => f.write_str(m),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) if e.is_validation() => 1,
            Failure::Input(_) => 1,
            Failure::Core(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

/// Everything a command produces; rendered as text or as one JSON document.
pub struct Report {
    inputs: Vec<String>,
    options: Value,
    result: Value,
    lines: Vec<String>,
    diagnostics: Vec<String>,
    /// Set when a check ran to completion but did not pass.
    pub failed: Option<String>,
}

impl Report {
    fn new(inputs: &[&Path], options: Value) -> Self {
        Report {
            inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
            options,
            result: Value::Null,
            lines: Vec::new(),
            diagnostics: Vec::new(),
            failed: None,
        }
    }

    pub fn render(&self, cli: &Cli) -> String {
        if cli.json {
            let doc = json!({
                "command": cli.command.name(),
                "inputs": self.inputs,
                "options": self.options,
                "result": self.result,
                "diagnostics": self.diagnostics,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
            s.push('\n');
            s
        } else {
            let mut s = String::new();
            for l in &self.lines {
                s.push_str(l);
                s.push('\n');
            }
            for d in &self.diagnostics {
                s.push_str("note: ");
                s.push_str(d);
                s.push('\n');
            }
            s
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<CuspidalGraph> {
    Ok(CuspidalGraph::from_json(&read(path)?)?)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// An exact route when one applies, Padé otherwise.
fn best_zeta(g: &CuspidalGraph, order: usize) -> Result<ZetaResult> {
    let methods = applicable_methods(g);
    let m = [Method::FiniteDet, Method::Closure]
        .into_iter()
        .find(|m| methods.contains(m))
        .unwrap_or(Method::Pade);
    Ok(zeta_with_margin(g, m, order, PADE_MARGIN)?)
}

pub fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Validate { graph } => validate(graph),
        Command::Zeta {
            graph,
            method,
            traces,
            margin,
        } => zeta(graph, *method, *traces, *margin),
        Command::Traces { graph, traces } => trace_cmd(graph, *traces),
        Command::Cycles { graph, max_len } => cycles(graph, *max_len),
        Command::EulerCheck { graph, max_len } => euler_check(graph, *max_len),
        Command::IharaCheck { graph, max_depth } => ihara_check(graph, *max_depth),
        Command::MinorNet {
            graph,
            u,
            mode,
            adversarial,
            max_depth,
        } => minor_net_cmd(graph, u, *mode, *adversarial, *max_depth),
        Command::Lfunction {
            graph,
            blocks,
            traces,
            euler_degree,
        } => lfunction_cmd(graph, blocks, *traces, *euler_degree),
        Command::Spectrum { graph, traces } => spectrum(graph, *traces),
        Command::Pgt { graph, traces } => pgt(graph, *traces),
        Command::Nagao {
            qs,
            preperiod,
            output,
        } => nagao_cmd(qs, preperiod, output.as_deref()),
    }
}

fn validate(path: &Path) -> Result<Report> {
    let g = load_graph(path)?;
    let mut r = Report::new(&[path], json!({}));
    r.result = json!({
        "valid": true,
        "vertices": g.core_vertices().len(),
        "edges": g.core_edges().len(),
        "cusps": g.cusps().len(),
        "euler_char": g.core_euler_char(),
        "lie_type": g.lie_type(),
    });
    r.lines.push(format!(
        "valid: {} vertices, {} oriented edges, {} cusps, euler characteristic {}",
        g.core_vertices().len(),
        g.core_edges().len(),
        g.cusps().len(),
        g.core_euler_char()
    ));
    if let Some(q) = g.lie_type() {
        r.lines.push(format!("every vertex has valency {}", q + 1));
    }
    Ok(r)
}

fn zeta(path: &Path, method: MethodArg, order: usize, margin: usize) -> Result<Report> {
    let g = load_graph(path)?;
    let methods = match method {
        MethodArg::Pade => vec![Method::Pade],
        MethodArg::Closure => vec![Method::Closure],
        MethodArg::Finite => vec![Method::FiniteDet],
        MethodArg::All => applicable_methods(&g),
    };
    let results = methods
        .iter()
        .map(|&m| zeta_with_margin(&g, m, order, margin))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    check_agreement(&results)?;
    let mut r = Report::new(
        &[path],
        json!({
            "method": format!("{method:?}").to_lowercase(),
            "traces": order,
            "margin": margin,
        }),
    );
    let z = &results[0].inverse_zeta;
    r.result = json!({
        "numerator": z.numerator(),
        "denominator": z.denominator(),
        "methods": results.iter().map(to_value).collect::<Vec<_>>(),
    });
    r.lines.push(format!("Z(u)^-1 = {z}"));
    if results.len() > 1 {
        let names: Vec<String> = results.iter().map(|x| x.method.to_string()).collect();
        r.lines.push(format!("methods agree: {}", names.join(", ")));
    }
    for x in &results {
        r.diagnostics
            .extend(x.diagnostics.iter().map(|d| format!("{}: {d}", x.method)));
    }
    Ok(r)
}

fn trace_cmd(path: &Path, order: usize) -> Result<Report> {
    let g = load_graph(path)?;
    let t = traces(&g, order);
    let mut r = Report::new(&[path], json!({ "traces": order }));
    r.result = to_value(&t);
    r.lines = t
        .values
        .iter()
        .enumerate()
        .map(|(i, n)| format!("N_{} = {n}", i + 1))
        .collect();
    Ok(r)
}

fn cycles(path: &Path, max_len: usize) -> Result<Report> {
    if max_len == 0 {
        return Err(Failure::Input("--max-len must be at least 1".into()));
    }
    let g = load_graph(path)?;
    let c = cycle_census(&g, max_len);
    let mut r = Report::new(&[path], json!({ "max_len": max_len }));
    r.result = to_value(&c);
    r.lines = c.to_lines();
    Ok(r)
}

fn euler_check(path: &Path, max_len: usize) -> Result<Report> {
    if max_len == 0 {
        return Err(Failure::Input("--max-len must be at least 1".into()));
    }
    let g = load_graph(path)?;
    let census = cycle_census(&g, max_len);
    let t = traces(&g, max_len);
    let mut r = Report::new(&[path], json!({ "max_len": max_len }));
    let mut bad = Vec::new();
    for m in 1..=max_len {
        let n = n_via_cycles(&census, m)?;
        if &n != t.get(m) {
            bad.push(format!("N_{m}: cycles give {n}, traces give {}", t.get(m)));
        }
    }
    let euler = cuspzeta::cycles::euler_product_series(&census, max_len)?;
    let series = t.inverse_zeta_series();
    if let Some(k) = euler.first_mismatch(&series) {
        bad.push(format!(
            "Euler product differs from the trace series at degree {k}"
        ));
    }
    r.result = json!({
        "passed": bad.is_empty(),
        "euler_series": euler.to_strings(),
        "trace_series": series.to_strings(),
        "mismatches": bad,
    });
    if bad.is_empty() {
        r.lines.push(format!(
            "cycle counts, traces and the Euler product agree through degree {max_len}"
        ));
    } else {
        r.lines.extend(bad.iter().cloned());
        r.failed = Some(format!("{} mismatches", bad.len()));
    }
    Ok(r)
}

fn ihara_check(path: &Path, max_depth: usize) -> Result<Report> {
    let g = load_graph(path)?;
    let depths: Vec<usize> = if g.has_cusps() {
        (0..=max_depth).collect()
    } else {
        vec![0]
    };
    let mut r = Report::new(&[path], json!({ "max_depth": max_depth }));
    let mut rows = Vec::new();
    let mut failures = 0;
    for d in depths {
        let rep = bass_identity_check(&truncate(&g, d));
        r.lines.push(format!(
            "depth {d}: chi {} {}",
            rep.euler_char,
            if rep.passed { "pass" } else { "FAIL" }
        ));
        if !rep.passed {
            failures += 1;
            r.lines.push(format!("  lhs {}", rep.lhs));
            r.lines.push(format!("  rhs {}", rep.rhs));
        }
        rows.push(json!({ "depth": d, "report": rep }));
    }
    r.result = json!({ "passed": failures == 0, "truncations": rows });
    if failures > 0 {
        r.failed = Some(format!("identity fails on {failures} truncations"));
    }
    Ok(r)
}

fn minor_net_cmd(
    path: &Path,
    u: &str,
    mode: ModeArg,
    adversarial: bool,
    max_depth: usize,
) -> Result<Report> {
    let g = load_graph(path)?;
    let u: Rational = parse_rational(u).map_err(|e| Failure::Input(e.to_string()))?;
    let bound = Rational::new(1.into(), g.max_tree_valency().max(1).into());
    let abs = if u < Rational::from_integer(0.into()) {
        -u.clone()
    } else {
        u.clone()
    };
    if abs >= bound {
        return Err(Failure::Input(format!(
            "|u| = {} is outside the convergence region; use |u| < {}",
            format_rational(&abs),
            format_rational(&bound)
        )));
    }
    let net_mode = match mode {
        ModeArg::Transfer => NetMode::Transfer,
        ModeArg::Vertex => NetMode::Vertex,
    };
    let schedule = if adversarial {
        Schedule::Adversarial
    } else {
        Schedule::Connected
    };
    let samples = minor_net(&g, &u, net_mode, schedule, max_depth)?;
    let mut r = Report::new(
        &[path],
        json!({
            "u": format_rational(&u),
            "mode": net_mode,
            "schedule": schedule,
            "max_depth": max_depth,
        }),
    );
    r.lines = samples.iter().map(|s| s.to_row()).collect();
    let mut result = json!({ "samples": samples });
    match best_zeta(&g, 16).and_then(|z| Ok(net_limit(&g, &z.inverse_zeta, &u, net_mode)?)) {
        Ok(limit) => {
            r.lines
                .push(format!("connected limit {}", format_rational(&limit)));
            result["connected_limit"] = json!(format_rational(&limit));
        }
        Err(e) => r.diagnostics.push(format!("limit not computed: {e}")),
    }
    if adversarial && net_mode == NetMode::Vertex {
        let w = divergence_witness(&g, &u, max_depth)?;
        if let Some(ratio) = &w.ratio {
            r.lines.push(format!(
                "detached subsequence differs by the factor {}",
                format_rational(ratio)
            ));
        }
        result["witness"] = to_value(&w);
    }
    r.result = result;
    Ok(r)
}

fn lfunction_cmd(
    path: &Path,
    blocks: &Path,
    order: usize,
    euler_degree: Option<usize>,
) -> Result<Report> {
    let g = load_graph(path)?;
    let b = BlockAssignment::from_json(&g, &read(blocks)?)?;
    let l = lfunction(&g, &b, order)?;
    let mut r = Report::new(
        &[path, blocks],
        json!({ "traces": order, "euler_degree": euler_degree }),
    );
    r.lines.push(format!("L(u)^-1 = {l}"));
    let mut result = json!({ "numerator": l.numerator(), "denominator": l.denominator() });
    if let Some(d) = euler_degree {
        let census = cycle_census(&g, d);
        let euler = l_euler_series(&g, &census, &b, d)?;
        let series = l.to_series(d)?;
        let agree = euler.first_mismatch(&series).is_none();
        result["euler_agrees"] = json!(agree);
        if agree {
            r.lines
                .push(format!("Euler product agrees through degree {d}"));
        } else {
            r.failed = Some(format!("Euler product disagrees below degree {d}"));
        }
        let bad = rotation_invariance(&g, &census, &b)?;
        if !bad.is_empty() {
            r.diagnostics.push(format!(
                "det(1 - u^l W) depends on the rotation for {} cycles",
                bad.len()
            ));
        }
    }
    r.result = result;
    Ok(r)
}

fn spectrum(path: &Path, order: usize) -> Result<Report> {
    let g = load_graph(path)?;
    let z = best_zeta(&g, order)?;
    let rep = spectral_report(&z, &g)?;
    let mut r = Report::new(&[path], json!({ "traces": order }));
    r.lines.push(format!("Z(u)^-1 = {}", z.inverse_zeta));
    for a in &rep.a_roots {
        r.lines.push(format!(
            "a = {} {:+}i  |a| = {}  (±{}, multiplicity {})",
            a.re,
            a.im.parse::<f64>().unwrap_or(0.0),
            a.modulus,
            a.error_bound,
            a.multiplicity
        ));
    }
    r.lines
        .push(format!("dominant modulus {:.12}", rep.dominant_modulus));
    if let Some(d) = rep.delta {
        r.lines.push(format!("delta {d}"));
    }
    if let Some(e) = rep.epsilon {
        r.lines.push(format!("epsilon {e:.12}"));
    }
    r.diagnostics.extend(rep.notes.iter().cloned());
    r.diagnostics
        .extend(z.diagnostics.iter().map(|d| format!("{}: {d}", z.method)));
    r.result = to_value(&rep);
    Ok(r)
}

fn pgt(path: &Path, order: usize) -> Result<Report> {
    let g = load_graph(path)?;
    let z = best_zeta(&g, order)?;
    let rep = spectral_report(&z, &g)?;
    let t = traces(&g, order);
    let table = pgt_check(&t, &rep)?;
    let mut r = Report::new(&[path], json!({ "traces": order }));
    r.lines.push("m N_m main_term residual".into());
    r.lines.extend(table.rows.iter().map(|row| row.to_row()));
    if let Some(e) = table.epsilon_prime {
        r.lines.push(format!("epsilon' {e:.6}"));
    }
    r.diagnostics.extend(table.notes.iter().cloned());
    if !table.passed {
        r.failed = Some("residuals do not grow more slowly than the main term".into());
    }
    r.result = to_value(&table);
    Ok(r)
}

fn nagao_cmd(qs: &[u64], preperiod: &[u64], output: Option<&Path>) -> Result<Report> {
    let pre = (!preperiod.is_empty()).then_some(preperiod);
    let g = nagao(qs, pre)?;
    let doc = g.to_json();
    let inputs: Vec<&Path> = output.into_iter().collect();
    let mut r = Report::new(&inputs, json!({ "qs": qs, "preperiod": preperiod }));
    match output {
        Some(p) => {
            std::fs::write(p, format!("{doc}\n"))
                .map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            r.lines.push(format!("wrote {}", p.display()));
        }
        None => r.lines.push(doc),
    }
    r.result = to_value(&g.to_doc());
    Ok(r)
}
