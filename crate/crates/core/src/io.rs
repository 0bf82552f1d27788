//! Deterministic CSV and JSON output.
//!
//! Floats are written with 17 significant digits in lowercase scientific
//! notation with a signed exponent (`-1.2345678901234567e-3`,
//! `2.5000000000000000e+0`), so that identical runs produce
//! byte-identical files. JSON objects have sorted keys; non-finite floats
//! become `null`.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Map, Number, Value};

use crate::dirac::{SpectrumLevel, SpectrumTable, WavefunctionGrid};
use crate::symbolic::VerificationReport;
use crate::uncertainty::UncertaintyReport;

/// `x` with 17 significant digits, lowercase scientific.
pub fn format_float(x: f64) -> String {
    let s = format!("{x:.16e}");
    match s.split_once('e') {
        Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
        _ => s,
    }
}

/// A JSON number carrying the [`format_float`] text verbatim.
pub fn json_float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Number::from_str(&format_float(x)).map_or(Value::Null, Value::Number)
}

fn json_opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, json_float)
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub const SPECTRUM_COLUMNS: [&str; 6] = ["n", "tau", "K", "p0_tilde", "e_n", "E_over_mc2"];
pub const WAVEFUNCTION_COLUMNS: [&str; 6] = ["p_tilde", "q", "psi1", "psi2", "f", "weight"];

pub fn spectrum_csv(table: &SpectrumTable<f64>) -> String {
    let mut out = SPECTRUM_COLUMNS.join(",");
    out.push('\n');
    for l in &table.levels {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            l.qn.n(),
            l.qn.tau(),
            format_float(l.k),
            format_float(l.p0_tilde),
            format_float(l.e_n),
            format_float(l.e_over_mc2)
        );
    }
    out
}

pub fn level_json(l: &SpectrumLevel<f64>) -> Value {
    let mut m = Map::new();
    m.insert("n".into(), json!(l.qn.n()));
    m.insert("tau".into(), json!(l.qn.tau()));
    m.insert("K".into(), json_float(l.k));
    m.insert("p0_tilde".into(), json_float(l.p0_tilde));
    m.insert("e_n".into(), json_float(l.e_n));
    m.insert("E_over_mc2".into(), json_float(l.e_over_mc2));
    m.insert("E".into(), json_opt(l.energy));
    m.insert("gap_to_bound".into(), json_opt(l.gap_to_bound));
    m.insert("physical".into(), json!(l.physical));
    Value::Object(m)
}

pub fn spectrum_json(table: &SpectrumTable<f64>) -> Value {
    json!({
        "regime": table.regime,
        "unphysical": table.unphysical(),
        "monotonicity_violated": table.monotonicity_violated,
        "bounded": table.bounded,
        "closed_form_discrepancy": json_float(table.closed_form_discrepancy),
        "levels": table.levels.iter().map(level_json).collect::<Vec<_>>(),
    })
}

pub fn wavefunction_csv(state: &WavefunctionGrid<f64>) -> String {
    let g = &state.grid;
    let w = g.weight();
    let mut out = WAVEFUNCTION_COLUMNS.join(",");
    out.push('\n');
    for j in 0..g.len() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            format_float(g.p[j]),
            format_float(g.q[j]),
            format_float(state.psi1[j]),
            format_float(state.psi2[j]),
            format_float(g.f[j]),
            format_float(w)
        );
    }
    out
}

pub fn wavefunction_json(state: &WavefunctionGrid<f64>) -> Value {
    let g = &state.grid;
    let floats = |v: &[f64]| v.iter().map(|&x| json_float(x)).collect::<Vec<_>>();
    let md = &state.metadata;
    json!({
        "level": state.level.as_ref().map(level_json),
        "p0_tilde": json_float(state.p0_tilde),
        "beta_tilde": json_float(state.params.beta_tilde()),
        "omega_tilde": json_float(state.params.omega_tilde()),
        "c0": json_float(g.frame.c0()),
        "q_max": json_float(g.frame.half_width()),
        "intervals": g.intervals,
        "norm": json_float(state.norm_squared()),
        "metadata": {
            "residual_upper": json_float(md.residual_upper),
            "residual_lower": json_float(md.residual_lower),
            "eigen_residual": json_float(md.eigen_residual),
            "numerical_eigenvalue": json_opt(md.numerical_eigenvalue),
            "nodes": md.nodes,
            "derivative_error": json_float(md.derivative_error),
            "warnings": md.warnings,
        },
        "p_tilde": floats(&g.p),
        "q": floats(&g.q),
        "psi1": floats(&state.psi1),
        "psi2": floats(&state.psi2),
        "f": floats(&g.f),
        "weight": json_float(g.weight()),
    })
}

pub fn uncertainty_json(r: &UncertaintyReport<f64>) -> Value {
    let floats = |v: &[f64]| v.iter().map(|&x| json_float(x)).collect::<Vec<_>>();
    json!({
        "level": r.level.map(|q| json!({"n": q.n(), "tau": q.tau()})),
        "moments": {
            "D": r.moments.dims(),
            "mean_P": floats(r.moments.mean_p()),
            "spread_P": floats(r.moments.spread_p()),
            "meansq_P0": json_float(*r.moments.meansq_p0()),
        },
        "bound": json_float(r.bound),
        "deltaX": json_float(r.delta_x),
        "deltaP": json_float(r.delta_p),
        "product": json_float(r.product),
        "slack": json_float(r.slack),
    })
}

pub fn verification_json(report: &VerificationReport) -> Value {
    serde_json::to_value(report).expect("verification reports serialize")
}
