//! Subcommand execution and the `report.json` contract.

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use minlen_core::dirac::{
    k_factor, spectrum_table, wavefunction, DOParams, GridSpec, QuantumNumber, Regime, Scheme,
};
use minlen_core::io::{
    format_float, json_float, spectrum_csv, spectrum_json, to_json_string, uncertainty_json,
    verification_json, wavefunction_csv, wavefunction_json,
};
use minlen_core::kinematics::Spacetime;
use minlen_core::symbolic::{
    verify_algebra, verify_kempf, verify_poincare, verify_snyder, verify_transformations, Algebra,
    SymbolicParams, VerificationReport,
};
use minlen_core::uncertainty::{UncertaintyReport, NORMALIZATION_TOLERANCE};
use minlen_core::Rational;
use serde_json::{json, Map, Value};

use crate::{Case, Command, DoArgs, Format, GridArgs, OutputArgs, SchemeArg};

pub const REPORT_FILE: &str = "report.json";

const SPECTRUM_TOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-6;
const GROUND_TOL: f64 = 1e-8;
const SLACK_TOL: f64 = 1e-10;
const LINEAR_RATIO: (f64, f64) = (8.0, 12.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Usage,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Self::Pass => 0,
            Self::Fail => 1,
            Self::Usage => 2,
        }
    }

    fn status(self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::Usage => "usage_error",
        }
    }
}

#[derive(Debug, Clone)]
struct Check {
    name: String,
    pass: bool,
    value: Option<f64>,
    threshold: Option<f64>,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            pass: value <= threshold,
            value: Some(value),
            threshold: Some(threshold),
        }
    }

    fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            pass: value >= threshold,
            value: Some(value),
            threshold: Some(threshold),
        }
    }

    fn flag(name: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            pass,
            value: None,
            threshold: None,
        }
    }

    fn json(&self) -> Value {
        json!({
            "name": self.name,
            "pass": self.pass,
            "value": self.value.map_or(Value::Null, json_float),
            "threshold": self.threshold.map_or(Value::Null, json_float),
        })
    }
}

/// Everything one invocation writes.
#[derive(Debug, Clone)]
pub struct Report {
    command: String,
    out_dir: Option<PathBuf>,
    settings: Map<String, Value>,
    checks: Vec<Check>,
    flags: Map<String, Value>,
    files: Vec<(String, String)>,
    error: Option<String>,
    usage: bool,
}

impl Report {
    fn new(command: &str, out: &OutputArgs) -> Self {
        Self {
            command: command.into(),
            out_dir: Some(out.out_dir.clone()),
            settings: Map::new(),
            checks: Vec::new(),
            flags: Map::new(),
            files: Vec::new(),
            error: None,
            usage: false,
        }
    }

    pub fn usage(command: String, message: String) -> Self {
        Self {
            command,
            out_dir: None,
            settings: Map::new(),
            checks: Vec::new(),
            flags: Map::new(),
            files: Vec::new(),
            error: Some(message),
            usage: true,
        }
    }

    pub fn with_out_dir(mut self, dir: PathBuf) -> Self {
        self.out_dir = Some(dir);
        self
    }

    fn set(&mut self, key: &str, value: Value) {
        self.settings.insert(key.into(), value);
    }

    fn file(&mut self, name: String, contents: String) {
        self.files.push((name, contents));
    }

    fn usage_error(&mut self, message: impl Into<String>) {
        self.usage = true;
        self.error = Some(message.into());
    }

    fn failure(&mut self, message: impl Into<String>) {
        self.error = Some(message.into());
    }

    pub fn outcome(&self) -> Outcome {
        if self.usage {
            Outcome::Usage
        } else if self.error.is_some() || self.checks.iter().any(|c| !c.pass) {
            Outcome::Fail
        } else {
            Outcome::Pass
        }
    }

    pub fn error_message(&self) -> Option<&str> {
        self.error.as_deref()
    }

    fn json(&self) -> Value {
        json!({
            "command": self.command,
            "status": self.outcome().status(),
            "exit_code": self.outcome().code(),
            "settings": Value::Object(self.settings.clone()),
            "checks": self.checks.iter().map(Check::json).collect::<Vec<_>>(),
            "flags": Value::Object(self.flags.clone()),
            "outputs": self.files.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
            "error": self.error,
        })
    }

    /// Writes the data files, then `report.json`.
    pub fn write(&self) -> Result<()> {
        let Some(dir) = &self.out_dir else {
            return Ok(());
        };
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (name, contents) in &self.files {
            let path = dir.join(name);
            fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        }
        let path = dir.join(REPORT_FILE);
        fs::write(&path, to_json_string(&self.json())).with_context(|| format!("writing {}", path.display()))
    }

    pub fn summary_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self
            .checks
            .iter()
            .map(|c| {
                let value = c.value.map(format_float).unwrap_or_default();
                format!("{} {} {}", if c.pass { "PASS" } else { "FAIL" }, c.name, value)
                    .trim_end()
                    .to_string()
            })
            .collect();
        lines.push(format!("status: {}", self.outcome().status()));
        lines
    }
}

pub fn run(command: &Command) -> Report {
    match command {
        Command::VerifyAlgebra { dims, case, out } => run_verify(usize::from(*dims), *case, out),
        Command::Spectrum {
            params,
            n_max,
            diagnostic,
            out,
        } => run_spectrum(params, *n_max, *diagnostic, out),
        Command::Wavefunction {
            params,
            n,
            tau,
            grid,
            out,
        } => run_wavefunction(params, *n, *tau, grid, out),
        Command::Uncertainty {
            params,
            n_max,
            grid,
            out,
        } => run_uncertainty(params, *n_max, grid, out),
        Command::Limits {
            beta_values,
            omega_tilde,
            n_max,
            out,
        } => run_limits(&beta_values.0, *omega_tilde, *n_max, out),
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn common_settings(report: &mut Report, out: &OutputArgs) {
    report.set("format", json!(format_name(out.format)));
    report.set("out_dir", json!(out.out_dir.display().to_string()));
    report.set("tol", out.tol.map_or(Value::Null, json_float));
}

fn grid_spec(report: &mut Report, grid: &GridArgs) -> Option<GridSpec> {
    let scheme = match grid.scheme {
        SchemeArg::Central2 => Scheme::Central2,
        SchemeArg::Central4 => Scheme::Central4,
    };
    report.set(
        "grid",
        json!({
            "size": grid.grid_size,
            "refinements": grid.refinements,
            "scheme": format!("{:?}", grid.scheme).to_lowercase(),
        }),
    );
    match GridSpec::new(grid.grid_size as usize, grid.refinements) {
        Ok(spec) => Some(spec.with_scheme(scheme)),
        Err(e) => {
            report.usage_error(e.to_string());
            None
        }
    }
}

fn do_params(report: &mut Report, p: &DoArgs, regime: Regime) -> Option<DOParams<f64>> {
    report.set("beta_tilde", json_float(p.beta_tilde));
    report.set("omega_tilde", json_float(p.omega_tilde));
    match DOParams::with_regime(p.beta_tilde, p.omega_tilde, regime) {
        Ok(params) => Some(params),
        Err(e) => {
            report.usage_error(e.to_string());
            None
        }
    }
}

fn run_verify(dims: usize, case: Case, out: &OutputArgs) -> Report {
    let mut report = Report::new("verify-algebra", out);
    common_settings(&mut report, out);
    report.set("dims", json!(dims));
    report.set("case", json!(format!("{case:?}").to_lowercase()));
    if case == Case::Snyder && dims != 3 {
        report.usage_error(format!("the Snyder case needs --dims 3, got {dims}"));
        return report;
    }
    let st = Spacetime::new(dims).expect("dims checked by the parser");
    let mut suites: Vec<(&str, VerificationReport)> = Vec::new();
    let computed = match case {
        Case::Symbolic => {
            let alg = Algebra::<Rational>::minkowski(st, SymbolicParams::symbolic());
            suites.push(("algebra", verify_algebra(&alg)));
            suites.push(("poincare", verify_poincare(&alg)));
            suites.push(("transformations", verify_transformations(&alg)));
            Ok(())
        }
        Case::Undeformed => {
            let alg = Algebra::<Rational>::minkowski(st, SymbolicParams::undeformed());
            suites.push(("algebra", verify_algebra(&alg)));
            suites.push(("poincare", verify_poincare(&alg)));
            Ok(())
        }
        Case::Snyder => {
            let alg = Algebra::<Rational>::minkowski(st, SymbolicParams::snyder());
            suites.push(("algebra", verify_algebra(&alg)));
            verify_snyder::<Rational>(dims).map(|r| suites.push(("snyder", r)))
        }
        Case::Kempf => verify_kempf::<Rational>(dims).map(|r| suites.push(("kempf", r))),
    };
    if let Err(e) = computed {
        report.failure(e.to_string());
    }
    let mut all = VerificationReport::default();
    for (name, suite) in suites {
        let failures = suite.failures().count();
        report.checks.push(Check {
            name: name.into(),
            pass: suite.all_pass(),
            value: Some(failures as f64),
            threshold: Some(0.0),
        });
        all.extend(suite);
    }
    report.flags.insert("identities".into(), json!(all.entries.len()));
    let contents = match out.format {
        Format::Json => to_json_string(&verification_json(&all)),
        Format::Csv => {
            let mut s = String::from("identity_id,latex_tag,pass,residual_term_count\n");
            for e in &all.entries {
                s.push_str(&format!(
                    "{},\"{}\",{},{}\n",
                    e.identity_id,
                    e.latex_tag.replace('"', "\"\""),
                    e.pass,
                    e.residual_term_count
                ));
            }
            s
        }
    };
    report.file(format!("verification.{}", format_name(out.format)), contents);
    report
}

fn run_spectrum(p: &DoArgs, n_max: u64, diagnostic: bool, out: &OutputArgs) -> Report {
    let mut report = Report::new("spectrum", out);
    common_settings(&mut report, out);
    report.set("n_max", json!(n_max));
    report.set("diagnostic", json!(diagnostic));
    let regime = if diagnostic { Regime::Diagnostic } else { Regime::Physical };
    let Some(params) = do_params(&mut report, p, regime) else {
        return report;
    };
    let tol = out.tol.unwrap_or(SPECTRUM_TOL);
    let table = spectrum_table(&params, n_max);

    let consistency = table
        .levels
        .iter()
        .map(|l| {
            let k = k_factor(&params, l.qn.n());
            (l.e_n - (l.p0_tilde * l.p0_tilde - 1.0)).abs() / (k + l.p0_tilde * l.p0_tilde)
        })
        .fold(0.0, f64::max);
    report.checks.push(Check::at_most("self_consistency", consistency, tol));
    report.flags.insert("unphysical".into(), json!(table.unphysical()));
    report
        .flags
        .insert("monotonicity_violated".into(), json!(table.monotonicity_violated));
    report.flags.insert("bounded".into(), json!(table.bounded));
    if !table.unphysical() {
        let ground = table.levels[0].e_over_mc2;
        report.checks.push(Check::at_most("ground_state_rest_energy", (ground - 1.0).abs(), tol));
        report
            .checks
            .push(Check::flag("strictly_increasing", !table.monotonicity_violated));
        report.checks.push(Check::flag("bounded", table.bounded));
        if params.beta_tilde() > 0.0 {
            report
                .checks
                .push(Check::at_most("closed_form_agreement", table.closed_form_discrepancy, tol));
        }
    }
    let contents = match out.format {
        Format::Csv => spectrum_csv(&table),
        Format::Json => to_json_string(&spectrum_json(&table)),
    };
    report.file(format!("spectrum.{}", format_name(out.format)), contents);
    report
}

fn run_wavefunction(p: &DoArgs, n: u64, tau: i8, grid: &GridArgs, out: &OutputArgs) -> Report {
    let mut report = Report::new("wavefunction", out);
    common_settings(&mut report, out);
    report.set("n", json!(n));
    report.set("tau", json!(tau));
    let spec = grid_spec(&mut report, grid);
    let params = do_params(&mut report, p, Regime::Physical);
    let qn = match QuantumNumber::new(n, tau) {
        Ok(q) => Some(q),
        Err(e) => {
            report.usage_error(e.to_string());
            None
        }
    };
    let (Some(spec), Some(params), Some(qn)) = (spec, params, qn) else {
        return report;
    };
    let state = match wavefunction(&params, qn, &spec) {
        Ok(s) => s,
        Err(e) => {
            report.failure(e.to_string());
            return report;
        }
    };
    let tol = out.tol.unwrap_or(RESIDUAL_TOL);
    let md = &state.metadata;
    report
        .checks
        .push(Check::at_most("normalization", (state.norm_squared() - 1.0).abs(), NORMALIZATION_TOLERANCE));
    if n == 0 {
        report.checks.push(Check::at_most("ground_state_residual", md.residual_lower, GROUND_TOL));
    } else {
        report.checks.push(Check::at_most("residual_upper", md.residual_upper, tol));
        report.checks.push(Check::at_most("residual_lower", md.residual_lower, tol));
    }
    report.checks.push(Check::at_most("nodes", (md.nodes as f64 - n as f64).abs(), 0.0));
    report.flags.insert("warnings".into(), json!(md.warnings));
    let tag = if tau > 0 { "p" } else { "m" };
    let contents = match out.format {
        Format::Csv => wavefunction_csv(&state),
        Format::Json => to_json_string(&wavefunction_json(&state)),
    };
    report.file(format!("wavefunction_n{n}_tau{tag}.{}", format_name(out.format)), contents);
    report
}

fn run_uncertainty(p: &DoArgs, n_max: u64, grid: &GridArgs, out: &OutputArgs) -> Report {
    let mut report = Report::new("uncertainty", out);
    common_settings(&mut report, out);
    report.set("n_max", json!(n_max));
    let spec = grid_spec(&mut report, grid);
    let params = do_params(&mut report, p, Regime::Physical);
    let (Some(spec), Some(params)) = (spec, params) else {
        return report;
    };
    let tol = out.tol.unwrap_or(SLACK_TOL);
    let mut rows = Vec::new();
    for qn in QuantumNumber::all(n_max) {
        match wavefunction(&params, qn, &spec).and_then(|s| UncertaintyReport::for_state(&s)) {
            Ok(r) => rows.push(r),
            Err(e) => {
                report.failure(format!("{qn}: {e}"));
                return report;
            }
        }
    }
    let worst = rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    report.checks.push(Check::at_least("bound_respected", worst, -tol));
    let contents = match out.format {
        Format::Json => to_json_string(&Value::Array(rows.iter().map(uncertainty_json).collect())),
        Format::Csv => {
            let mut s = String::from("n,tau,deltaX,deltaP,product,bound,slack\n");
            for r in &rows {
                let q = r.level.expect("computed states carry their level");
                s.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    q.n(),
                    q.tau(),
                    format_float(r.delta_x),
                    format_float(r.delta_p),
                    format_float(r.product),
                    format_float(r.bound),
                    format_float(r.slack)
                ));
            }
            s
        }
    };
    report.file(format!("uncertainty.{}", format_name(out.format)), contents);
    report
}

fn run_limits(betas: &[f64], omega: f64, n_max: u64, out: &OutputArgs) -> Report {
    let mut report = Report::new("limits", out);
    common_settings(&mut report, out);
    report.set("beta_values", Value::Array(betas.iter().map(|&b| json_float(b)).collect()));
    report.set("omega_tilde", json_float(omega));
    report.set("n_max", json!(n_max));
    if betas.len() < 2 {
        report.usage_error("--beta-values needs at least two entries");
        return report;
    }
    let mut errors = Vec::with_capacity(betas.len());
    for &b in betas {
        let params = match DOParams::new(b, omega) {
            Ok(p) => p,
            Err(e) => {
                report.usage_error(e.to_string());
                return report;
            }
        };
        let table = spectrum_table(&params, n_max);
        let err = table
            .levels
            .iter()
            .filter(|l| l.qn.tau() > 0)
            .map(|l| (l.e_over_mc2 - (1.0 + 2.0 * omega * l.qn.n() as f64).sqrt()).abs())
            .fold(0.0, f64::max);
        errors.push(err);
    }
    let ratios: Vec<Option<f64>> = std::iter::once(None)
        .chain(errors.windows(2).map(|w| Some(w[0] / w[1])))
        .collect();
    for (i, r) in ratios.iter().enumerate().skip(1) {
        let r = r.expect("ratios after the first row");
        let name = format!("linear_ratio[{}]", i);
        report.checks.push(Check {
            name,
            pass: (LINEAR_RATIO.0..=LINEAR_RATIO.1).contains(&r),
            value: Some(r),
            threshold: None,
        });
    }
    report.flags.insert(
        "ratio_window".into(),
        json!([json_float(LINEAR_RATIO.0), json_float(LINEAR_RATIO.1)]),
    );
    let contents = match out.format {
        Format::Csv => {
            let mut s = String::from("beta_tilde,max_error,ratio\n");
            for ((b, e), r) in betas.iter().zip(&errors).zip(&ratios) {
                s.push_str(&format!(
                    "{},{},{}\n",
                    format_float(*b),
                    format_float(*e),
                    r.map(format_float).unwrap_or_default()
                ));
            }
            s
        }
        Format::Json => to_json_string(&Value::Array(
            betas
                .iter()
                .zip(&errors)
                .zip(&ratios)
                .map(|((b, e), r)| {
                    json!({
                        "beta_tilde": json_float(*b),
                        "max_error": json_float(*e),
                        "ratio": r.map_or(Value::Null, json_float),
                    })
                })
                .collect(),
        )),
    };
    report.file(format!("limits.{}", format_name(out.format)), contents);
    report
}
