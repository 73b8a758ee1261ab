use crate::parse::Axis;
use riemann_aux::audit::{filter_items, render_table, run_suite, AuditConfig};
use riemann_aux::evaluate::{auto_choice, evaluate, Method};
use riemann_aux::expansion::{assemble, eta_frame};
use riemann_aux::region::{bound_U, remainder_certificate, zero_free_verdict, RegionParams};
use riemann_aux::zeros::{scan_region_report, write_csv, write_jsonl, Rectangle};
use riemann_aux::{Complex64, Error, ExtComplex};
use serde::Serialize;
use serde_json::{json, Value};
use std::f64::consts::LN_10;
use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration: exit 2.
    Usage(String),
    /// Evaluation or audit failure: exit 1.
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Compute(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) => CliError::Usage(e.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Compute(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Debug, Serialize)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

/// What a subcommand produced: JSON payload plus its plain-text rendering.
pub struct Outcome {
    pub payload: Value,
    pub text: String,
    pub diagnostics: Vec<String>,
    /// Computation finished but reported failure (e.g. an audit item failed).
    pub failed: bool,
}

impl Outcome {
    fn ok(payload: Value, text: String) -> Self {
        Self {
            payload,
            text,
            diagnostics: Vec::new(),
            failed: false,
        }
    }
}

fn load_params(config: Option<&Path>) -> Result<RegionParams, CliError> {
    match config {
        Some(p) => Ok(RegionParams::load(p)?),
        None => Ok(RegionParams::default()),
    }
}

/// Decimal rendering that survives values outside binary64 range.
fn show(v: &ExtComplex) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let e10 = v.log10_abs().floor();
    if e10.abs() < 300.0 {
        let z = v.to_complex();
        return format!("{:.16e} {:+.16e}i", z.re, z.im);
    }
    let m = v.scaled(e10 * LN_10);
    format!("({:.16} {:+.16}i)e{}", m.re, m.im, e10 as i64)
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn eval(s: Complex64, method: Method, tol: f64) -> Result<Outcome, CliError> {
    let e = evaluate(s, method, tol)?;
    let z = e.value.to_complex();
    let err = e.est_error.abs();
    let payload = json!({
        "s": [s.re, s.im],
        "re": finite_or_null(z.re),
        "im": finite_or_null(z.im),
        "log_modulus": finite_or_null(e.value.log_modulus()),
        "phase": e.value.phase(),
        "method_used": e.method_used,
        "est_error": finite_or_null(err),
        "log10_est_error": finite_or_null(e.est_error.log10_abs()),
    });
    let text = format!(
        "R({s}) = {}\nlog|R| = {:.16e}\narg R = {:.16e}\nmethod: {}\nest_error: {:.3e}\n",
        show(&e.value),
        e.value.log_modulus(),
        e.value.phase(),
        e.method_used,
        err
    );
    let mut out = Outcome::ok(payload, text);
    if !z.re.is_finite() || !z.im.is_finite() {
        out.diagnostics
            .push("value exceeds binary64 range; re/im are null, use log_modulus and phase".into());
    }
    Ok(out)
}

pub fn expand(s: Complex64, k: Option<u64>, tol: f64) -> Result<Outcome, CliError> {
    let frame = eta_frame(s)?;
    let k = k.unwrap_or(frame.m);
    let b = assemble(s, k, tol)?;
    let payload = serde_json::to_value(&b).map_err(|e| CliError::Compute(e.to_string()))?;
    let mut text = String::new();
    let _ = writeln!(text, "s = {s}");
    let _ = writeln!(text, "eta = {}  (m = {}, k = {k})", frame.eta, frame.m);
    for (name, v) in [
        ("chi", &b.chi_factor),
        ("eta^(s-1) e^(-pi i eta^2)", &b.power_factor),
        ("trig term", &b.trig_term),
        ("correction sum", &b.correction_sum),
        ("dirichlet tail", &b.dirichlet_tail),
        ("R(s)", &b.r_value),
    ] {
        let _ = writeln!(text, "{name:>26}: {}", show(v));
    }
    let _ = writeln!(
        text,
        "{:>26}: {}  (est_error {:.3e})",
        "remainder",
        show(&b.remainder.ext()),
        b.remainder.est_error
    );
    let _ = writeln!(text, "{:>26}: {:.16e} {:+.16e}i", "U", b.u_value.re, b.u_value.im);
    Ok(Outcome::ok(payload, text))
}

pub fn bound(s: Complex64) -> Result<Outcome, CliError> {
    let frame = eta_frame(s)?;
    let mut diagnostics = Vec::new();
    let cert = match bound_U(&frame) {
        Ok(c) => c,
        Err(Error::Precondition(why)) => {
            diagnostics.push(format!("U bound not available: {why}"));
            remainder_certificate(&frame)?
        }
        Err(e) => return Err(e.into()),
    };
    let payload = serde_json::to_value(&cert).map_err(|e| CliError::Compute(e.to_string()))?;
    let mut text = format!("s = {s}, eta = {}\nr_bound = {:.16e}\n", frame.eta, cert.r_bound);
    if cert.u_bound.is_finite() {
        let _ = writeln!(text, "u_bound = {:.16e}", cert.u_bound);
    }
    let _ = writeln!(text, "min branch: {}", cert.remainder_branch);
    for (k, v) in &cert.log10_components {
        let _ = writeln!(text, "  log10 {k:<22} {v:.6}");
    }
    Ok(Outcome {
        payload,
        text,
        diagnostics,
        failed: false,
    })
}

fn labels_joined(labels: &std::collections::BTreeSet<riemann_aux::region::RegionLabel>) -> String {
    labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("|")
}

pub fn region_point(s: Complex64, config: Option<&Path>) -> Result<Outcome, CliError> {
    let params = load_params(config)?;
    let v = zero_free_verdict(s, &params);
    let mut payload = serde_json::to_value(&v).map_err(|e| CliError::Compute(e.to_string()))?;
    payload["s"] = json!([s.re, s.im]);
    payload["params"] = serde_json::to_value(params).map_err(|e| CliError::Compute(e.to_string()))?;
    let mut text = format!("s = {s}\nlabels: {}\nverdict: {}\n", labels_joined(&v.labels), v.verdict);
    let mut diagnostics = Vec::new();
    if v.conditional {
        let note = "verdict rests on unverified defaults A = 1, t0 = 1e6 (only existence is known)";
        let _ = writeln!(text, "note: {note}");
        diagnostics.push(note.into());
    }
    if let Some(n) = v.trivial_zero_index {
        let _ = writeln!(text, "s = -2*{n} is a trivial zero");
    }
    Ok(Outcome {
        payload,
        text,
        diagnostics,
        failed: false,
    })
}

pub const GRID_HEADER: &str = "sigma,t,labels,verdict";

pub fn region_grid(sigma: Axis, t: Axis, config: Option<&Path>) -> Result<Outcome, CliError> {
    let params = load_params(config)?;
    let mut rows = Vec::new();
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(GRID_HEADER.split(',')).map_err(|e| CliError::Compute(e.to_string()))?;
    for &x in &sigma.points() {
        for &y in &t.points() {
            let v = zero_free_verdict(Complex64::new(x, y), &params);
            let labels = labels_joined(&v.labels);
            out.write_record([format!("{x:.16e}"), format!("{y:.16e}"), labels.clone(), v.verdict.to_string()])
                .map_err(|e| CliError::Compute(e.to_string()))?;
            rows.push(json!({"sigma": x, "t": y, "labels": labels, "verdict": v.verdict}));
        }
    }
    let bytes = out.into_inner().map_err(|e| CliError::Compute(e.to_string()))?;
    let text = String::from_utf8(bytes).map_err(|e| CliError::Compute(e.to_string()))?;
    Ok(Outcome::ok(Value::Array(rows), text))
}

pub fn audit(filter: Option<&str>, doubled: bool) -> Result<Outcome, CliError> {
    let cfg = if doubled { AuditConfig::doubled() } else { AuditConfig::default() };
    let items = filter_items(run_suite(&cfg)?, filter);
    let mut diagnostics = Vec::new();
    if items.is_empty() {
        diagnostics.push(format!("no audit item matches {:?}", filter.unwrap_or("")));
    }
    let failed = items.iter().filter(|i| !i.pass).count();
    if failed > 0 {
        diagnostics.push(format!("{failed} audit item(s) failed"));
    }
    let payload = serde_json::to_value(&items).map_err(|e| CliError::Compute(e.to_string()))?;
    Ok(Outcome {
        payload,
        text: render_table(&items),
        diagnostics,
        failed: failed > 0,
    })
}

fn check_supported(rect: &Rectangle) -> Result<(), CliError> {
    for c in rect.corners() {
        auto_choice(c)?;
    }
    Ok(())
}

pub fn scan(rect: Rectangle, step: f64, tol: f64, prefix: Option<&Path>) -> Result<Outcome, CliError> {
    check_supported(&rect)?;
    let report = scan_region_report(&rect, step, tol)?;
    let mut diagnostics = Vec::new();
    if report.nontrivial_count() > 0 {
        diagnostics.push("nontrivial zero locations are computed here, not taken from any reference".into());
    }
    if report.unresolved() > 0 {
        diagnostics.push(format!("{} counted zero(s) not located by Newton", report.unresolved()));
    }
    let perturbed = report.tiles.iter().filter(|t| t.perturbations > 0).count();
    if perturbed > 0 {
        diagnostics.push(format!("{perturbed} tile(s) enlarged to move the contour off a zero"));
    }
    if let Some(prefix) = prefix {
        let with_ext = |ext: &str| -> PathBuf {
            let mut p = prefix.as_os_str().to_owned();
            p.push(ext);
            PathBuf::from(p)
        };
        write_jsonl(BufWriter::new(File::create(with_ext(".jsonl"))?), &report.zeros)?;
        write_csv(BufWriter::new(File::create(with_ext(".csv"))?), &report.zeros)?;
    }
    let payload = json!({
        "counts": {"trivial": report.trivial_count(), "nontrivial": report.nontrivial_count()},
        "total_winding": report.total_count,
        "unresolved": report.unresolved(),
        "tiles": report.tiles.len(),
        "zeros": report.zeros,
    });
    let mut text = format!(
        "trivial: {}\nnontrivial: {}\ntiles: {}, total winding {}\n",
        report.trivial_count(),
        report.nontrivial_count(),
        report.tiles.len(),
        report.total_count
    );
    for z in &report.zeros {
        let _ = writeln!(text, "  {:+.12} {:+.12}i  {}  residual {:.1e}", z.re, z.im, z.kind, z.residual);
    }
    Ok(Outcome {
        payload,
        text,
        diagnostics,
        failed: false,
    })
}
