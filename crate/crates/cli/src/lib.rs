//! Library side of the `semihilbert` command: every verb returns its output
//! and exit code so it can be driven from tests.

pub mod instance;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use semihilbert::radius::{numerical_range_boundary, sampling_oracle};
use semihilbert::suite::{campaign, sharpness_scenarios, CampaignConfig};
use semihilbert::{classify, crawford, membership, numerical_radius, op_seminorm, sharp, Error, RadiusResult, SweepConfig};
use serde_json::{json, Value};

pub use instance::{InstanceFile, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// What a verb prints on standard output, and how the process exits.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn json(v: &Value, pass: bool) -> Self {
        let mut stdout = serde_json::to_string_pretty(v).expect("json value serializes");
        stdout.push('\n');
        Outcome { stdout, code: if pass { EXIT_OK } else { EXIT_FAIL } }
    }
}

/// Usage, parse and validation problems; always exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<ParseError> for UsageError {
    fn from(e: ParseError) -> Self {
        UsageError(e.0)
    }
}

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

impl From<std::io::Error> for UsageError {
    fn from(e: std::io::Error) -> Self {
        UsageError(e.to_string())
    }
}

pub type CliResult<T> = Result<T, UsageError>;

pub fn load_instance(path: &Path) -> CliResult<InstanceFile> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    InstanceFile::parse(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| UsageError(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

const INFINITE: &str = "infinite";

fn bounded<T>(r: semihilbert::Result<T>) -> CliResult<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Unbounded) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn metric(r: &Option<RadiusResult>) -> Value {
    r.map_or(json!(INFINITE), |r| json!(r.value))
}

fn error_bound(r: &Option<RadiusResult>) -> Value {
    r.map_or(Value::Null, |r| json!(r.error_bound))
}

/// Seminorm, radius, Crawford number, classes and membership of one operator.
/// An A-unbounded operator is reported with `"infinite"` metrics; then
/// `W_A(T) = ℂ` and the Crawford number is 0.
pub fn compute(inst: &InstanceFile, op: &str, sweep: SweepConfig) -> CliResult<Outcome> {
    let space = inst.space()?;
    let t = inst.operator(op)?;
    let norm = bounded(op_seminorm(&space, &t))?;
    let omega = bounded(numerical_radius(&space, &t, sweep))?;
    let craw = bounded(crawford(&space, &t, sweep))?;
    let crawford_value = craw.map_or(json!(0.0), |r| json!(r.value));
    let v = json!({
        "operator": op,
        "dim": space.dim(),
        "rank": space.rank(),
        "seminorm": metric(&norm),
        "omega": metric(&omega),
        "crawford": crawford_value,
        "classes": classify(&space, &t, inst.class_tol())?,
        "membership": membership(&space, &t)?,
        "error_bounds": {
            "seminorm": error_bound(&norm),
            "omega": error_bound(&omega),
            "crawford": error_bound(&craw),
        },
    });
    Ok(Outcome::json(&v, true))
}

/// `T^♯ = A†T*A`, or `"exists": false` when the Douglas condition fails.
pub fn adjoint(inst: &InstanceFile, op: &str) -> CliResult<Outcome> {
    let space = inst.space()?;
    let t = inst.operator(op)?;
    let v = match sharp(&space, &t) {
        Ok(s) => json!({ "operator": op, "exists": true, "adjoint": instance::from_cmatrix(&s) }),
        Err(Error::NotAdmissible { residual }) => {
            json!({ "operator": op, "exists": false, "range_residual": residual })
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Outcome::json(&v, true))
}

/// Runs a campaign; the markdown table goes to standard output and,
/// optionally, both reports to files.
pub fn verify(cfg: &CampaignConfig, out: Option<&Path>, md: Option<&Path>) -> CliResult<Outcome> {
    let report = campaign(cfg)?;
    let markdown = report.to_markdown();
    if let Some(p) = out {
        write_atomic(p, &report.to_json())?;
    }
    if let Some(p) = md {
        write_atomic(p, &markdown)?;
    }
    Ok(Outcome { stdout: markdown, code: if report.success() { EXIT_OK } else { EXIT_FAIL } })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RangeFormat {
    Csv,
    Svg,
}

/// Support points of `W_A(T)`, as CSV or as an SVG of their hull with the
/// Crawford disk.
pub fn range(inst: &InstanceFile, op: &str, points: usize, format: RangeFormat, sweep: SweepConfig) -> CliResult<Outcome> {
    if points < 8 {
        return Err(UsageError(format!("--points must be at least 8, got {points}")));
    }
    let space = inst.space()?;
    let t = inst.operator(op)?;
    let b = match numerical_range_boundary(&space, &t, points) {
        Err(Error::Unbounded) => {
            return Err(UsageError(format!(
                "W_A(T) = C: operator `{op}` is not A-bounded, so its A-numerical range is the whole complex plane"
            )))
        }
        r => r?,
    };
    let stdout = match format {
        RangeFormat::Csv => {
            let mut s = String::from("theta,re,im\n");
            for (th, (re, im)) in b.angles.iter().zip(&b.support_points) {
                let _ = writeln!(s, "{th},{re},{im}");
            }
            s
        }
        RangeFormat::Svg => svg(op, &b.support_points, crawford(&space, &t, sweep)?.value),
    };
    Ok(Outcome { stdout, code: EXIT_OK })
}

fn svg(op: &str, pts: &[(f64, f64)], c: f64) -> String {
    let (mut x0, mut x1, mut y0, mut y1) = (-c.max(0.0), c.max(0.0), -c.max(0.0), c.max(0.0));
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0);
    let span = if span > 0.0 { span } else { 1.0 };
    let pad = 0.1 * span;
    let (w, h) = (x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
    // y is flipped so that the imaginary axis points up.
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {w} {h}" width="480" height="{}">"#,
        x0 - pad,
        -(y1 + pad),
        (480.0 * h / w).round()
    );
    let _ = writeln!(s, "<title>A-numerical range of {op}</title>");
    let _ = writeln!(s, r#"<g fill="none" vector-effect="non-scaling-stroke">"#);
    let _ = writeln!(
        s,
        r##"<line x1="{}" y1="0" x2="{}" y2="0" stroke="#bbb" vector-effect="non-scaling-stroke"/>"##,
        x0 - pad,
        x1 + pad
    );
    let _ = writeln!(
        s,
        r##"<line x1="0" y1="{}" x2="0" y2="{}" stroke="#bbb" vector-effect="non-scaling-stroke"/>"##,
        -(y1 + pad),
        -(y0 - pad)
    );
    let poly: Vec<String> = pts.iter().map(|(x, y)| format!("{x},{}", -y)).collect();
    let _ = writeln!(
        s,
        r##"<polygon points="{}" fill="#4a7ab733" stroke="#2b5d9b" stroke-width="1.5" vector-effect="non-scaling-stroke"/>"##,
        poly.join(" ")
    );
    let _ = writeln!(
        s,
        r##"<circle cx="0" cy="0" r="{c}" stroke="#c0392b" stroke-dasharray="4 3" vector-effect="non-scaling-stroke"><title>Crawford number {c}</title></circle>"##
    );
    s.push_str("</g>\n</svg>\n");
    s
}

/// The fixed equality scenarios; exit 1 if any breaks tolerance.
pub fn sharpness(sweep: SweepConfig) -> CliResult<Outcome> {
    let rs = sharpness_scenarios(sweep)?;
    let pass = rs.iter().all(|r| r.pass);
    Ok(Outcome::json(&json!({ "scenarios": rs, "pass": pass }), pass))
}

/// Engine values next to the sampling oracle's one-sided bounds. Exit 1 if
/// an oracle bound is on the wrong side of the engine value by more than
/// its slack.
pub fn oracle(
    inst: &InstanceFile,
    op: &str,
    samples: usize,
    seed: u64,
    ascent_iters: usize,
    sweep: SweepConfig,
) -> CliResult<Outcome> {
    if samples == 0 {
        return Err(UsageError("--samples must be at least 1".into()));
    }
    let space = inst.space()?;
    let t = inst.operator(op)?;
    let Some(norm) = bounded(op_seminorm(&space, &t))? else {
        let v = json!({ "operator": op, "seed": seed, "samples": samples, "seminorm": INFINITE, "omega": INFINITE });
        return Ok(Outcome::json(&v, true));
    };
    let omega = numerical_radius(&space, &t, sweep)?;
    let craw = crawford(&space, &t, sweep)?;
    let o = sampling_oracle(&space, &t, seed, samples, ascent_iters)?;
    let slack = |r: &RadiusResult| 1e-8 * r.value.abs().max(1.0) + r.error_bound;
    let checks = [
        ("omega", o.omega_lb - omega.value <= slack(&omega)),
        ("seminorm", o.seminorm_lb - norm.value <= slack(&norm)),
        ("crawford", craw.value - o.crawford_ub <= slack(&craw)),
    ];
    let pass = checks.iter().all(|c| c.1);
    let v = json!({
        "operator": op,
        "seed": seed,
        "samples": samples,
        "ascent_iters": ascent_iters,
        "engine": { "omega": omega.value, "seminorm": norm.value, "crawford": craw.value },
        "oracle": o,
        "differences": {
            "omega": omega.value - o.omega_lb,
            "seminorm": norm.value - o.seminorm_lb,
            "crawford": o.crawford_ub - craw.value,
        },
        "consistent": checks.iter().map(|(k, ok)| (k.to_string(), json!(ok))).collect::<serde_json::Map<_, _>>(),
        "pass": pass,
    });
    Ok(Outcome::json(&v, pass))
}
