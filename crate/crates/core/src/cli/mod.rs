//! The `grt` command line: relation checks, graded dimensions, U(H₅) bases,
//! p-adic MZVs, the Frobenius series g and log-connection transport.
//!
//! Exit codes: 0 pass, 1 relation violation, 2 input error, 3 resource
//! ceiling, 4 precision underflow.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::braidlie::{quotient_oracle, SmashAlgebra};
use crate::coeffring::{parse_rational, Padic, PadicRing, Ring, QQ};
use crate::grtcheck::{
    full_report, grt1_graded_dimension, Relation, PENTAGON_ORDER, THREE_CYCLE_FORM, TWO_CYCLE_FORM,
};
use crate::logconn::{transport, Coordinate, LogConnection, TangentialPoint};
use crate::ncseries::TruncatedSeries;
use crate::pmzv::{self, Limits, PmzvError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_PRECISION: i32 = 4;

/// Largest degree for grt-dims and h5-basis.
pub const MAX_DEGREE: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "grt", version, about = "Associator relations, U(H5) and p-adic multiple zeta values")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Write the JSON report to this file
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Print JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the GRT relations on a series read from JSON
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// Truncate the series to this cap first
        #[arg(long)]
        cap: Option<usize>,
        /// Comma-separated subset of group_like,two_cycle,three_cycle,pentagon
        #[arg(long)]
        relations: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Graded dimensions of the linearized relations, degrees 2..=max
    GrtDims {
        #[arg(long)]
        max_degree: usize,
        #[command(flatten)]
        common: Common,
    },
    /// p-adic multiple zeta value ζ_p(s_k, …, s_1)
    Pmzv {
        #[arg(long)]
        p: u32,
        /// Comma-separated s_1,…,s_k
        #[arg(long)]
        indices: String,
        #[arg(long, default_value_t = 12)]
        precision: i64,
        #[command(flatten)]
        common: Common,
    },
    /// The Frobenius series g to a weight
    ComputeG {
        #[arg(long)]
        p: u32,
        /// Weight cap
        #[arg(long, default_value_t = 3)]
        cap: usize,
        #[arg(long, default_value_t = 12)]
        precision: i64,
        /// Allow weight 4
        #[arg(long)]
        extended_weight: bool,
        #[command(flatten)]
        common: Common,
    },
    /// PBW monomials of U(H5) in one degree
    H5Basis {
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Parallel transport of a unipotent log connection
    Transport {
        /// JSON with "connection", "from" and "to"
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 20)]
        precision: i64,
        #[command(flatten)]
        common: Common,
    },
}

/// A finished command: report, text form and exit code.
pub struct Outcome {
    pub code: i32,
    pub report: Value,
    pub text: String,
}

fn fail(code: i32, message: impl Into<String>) -> Outcome {
    let message = message.into();
    Outcome { code, report: json!({"error": message, "exit_code": code}), text: format!("error: {message}") }
}

fn conventions() -> Value {
    json!({"two_cycle": TWO_CYCLE_FORM, "three_cycle": THREE_CYCLE_FORM, "pentagon": PENTAGON_ORDER})
}

fn read_json(path: &Path) -> Result<Value, Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        fail(EXIT_INPUT, format!("malformed JSON in {} at line {}, column {}: {e}", path.display(), e.line(), e.column()))
    })
}

fn parse_relations(s: Option<&str>) -> Result<Vec<Relation>, Outcome> {
    let Some(s) = s else { return Ok(Relation::ALL.to_vec()) };
    s.split(',')
        .map(|x| Relation::parse(x.trim()).ok_or_else(|| fail(EXIT_INPUT, format!("unknown relation {x:?}"))))
        .collect()
}

fn verify_series<R: Ring>(phi: TruncatedSeries<R>, cap: Option<usize>, relations: &[Relation]) -> Outcome {
    let phi = match cap {
        Some(c) if c > phi.cap() => {
            return fail(EXIT_INPUT, format!("--cap {c} exceeds the series cap {}", phi.cap()));
        }
        Some(c) => phi.truncate(c).expect("lower cap"),
        None => phi,
    };
    if phi.cap() > MAX_DEGREE && relations.contains(&Relation::Pentagon) {
        return fail(EXIT_RESOURCE, format!("pentagon check above cap {MAX_DEGREE} refused"));
    }
    let report = match full_report(&phi, relations) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_INPUT, e.to_string()),
    };
    let mut text = format!("cap {} over {}\n", phi.cap(), phi.ring().describe());
    for r in &report.reports {
        match r.first_defect_degree() {
            None => writeln!(text, "{}: pass", r.relation.name()),
            Some(d) => writeln!(text, "{}: FAIL at degree {d}", r.relation.name()),
        }
        .expect("string write");
    }
    writeln!(text, "degree one vanishes: {}", report.degree_one_vanishes).expect("string write");
    let code = if report.passed() { EXIT_PASS } else { EXIT_VIOLATION };
    Outcome { code, report: report.to_json(), text: text.trim_end().to_string() }
}

fn cmd_verify(input: &Path, cap: Option<usize>, relations: Option<&str>) -> Outcome {
    let v = match read_json(input) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let relations = match parse_relations(relations) {
        Ok(r) => r,
        Err(o) => return o,
    };
    match v.get("ring").and_then(|r| r.get("kind")).and_then(Value::as_str) {
        Some("QQ") => match TruncatedSeries::<QQ>::from_json(&v) {
            Ok(s) => verify_series(s, cap, &relations),
            Err(e) => fail(EXIT_INPUT, e.to_string()),
        },
        Some("Qp") => match TruncatedSeries::<PadicRing>::from_json(&v) {
            Ok(s) => verify_series(s, cap, &relations),
            Err(e) => fail(EXIT_INPUT, e.to_string()),
        },
        _ => fail(EXIT_INPUT, "series JSON needs a ring of kind QQ or Qp"),
    }
}

fn cmd_grt_dims(max: usize) -> Outcome {
    if max < 2 {
        return fail(
            EXIT_INPUT,
            "max degree must be at least 2: in degree 1 every a(X−Y) solves the linearized relations, \
             yet exp(a(X−Y)) violates the 3-cycle in degree 2 (degree-1 anomaly)",
        );
    }
    if max > MAX_DEGREE {
        return fail(EXIT_RESOURCE, format!("max degree {max} exceeds the ceiling {MAX_DEGREE}"));
    }
    let mut dims = serde_json::Map::new();
    let mut parts = Vec::new();
    let mut consistent = true;
    for d in 2..=max {
        match grt1_graded_dimension(d) {
            Ok(s) => {
                consistent &= s.verified && s.dimension == s.cross_check_dimension;
                dims.insert(d.to_string(), json!(s.dimension));
                parts.push(format!("{d}:{}", s.dimension));
            }
            Err(e) => return fail(EXIT_RESOURCE, e.to_string()),
        }
    }
    let code = if consistent { EXIT_PASS } else { EXIT_VIOLATION };
    Outcome {
        code,
        report: json!({"dimensions": dims, "cross_checked": consistent, "conventions": conventions()}),
        text: parts.join(" "),
    }
}

fn pmzv_error(e: PmzvError) -> Outcome {
    match e {
        PmzvError::Precision { requested, achievable } => Outcome {
            code: EXIT_PRECISION,
            report: json!({"error": e.to_string(), "requested": requested, "achievable": achievable, "exit_code": EXIT_PRECISION}),
            text: format!("error: {e}"),
        },
        PmzvError::WeightOverflow { .. } => fail(EXIT_RESOURCE, e.to_string()),
        PmzvError::Consistency(_) => fail(EXIT_VIOLATION, e.to_string()),
        _ => fail(EXIT_INPUT, e.to_string()),
    }
}

fn cmd_pmzv(p: u32, indices: &str, precision: i64) -> Outcome {
    let s: Result<Vec<u32>, _> = indices.trim_matches(|c| c == '(' || c == ')').split(',').map(|x| x.trim().parse::<u32>()).collect();
    let Ok(s) = s else {
        return fail(EXIT_INPUT, format!("indices must be comma-separated positive integers, got {indices:?}"));
    };
    match pmzv::pmzv(p, &s, precision) {
        Ok(v) => {
            let args: Vec<String> = s.iter().rev().map(u32::to_string).collect();
            let text = format!("zeta_{p}({}) = {} (claimed precision {})", args.join(","), v.value, v.claimed_precision);
            Outcome { code: EXIT_PASS, report: v.to_json(), text }
        }
        Err(e) => pmzv_error(e),
    }
}

fn cmd_compute_g(p: u32, cap: usize, precision: i64, extended: bool) -> Outcome {
    let limits = if extended { Limits::extended() } else { Limits::default() };
    match pmzv::compute_g_with(p, cap, precision, &limits) {
        Ok(g) => {
            let mut text = format!("g for p = {p}, weight {cap}, precision {precision}\n");
            for (w, c) in g.series.terms() {
                if !c.is_zero() {
                    writeln!(text, "  {}: {c}", g.series.alphabet().format_word(w)).expect("string write");
                }
            }
            Outcome { code: EXIT_PASS, report: g.to_json(), text: text.trim_end().to_string() }
        }
        Err(e) => pmzv_error(e),
    }
}

fn cmd_h5_basis(degree: usize) -> Outcome {
    if degree > MAX_DEGREE {
        return fail(EXIT_RESOURCE, format!("degree {degree} exceeds the ceiling {MAX_DEGREE}"));
    }
    let alg = match SmashAlgebra::get(5, degree) {
        Ok(a) => a,
        Err(e) => return fail(EXIT_RESOURCE, e.to_string()),
    };
    let monomials: Vec<String> = alg.monomials(degree).iter().map(|w| alg.monomial_text(w)).collect();
    let oracle = quotient_oracle(5, degree).ok().map(|r| r.dimension);
    let code = match oracle {
        Some(d) if d != monomials.len() => EXIT_VIOLATION,
        _ => EXIT_PASS,
    };
    let mut text = format!("degree {degree}: dimension {}", monomials.len());
    if let Some(d) = oracle {
        write!(text, " (quotient oracle {d})").expect("string write");
    }
    for m in &monomials {
        write!(text, "\n  {m}").expect("string write");
    }
    Outcome {
        code,
        report: json!({"degree": degree, "dimension": monomials.len(), "oracle_dimension": oracle, "monomials": monomials}),
        text,
    }
}

fn parse_point(v: &Value, p: u32, precision: i64) -> Result<TangentialPoint, String> {
    let coords = v.as_array().ok_or("endpoints must be arrays")?;
    let value = |s: &Value| -> Result<Padic, String> {
        let s = s.as_str().ok_or("coordinates must be rational strings")?;
        let q = parse_rational(s).map_err(|e| e.to_string())?;
        Ok(Padic::from_rational(&q, p, precision))
    };
    let coords = coords
        .iter()
        .map(|c| match (c.get("point"), c.get("tangent")) {
            (Some(x), None) => Ok(Coordinate::Point(value(x)?)),
            (None, Some(u)) => Ok(Coordinate::Tangential(value(u)?)),
            _ => Err(format!("coordinate {c} must be {{\"point\": q}} or {{\"tangent\": q}}")),
        })
        .collect::<Result<Vec<_>, String>>()?;
    TangentialPoint::new(coords).map_err(|e| e.to_string())
}

fn cmd_transport(input: &Path, p: u32, precision: i64) -> Outcome {
    let v = match read_json(input) {
        Ok(v) => v,
        Err(o) => return o,
    };
    if PadicRing::new(p, precision).is_err() {
        return fail(EXIT_INPUT, format!("--p {p} must be prime and --precision positive"));
    }
    let conn = match LogConnection::from_json(&v["connection"]) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_INPUT, e.to_string()),
    };
    let (from, to) = match (parse_point(&v["from"], p, precision), parse_point(&v["to"], p, precision)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return fail(EXIT_INPUT, e),
    };
    match transport(&conn, &from, &to) {
        Ok(m) => {
            let rows: Vec<Vec<Value>> = m.iter().map(|r| r.iter().map(Padic::to_json).collect()).collect();
            let text = m.iter().map(|r| r.iter().map(Padic::to_string).collect::<Vec<_>>().join("  ")).collect::<Vec<_>>().join("\n");
            Outcome { code: EXIT_PASS, report: json!({"p": p, "branch": "l(p) = 0", "matrix": rows}), text }
        }
        Err(e) => fail(EXIT_INPUT, e.to_string()),
    }
}

pub fn execute(cfg: &RunConfig) -> (Outcome, Common) {
    match &cfg.command {
        Command::Verify { input, cap, relations, common } => (cmd_verify(input, *cap, relations.as_deref()), common.clone()),
        Command::GrtDims { max_degree, common } => (cmd_grt_dims(*max_degree), common.clone()),
        Command::Pmzv { p, indices, precision, common } => (cmd_pmzv(*p, indices, *precision), common.clone()),
        Command::ComputeG { p, cap, precision, extended_weight, common } => {
            (cmd_compute_g(*p, *cap, *precision, *extended_weight), common.clone())
        }
        Command::H5Basis { degree, common } => (cmd_h5_basis(*degree), common.clone()),
        Command::Transport { input, p, precision, common } => (cmd_transport(input, *p, *precision), common.clone()),
    }
}

/// Parses arguments, runs the command and writes its output; returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = if code == EXIT_PASS { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let (outcome, common) = execute(&cfg);
    let pretty = serde_json::to_string_pretty(&outcome.report).expect("serializable report") + "\n";
    if let Some(path) = &common.output {
        if let Err(e) = std::fs::write(path, &pretty) {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return EXIT_INPUT;
        }
    }
    let shown = if common.json { pretty } else { outcome.text.clone() + "\n" };
    let _ = if outcome.code == EXIT_INPUT || outcome.code >= EXIT_RESOURCE {
        err.write_all(shown.as_bytes())
    } else {
        out.write_all(shown.as_bytes())
    };
    outcome.code
}
