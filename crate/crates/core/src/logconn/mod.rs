//! Logarithmic connections d − Σ Γᵢ dtᵢ/tᵢ with constant residues.
//!
//! Horizontal sections satisfy tᵢ∂ᵢU = ΓᵢU. A gauge U' = S·U turns Γᵢ into
//! SΓᵢS⁻¹ + (tᵢ∂ᵢS)S⁻¹.

mod laurent;
mod matrix;
mod transport;

use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::coeffring::{format_rational, parse_rational, CoeffError, Rational};
use crate::linalg::{self, PivotOrder, SparseVec};
use crate::ncseries::SeriesError;

pub use laurent::{Laurent, LaurentMatrix};
pub use matrix::{rational_roots, QMatrix};
pub use transport::{frobenius_gm, transport, transport_with_lp, Coordinate, PadicMatrix, TangentialPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("integrability error: residues {0} and {1} do not commute")]
    Integrability(usize, usize),
    #[error("unsupported spectrum: residue {0} has eigenvalues outside the rationals")]
    UnsupportedSpectrum(usize),
    #[error("resonant: residue {var} has the nonzero integer eigenvalue {eigenvalue}; run shear first")]
    Resonant { var: usize, eigenvalue: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub unipotent: bool,
    pub integrable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogConnection {
    vars: Vec<String>,
    residues: Vec<QMatrix>,
    flags: Flags,
}

impl LogConnection {
    /// Checks shapes, commutation under the integrable flag and nilpotency
    /// under the unipotent flag.
    pub fn new(vars: Vec<String>, residues: Vec<QMatrix>, flags: Flags) -> Result<Self, LogError> {
        if vars.len() != residues.len() {
            return Err(LogError::Shape(format!("{} variables but {} residues", vars.len(), residues.len())));
        }
        if residues.is_empty() {
            return Err(LogError::Shape("at least one variable is required".into()));
        }
        let m = residues[0].dim();
        if m == 0 || residues.iter().any(|g| g.dim() != m) {
            return Err(LogError::Shape("residues must share a positive rank".into()));
        }
        let conn = LogConnection { vars, residues, flags };
        if flags.integrable {
            conn.check_commuting()?;
        }
        if flags.unipotent {
            if let Some(i) = conn.residues.iter().position(|g| !g.is_nilpotent()) {
                return Err(LogError::Domain(format!("residue {i} is not nilpotent")));
            }
        }
        Ok(conn)
    }

    /// Variables named t1..tr.
    pub fn with_residues(residues: Vec<QMatrix>, flags: Flags) -> Result<Self, LogError> {
        let vars = (1..=residues.len()).map(|i| format!("t{i}")).collect();
        Self::new(vars, residues, flags)
    }

    pub fn rank(&self) -> usize {
        self.residues[0].dim()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn residues(&self) -> &[QMatrix] {
        &self.residues
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn check_commuting(&self) -> Result<(), LogError> {
        for i in 0..self.residues.len() {
            for j in i + 1..self.residues.len() {
                if !self.residues[i].commutator(&self.residues[j]).is_zero() {
                    return Err(LogError::Integrability(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut flags = Vec::new();
        if self.flags.unipotent {
            flags.push("unipotent");
        }
        if self.flags.integrable {
            flags.push("integrable");
        }
        json!({
            "rank": self.rank(),
            "vars": self.vars,
            "residues": self.residues.iter().map(matrix_json).collect::<Vec<_>>(),
            "flags": flags,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, LogError> {
        let bad = |s: &str| LogError::Parse(s.to_string());
        let rank = v["rank"].as_u64().ok_or_else(|| bad("missing rank"))? as usize;
        let vars: Vec<String> = v["vars"]
            .as_array()
            .ok_or_else(|| bad("missing vars"))?
            .iter()
            .map(|x| x.as_str().map(String::from).ok_or_else(|| bad("variable names must be strings")))
            .collect::<Result<_, _>>()?;
        let residues: Vec<QMatrix> = v["residues"]
            .as_array()
            .ok_or_else(|| bad("missing residues"))?
            .iter()
            .map(matrix_from_json)
            .collect::<Result<_, _>>()?;
        let mut flags = Flags::default();
        for f in v["flags"].as_array().map(Vec::as_slice).unwrap_or(&[]) {
            match f.as_str() {
                Some("unipotent") => flags.unipotent = true,
                Some("integrable") => flags.integrable = true,
                _ => return Err(bad(&format!("unknown flag {f}"))),
            }
        }
        if residues.iter().any(|g| g.dim() != rank) {
            return Err(LogError::Shape(format!("residues do not have rank {rank}")));
        }
        Self::new(vars, residues, flags)
    }
}

pub fn matrix_json(m: &QMatrix) -> Value {
    json!(m.rows().iter().map(|r| r.iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn matrix_from_json(v: &Value) -> Result<QMatrix, LogError> {
    let rows = v.as_array().ok_or_else(|| LogError::Parse("residue must be a list of rows".into()))?;
    let parsed: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| LogError::Parse("row must be a list".into()))?
                .iter()
                .map(|x| match x {
                    Value::String(s) => Ok(parse_rational(s)?),
                    Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().expect("checked").into())),
                    _ => Err(LogError::Parse(format!("bad matrix entry {x}"))),
                })
                .collect()
        })
        .collect::<Result<_, LogError>>()?;
    QMatrix::new(parsed).ok_or_else(|| LogError::Shape("residue is not square".into()))
}

/// Full rational spectrum of a residue, ascending.
fn spectrum(var: usize, g: &QMatrix) -> Result<Vec<(Rational, usize)>, LogError> {
    let ev = g.rational_eigenvalues();
    if ev.iter().map(|(_, m)| m).sum::<usize>() != g.dim() {
        return Err(LogError::UnsupportedSpectrum(var));
    }
    Ok(ev)
}

/// Projector onto the generalized λ-eigenspace along the others.
fn spectral_projector(g: &QMatrix, spec: &[(Rational, usize)], lambda: &Rational) -> QMatrix {
    let n = g.dim();
    let mut cols = Vec::new();
    let mut keep = Vec::new();
    for (mu, _) in spec {
        for v in g.generalized_eigenspace(mu) {
            keep.push(mu == lambda);
            cols.push(v);
        }
    }
    let mut b = QMatrix::zero(n);
    for (j, v) in cols.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            b.set(i, j, x.clone());
        }
    }
    let binv = b.inverse().expect("generalized eigenvectors span");
    let e = QMatrix::diagonal(&keep.iter().map(|&k| if k { Rational::one() } else { Rational::zero() }).collect::<Vec<_>>());
    b.mul(&e).mul(&binv)
}

fn integer_gap(lo: &Rational, hi: &Rational) -> Option<i64> {
    let d = hi - lo;
    (d.is_integer() && d > Rational::zero()).then(|| i64::try_from(d.to_integer()).ok()).flatten()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShearStep {
    pub var: usize,
    pub lower: Rational,
    pub upper: Rational,
    pub shift: i64,
}

/// Cumulative gauge S and the residues it produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeReport {
    pub gauge: LaurentMatrix,
    pub residues: Vec<QMatrix>,
    pub steps: Vec<ShearStep>,
}

impl GaugeReport {
    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }

    /// No residue has two eigenvalues differing by a nonzero integer.
    pub fn non_resonant(&self) -> bool {
        self.residues.iter().enumerate().all(|(i, g)| match spectrum(i, g) {
            Ok(ev) => ev.iter().all(|(a, _)| ev.iter().all(|(b, _)| integer_gap(a, b).is_none())),
            Err(_) => false,
        })
    }

    /// Checks S·Γᵢ + tᵢ∂ᵢS = Γᵢ'·S for every i in the Laurent ring, and
    /// that det S is a unit there.
    pub fn verify(&self, conn: &LogConnection) -> bool {
        let r = conn.vars.len();
        if self.residues.len() != r {
            return false;
        }
        let s = &self.gauge;
        let ok = (0..r).all(|i| {
            let lhs = s.mul(&LaurentMatrix::constant(r, &conn.residues[i])).add(&s.euler(i));
            let rhs = LaurentMatrix::constant(r, &self.residues[i]).mul(s);
            lhs == rhs
        });
        ok && s.det().is_monomial()
    }

    pub fn to_json(&self, conn: &LogConnection) -> Value {
        json!({
            "gauge": self.gauge.to_text(&conn.vars),
            "residues": self.residues.iter().map(matrix_json).collect::<Vec<_>>(),
            "steps": self.steps.iter().map(|s| json!({
                "var": conn.vars[s.var],
                "lower": format_rational(&s.lower),
                "upper": format_rational(&s.upper),
                "shift": s.shift,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Removes integer-separated eigenvalue pairs by repeated gauges
/// S = I + (tᵢⁿ − 1)P, P the projector onto the lower generalized
/// eigenspace, which shifts that eigenvalue of Γᵢ up by n. Pairs are taken
/// lowest variable first, then smallest pair.
pub fn shear(conn: &LogConnection) -> Result<GaugeReport, LogError> {
    conn.check_commuting()?;
    let r = conn.vars.len();
    let m = conn.rank();
    let mut residues = conn.residues.clone();
    let mut gauge = LaurentMatrix::identity(r, m);
    let mut steps = Vec::new();
    for (i, g) in residues.iter().enumerate() {
        spectrum(i, g)?;
    }
    loop {
        let mut found = None;
        'search: for (i, g) in residues.iter().enumerate() {
            let ev = spectrum(i, g)?;
            for (a, (lo, _)) in ev.iter().enumerate() {
                for (hi, _) in &ev[a + 1..] {
                    if let Some(n) = integer_gap(lo, hi) {
                        found = Some((i, lo.clone(), hi.clone(), n, ev.clone()));
                        break 'search;
                    }
                }
            }
        }
        let Some((i, lo, hi, n, ev)) = found else { break };
        let p = spectral_projector(&residues[i], &ev, &lo);
        gauge = LaurentMatrix::shear_step(r, i, n, &p).mul(&gauge);
        residues[i] = residues[i].add(&p.scale(&Rational::from_integer(n.into())));
        steps.push(ShearStep { var: i, lower: lo, upper: hi, shift: n });
    }
    Ok(GaugeReport { gauge, residues, steps })
}

/// Basis of ∩ ker Γᵢ; under non-resonance these constants are all the
/// horizontal sections.
pub fn horizontal_sections(conn: &LogConnection) -> Result<Vec<Vec<Rational>>, LogError> {
    for (i, g) in conn.residues.iter().enumerate() {
        for (ev, _) in g.rational_eigenvalues() {
            if ev.is_integer() && !ev.is_zero() {
                return Err(LogError::Resonant { var: i, eigenvalue: format_rational(&ev) });
            }
        }
    }
    let m = conn.rank();
    let rows: Vec<Vec<Rational>> = conn.residues.iter().flat_map(|g| g.rows().to_vec()).collect();
    Ok(matrix::kernel_of_rows(rows, m))
}

/// A horizontal section found by the brute-force solver, as its nonzero
/// Laurent coefficient vectors.
pub type LaurentSection = Vec<(Vec<i64>, Vec<Rational>)>;

/// Solves t_i∂_iU = Γ_iU for U = Σ_{|I_j| ≤ radius} U_I t^I as one linear
/// system in all coefficients.
pub fn brute_force_sections(conn: &LogConnection, radius: i64) -> Vec<LaurentSection> {
    let r = conn.vars.len();
    let m = conn.rank();
    let side = (2 * radius + 1) as usize;
    let count = side.pow(r as u32);
    let exps: Vec<Vec<i64>> = (0..count)
        .map(|mut k| {
            (0..r)
                .map(|_| {
                    let e = (k % side) as i64 - radius;
                    k /= side;
                    e
                })
                .collect()
        })
        .collect();
    // unknown (I, b) ↦ column; equation (I, i, a) ↦ row
    let mut cols: Vec<SparseVec> = Vec::with_capacity(count * m);
    for (ii, e) in exps.iter().enumerate() {
        for b in 0..m {
            let mut col = SparseVec::new();
            for (i, g) in conn.residues.iter().enumerate() {
                for a in 0..m {
                    let mut x = -g.get(a, b).clone();
                    if a == b {
                        x += Rational::from_integer(e[i].into());
                    }
                    if !x.is_zero() {
                        col.insert((ii * r + i) * m + a, x);
                    }
                }
            }
            cols.push(col);
        }
    }
    linalg::nullspace(&cols, PivotOrder::Natural)
        .into_iter()
        .map(|v| {
            exps.iter()
                .enumerate()
                .filter_map(|(ii, e)| {
                    let u = v[ii * m..(ii + 1) * m].to_vec();
                    u.iter().any(|x| !x.is_zero()).then(|| (e.clone(), u))
                })
                .collect()
        })
        .collect()
}
