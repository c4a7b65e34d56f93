//! p-adic iterated integrals on P¹ − {0, 1, ∞}: exact Taylor expansions at 0,
//! expansions at 1, Frobenius functional equations, regularized values at
//! the tangential base point at 1, the Frobenius series g and the p-adic
//! multiple zeta values read off from it.
//!
//! Words come in two spellings. An `IntegrationWord` lists the forms in
//! integration order, i₁ first. The matching monomial of U(e₀, e₁) is the
//! reverse: I_{i_r,…,i_1} is the coefficient of e_{i_r}⋯e_{i_1}.

mod coleman;
mod dense;
mod frobenius;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::One;
use once_cell::sync::Lazy;
use serde_json::{json, Value};
use thiserror::Error;

use crate::coeffring::{is_prime, CoeffError, Padic, PadicRing, Rational, Ring};
use crate::ncseries::{Alphabet, SeriesError, ShuffleReport, TruncatedSeries};

pub use coleman::{
    expansion_at_zero, frobenius_functional_equation, frobenius_functional_equations, polylog_taylor,
    ColemanExpansion, Correction, FunctionalEquation,
};
use dense::{index_word, word_index, Dense, Vector};
use frobenius::{g_from_h, h_from_g, p1_series, solve_g, Engine};

/// Default weight cap.
pub const WEIGHT_CAP: usize = 3;
/// Cap reachable with `Limits::extended()`.
pub const EXTENDED_WEIGHT_CAP: usize = 4;
/// Largest precision the certification will attempt.
pub const MAX_PRECISION: i64 = 60;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PmzvError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("word {0} starts with ω₀ and needs shuffle regularization")]
    RegularizationRequired(String),
    #[error("weight {weight} exceeds the cap {cap}")]
    WeightOverflow { weight: usize, cap: usize },
    #[error("precision {requested} cannot be certified; achievable precision is {achievable}")]
    Precision { requested: i64, achievable: i64 },
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub weight_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { weight_cap: WEIGHT_CAP }
    }
}

impl Limits {
    pub fn extended() -> Self {
        Limits { weight_cap: EXTENDED_WEIGHT_CAP }
    }

    fn check(&self, weight: usize) -> Result<(), PmzvError> {
        if weight > self.weight_cap {
            return Err(PmzvError::WeightOverflow { weight, cap: self.weight_cap });
        }
        Ok(())
    }
}

pub(crate) fn check_prime(p: u32) -> Result<(), PmzvError> {
    if p == 2 {
        return Err(PmzvError::Domain("p = 2 is not supported: the annulus used for continuation degenerates".into()));
    }
    if !is_prime(p) {
        return Err(PmzvError::Domain(format!("{p} is not a prime")));
    }
    Ok(())
}

/// Letters of ω_{i₁}, ω_{i₂}, … in integration order, ωᵢ = dlog(z − i).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegrationWord(Vec<u8>);

impl IntegrationWord {
    pub fn new(letters: Vec<u8>) -> Result<Self, PmzvError> {
        if let Some(l) = letters.iter().find(|&&l| l > 1) {
            return Err(PmzvError::Domain(format!("letter {l} is not 0 or 1")));
        }
        Ok(IntegrationWord(letters))
    }

    /// 1 0^{s₁−1} 1 0^{s₂−1} ⋯, the word of ζ(s_k, …, s₁).
    pub fn from_indices(s: &[u32]) -> Result<Self, PmzvError> {
        if s.is_empty() || s.contains(&0) {
            return Err(PmzvError::Domain("indices must be a nonempty list of positive integers".into()));
        }
        let mut w = Vec::new();
        for &si in s {
            w.push(1);
            w.extend(std::iter::repeat(0).take(si as usize - 1));
        }
        Ok(IntegrationWord(w))
    }

    pub fn from_u_word(u: &[u8]) -> Self {
        IntegrationWord(u.iter().rev().copied().collect())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    /// i₁ ≠ 0, so the integral converges at 0.
    pub fn is_admissible(&self) -> bool {
        self.0.first() != Some(&0)
    }

    pub fn u_word(&self) -> Vec<u8> {
        self.0.iter().rev().copied().collect()
    }

    /// Accepts "1,0,0", "(1,0,0)" or "100".
    pub fn parse(s: &str) -> Result<Self, PmzvError> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = if t.contains(',') { t.split(',').map(str::trim).collect() } else { t.split("").filter(|x| !x.is_empty()).collect() };
        let letters = parts
            .iter()
            .map(|x| match *x {
                "0" => Ok(0),
                "1" => Ok(1),
                _ => Err(PmzvError::Domain(format!("bad letter {x:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        IntegrationWord::new(letters)
    }
}

impl fmt::Display for IntegrationWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u8::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

pub fn e01_alphabet() -> Arc<Alphabet> {
    Alphabet::new(&["e0", "e1"]).expect("valid alphabet")
}

/// g and h at one weight and precision, with the digits both truncation
/// levels agree on.
#[derive(Clone, Debug)]
struct Certified {
    weight: usize,
    g: Vector<PadicRing>,
    h: Vector<PadicRing>,
    internal: (usize, i64),
}

type CacheKey = (u32, usize, i64);
static CACHE: Lazy<Mutex<HashMap<CacheKey, Arc<Certified>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn ceil_log(p: u32, n: usize) -> i64 {
    let (mut k, mut q) = (0, 1usize);
    while q < n {
        q *= p as usize;
        k += 1;
    }
    k
}

/// Truncation and working precision for target precision t: the annulus
/// constant term needs about t·p series terms, and every weight of
/// division by the indices n ≤ N costs log_p N digits.
fn level(p: u32, weight: usize, t: i64) -> (usize, i64) {
    let n = p as usize * (t as usize + 3) + 2;
    let k = t + (weight as i64 + 1) * ceil_log(p, n) + 4;
    (n, k)
}

fn run_level(p: u32, weight: usize, n: usize, k: i64, need: i64) -> Result<Vector<PadicRing>, PmzvError> {
    let e = Engine::new(p, weight, k, n);
    let (g, weight_one) = solve_g(&e);
    if weight_one < need {
        return Err(PmzvError::Consistency(format!(
            "weight-one part of g has valuation {weight_one}, expected to vanish"
        )));
    }
    Ok(g)
}

fn min_precision(d: &Dense<PadicRing>, v: &Vector<PadicRing>) -> i64 {
    v.iter().filter(|x| !x.is_exact_zero()).map(Padic::precision).min().unwrap_or(i64::MAX).min(d.ring.prec)
}

fn agreement(a: &Vector<PadicRing>, b: &Vector<PadicRing>) -> i64 {
    a.iter().zip(b).map(|(x, y)| x.agreement(y)).min().unwrap_or(i64::MAX)
}

fn certify(p: u32, weight: usize, prec: i64) -> Result<Arc<Certified>, PmzvError> {
    let key = (p, weight, prec);
    if let Some(c) = CACHE.lock().expect("cache lock").get(&key) {
        return Ok(c.clone());
    }
    let mut best = 0;
    for attempt in 0..4 {
        let t = prec + 3 * attempt;
        let (n1, k1) = level(p, weight, t);
        let (n2, k2) = (n1 + 3 * p as usize, k1 + 3);
        let g1 = run_level(p, weight, n1, k1, prec)?;
        let g2 = run_level(p, weight, n2, k2, prec)?;
        let d = Dense::new(PadicRing { p, prec: k2 }, weight);
        let claimed = agreement(&g1, &g2).min(min_precision(&d, &g1));
        best = best.max(claimed);
        if claimed >= prec {
            let ring = PadicRing { p, prec };
            let d = Dense::new(ring, weight);
            let g: Vector<PadicRing> =
                g2.iter().map(|x| if x.is_exact_zero() { x.clone() } else { x.with_precision(prec) }).collect();
            let h = h_from_g(&d, p, &g);
            let c = Arc::new(Certified { weight, g, h, internal: (n2, k2) });
            CACHE.lock().expect("cache lock").insert(key, c.clone());
            return Ok(c);
        }
    }
    Err(PmzvError::Precision { requested: prec, achievable: best })
}

fn check_request(p: u32, weight: usize, prec: i64, limits: &Limits) -> Result<(), PmzvError> {
    check_prime(p)?;
    limits.check(weight)?;
    if prec < 1 {
        return Err(PmzvError::Domain("precision must be positive".into()));
    }
    if prec > MAX_PRECISION {
        return Err(PmzvError::Precision { requested: prec, achievable: MAX_PRECISION });
    }
    Ok(())
}

/// Shuffle product of two words, with multiplicities.
fn shuffle(a: &[u8], b: &[u8]) -> BTreeMap<Vec<u8>, i64> {
    let mut out = BTreeMap::new();
    if a.is_empty() || b.is_empty() {
        out.insert([a, b].concat(), 1);
        return out;
    }
    for (tail, head) in [(&a[1..], (a[0], b)), (&b[1..], (b[0], a))] {
        for (w, c) in shuffle(tail, head.1) {
            let mut v = vec![head.0];
            v.extend(w);
            *out.entry(v).or_insert(0) += c;
        }
    }
    out
}

/// Fills the coefficients of words ending in e₀ from those ending in e₁ by
/// group-likeness with h[e₀] = 0: for u = a·e₀^m with a ending in e₁, a·e₀^m
/// occurs once in a ш e₀^m and every other word there has fewer trailing e₀.
fn regularize<R: Ring>(d: &Dense<R>, admissible: &Vector<R>) -> Vector<R> {
    let r = &d.ring;
    let mut h = d.zero();
    for i in 0..d.dim {
        let u = index_word(i);
        if u.last() != Some(&0) {
            h[i] = admissible[i].clone();
        }
    }
    let mut order: Vec<usize> = (0..d.dim).filter(|&i| index_word(i).last() == Some(&0)).collect();
    order.sort_by_key(|&i| coleman::strip_trailing(&index_word(i), 0).1);
    for i in order {
        let u = index_word(i);
        let (a, m) = coleman::strip_trailing(&u, 0);
        if a.is_empty() {
            // h[e₀^m] = h[e₀]^m/m! = 0
            h[i] = r.zero();
            continue;
        }
        let mut acc = r.zero();
        for (v, c) in shuffle(a, &vec![0; m]) {
            if v != u {
                acc = r.add(&acc, &r.mul(&r.from_rational(&Rational::from_integer(c.into())), &h[word_index(&v)]));
            }
        }
        h[i] = r.neg(&acc);
    }
    h
}

/// Regularized value of I_w at the tangential base point at 1 (branch
/// l(p) = 0): the f₀ component of the expansion at 1.
pub fn regularized_value_at_t10(w: &IntegrationWord, p: u32, precision: i64) -> Result<Padic, PmzvError> {
    check_request(p, w.weight(), precision, &Limits::default())?;
    match w.weight() {
        0 => return Ok(Padic::one(p, precision)),
        // log(−1) = 0 and log 1 = 0 in closed form
        1 => return Ok(Padic::exact_zero(p)),
        _ => {}
    }
    let c = certify(p, w.weight(), precision)?;
    let d = Dense::new(PadicRing { p, prec: precision }, c.weight);
    let h = regularize(&d, &c.h);
    let u = w.u_word();
    let value = h[word_index(&u)].clone();
    if w.is_admissible() {
        // f₀ at 1 against its values along 1 + p^M
        let f0 = f0_along(&d, &h, &u, precision + 2);
        if !f0.agrees(&value) {
            return Err(PmzvError::Consistency(format!("f₀({w}) at 1 and along 1 + p^M disagree")));
        }
    }
    Ok(value)
}

/// (P₁(t)·h)[u] at t = p^m.
fn f0_along(d: &Dense<PadicRing>, h: &Vector<PadicRing>, u: &[u8], m: i64) -> Padic {
    let p = d.ring.p;
    let p1 = p1_series(d, 4);
    let mut acc = d.zero();
    let mut tn = Padic::one(p, d.ring.prec);
    for c in &p1 {
        d.add_assign(&mut acc, &d.scale(c, &tn));
        tn = tn.mul(&Padic::one(p, d.ring.prec).shift(m));
    }
    d.mul(&acc, h)[word_index(u)].clone()
}

/// The canonical path coefficients h from the tangential base point at 0 to
/// the one at 1, with h[e₀] = h[e₁] = 0.
pub fn regularized_h(p: u32, wmax: usize, precision: i64) -> Result<TruncatedSeries<PadicRing>, PmzvError> {
    regularized_h_with(p, wmax, precision, &Limits::default())
}

pub fn regularized_h_with(p: u32, wmax: usize, precision: i64, limits: &Limits) -> Result<TruncatedSeries<PadicRing>, PmzvError> {
    check_request(p, wmax, precision, limits)?;
    let c = certify(p, wmax, precision)?;
    let d = Dense::new(PadicRing { p, prec: precision }, wmax);
    let h = regularize(&d, &c.h);
    // dual route: the Frobenius fixed point gives every word directly
    if agreement(&h, &c.h) < precision {
        return Err(PmzvError::Consistency("shuffle-regularized h disagrees with the Frobenius fixed point".into()));
    }
    let s = d.to_series(&e01_alphabet(), &h)?;
    if let ShuffleReport::Fail { u, v, .. } = s.is_group_like() {
        return Err(PmzvError::Consistency(format!("h is not group-like at ({u:?}, {v:?})")));
    }
    Ok(s)
}

/// The Frobenius series g(e₀, e₁) with its prime, weight cap and precision.
#[derive(Clone, Debug, PartialEq)]
pub struct GSeries {
    pub series: TruncatedSeries<PadicRing>,
    pub p: u32,
    pub weight: usize,
    pub precision: i64,
}

impl GSeries {
    pub fn to_json(&self) -> Value {
        let mut v = self.series.to_json();
        if let Value::Object(m) = &mut v {
            m.insert("p".into(), json!(self.p));
            m.insert("weight".into(), json!(self.weight));
            m.insert("claimed_precision".into(), json!(self.precision));
        }
        v
    }
}

pub fn compute_g(p: u32, wmax: usize, precision: i64) -> Result<GSeries, PmzvError> {
    compute_g_with(p, wmax, precision, &Limits::default())
}

/// g from the fixed point h = g·F₀(h), weight by weight, checked against the
/// value extracted directly from the Frobenius structure.
pub fn compute_g_with(p: u32, wmax: usize, precision: i64, limits: &Limits) -> Result<GSeries, PmzvError> {
    let h = regularized_h_with(p, wmax, precision, limits)?;
    let c = certify(p, wmax, precision)?;
    let d = Dense::new(PadicRing { p, prec: precision }, wmax);
    let g = g_from_h(&d, p, &d.from_series(&h));
    if agreement(&g, &c.g) < precision {
        return Err(PmzvError::Consistency("g from h disagrees with the direct extraction".into()));
    }
    let series = d.to_series(&e01_alphabet(), &g)?;
    if let ShuffleReport::Fail { u, v, .. } = series.is_group_like() {
        return Err(PmzvError::Consistency(format!("g is not group-like at ({u:?}, {v:?})")));
    }
    Ok(GSeries { series, p, weight: wmax, precision })
}

/// Truncation level and working precision behind a certified result.
pub fn internal_parameters(p: u32, wmax: usize, precision: i64) -> Result<(usize, i64), PmzvError> {
    check_request(p, wmax, precision, &Limits::extended())?;
    Ok(certify(p, wmax, precision)?.internal)
}

/// ζ_p(s_k, …, s₁) = g[e₀^{s_k−1}e₁⋯e₀^{s₁−1}e₁]/p^{Σsᵢ}.
#[derive(Clone, Debug, PartialEq)]
pub struct PmzvValue {
    pub p: u32,
    pub indices: Vec<u32>,
    pub value: Padic,
    pub claimed_precision: i64,
}

impl PmzvValue {
    pub fn to_json(&self) -> Value {
        let mut v = self.value.to_json();
        if let Value::Object(m) = &mut v {
            m.insert("indices".into(), json!(self.indices));
            m.insert("claimed_precision".into(), json!(self.claimed_precision));
        }
        v
    }
}

/// g is computed to `precision` digits; division by p^{Σsᵢ} leaves
/// precision − Σsᵢ.
pub fn pmzv(p: u32, s: &[u32], precision: i64) -> Result<PmzvValue, PmzvError> {
    let w = IntegrationWord::from_indices(s)?;
    let weight = w.weight();
    check_request(p, weight, precision, &Limits::default())?;
    let claimed = precision - weight as i64;
    if claimed < 1 {
        return Err(PmzvError::Precision { requested: precision, achievable: weight as i64 + 1 });
    }
    let value = if weight == 1 {
        Padic::exact_zero(p)
    } else {
        let g = compute_g(p, weight, precision)?;
        let c = g.series.get(&crate::ncseries::Word::from_slice(&w.u_word()));
        let v = c.shift(-(weight as i64));
        if v.is_zero() { Padic::zero(p, claimed) } else { v.with_precision(claimed) }
    };
    Ok(PmzvValue { p, indices: s.to_vec(), value, claimed_precision: claimed })
}

/// Expansion of I_w on the disk at 1: Λ = P₁(t)·exp(e₁ log t)·h with
/// t = z − 1, so column k collects Σ P₁[a](t)·h[c]/k! over w = a·e₁^k·c.
pub fn expansion_at_one(
    w: &IntegrationWord,
    p: u32,
    precision: i64,
    nterms: usize,
) -> Result<ColemanExpansion<PadicRing>, PmzvError> {
    let weight = w.weight();
    check_request(p, weight.max(1), precision, &Limits::default())?;
    let ring = PadicRing { p, prec: precision };
    let d = Dense::new(ring.clone(), weight.max(1));
    let h = if weight >= 2 {
        let c = certify(p, weight, precision)?;
        regularize(&d, &c.h)
    } else {
        d.one()
    };
    let p1 = p1_series(&d, nterms);
    let u = w.u_word();
    let mut columns: Vec<Vec<Padic>> = Vec::new();
    for start in 0..=u.len() {
        for end in start..=u.len() {
            if u[start..end].iter().any(|&l| l != 1) {
                continue;
            }
            let k = end - start;
            let (a, c) = (&u[..start], &u[end..]);
            let hc = h[word_index(c)].clone();
            if ring.is_zero(&hc) {
                continue;
            }
            let fact = (1..=k).fold(BigInt::one(), |x, i| x * BigInt::from(i));
            let coef = ring.scale_rational(&hc, &Rational::new(BigInt::one(), fact));
            while columns.len() <= k {
                columns.push(vec![ring.zero(); nterms]);
            }
            for (n, pn) in p1.iter().enumerate() {
                let x = ring.mul(&pn[word_index(a)], &coef);
                columns[k][n] = ring.add(&columns[k][n], &x);
            }
        }
    }
    if columns.is_empty() {
        columns.push(vec![ring.zero(); nterms]);
    }
    Ok(ColemanExpansion { ring, center: 1, columns })
}
