use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use once_cell::sync::Lazy;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::dense::{index_word, word_index, Dense, Series};
use super::frobenius::p0_series;
use super::{IntegrationWord, PmzvError, WEIGHT_CAP};
use crate::coeffring::{format_rational, Rational, Ring, QQ};
use crate::par::{self, Exec};

/// Taylor coefficients c₀..c_nterms of I_w at 0, by successive
/// antiderivatives vanishing at 0.
pub fn polylog_taylor(w: &IntegrationWord, nterms: usize) -> Result<Vec<Rational>, PmzvError> {
    if !w.is_admissible() {
        return Err(PmzvError::RegularizationRequired(w.to_string()));
    }
    let mut f = vec![Rational::zero(); nterms + 1];
    f[0] = Rational::one();
    for &l in w.letters() {
        let mut g = vec![Rational::zero(); nterms + 1];
        if l == 1 {
            // ∫ f/(t−1) = −∫ f·Σ t^m
            let mut prefix = Rational::zero();
            for n in 0..nterms {
                prefix += &f[n];
                g[n + 1] = -&prefix / Rational::from_integer(BigInt::from(n + 1));
            }
        } else {
            for n in 1..=nterms {
                g[n] = &f[n] / Rational::from_integer(BigInt::from(n));
            }
        }
        f = g;
    }
    Ok(f)
}

/// Σ_k f_k(x)·log^k(x) with x = z − center; column k holds the Taylor
/// coefficients of f_k.
#[derive(Clone, Debug, PartialEq)]
pub struct ColemanExpansion<R: Ring> {
    pub ring: R,
    pub center: u8,
    pub columns: Vec<Vec<R::Elem>>,
}

impl<R: Ring> ColemanExpansion<R> {
    pub fn nterms(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn column(&self, k: usize) -> Option<&[R::Elem]> {
        self.columns.get(k).map(Vec::as_slice)
    }

    /// Checks x·d/dx of this expansion against (x·ω_letter/dx)·inner,
    /// log-power by log-power, on all retained coefficients but the last.
    pub fn satisfies_equation(&self, letter: u8, inner: &ColemanExpansion<R>) -> bool {
        let r = &self.ring;
        let n = self.nterms().min(inner.nterms());
        let kmax = self.columns.len().max(inner.columns.len() + 1);
        let zero_col = vec![r.zero(); n];
        let col = |e: &ColemanExpansion<R>, k: usize| -> Vec<R::Elem> {
            e.columns.get(k).map_or_else(|| zero_col.clone(), |c| c[..n].to_vec())
        };
        // x·ω/dx as a power series in x
        let weight: Vec<R::Elem> = (0..n)
            .map(|m| match (self.center, letter) {
                (0, 0) | (1, 1) => r.from_i64((m == 0) as i64),
                (0, _) => r.from_i64(-((m >= 1) as i64)),
                _ => r.from_i64(if m == 0 { 0 } else if m % 2 == 1 { 1 } else { -1 }),
            })
            .collect();
        (0..kmax).all(|k| {
            let f = col(self, k);
            let f_next = col(self, k + 1);
            let g = col(inner, k);
            (0..n).all(|m| {
                let lhs = r.add(&r.from_i64(m as i64).pipe(|c| r.mul(&c, &f[m])), &r.mul(&r.from_i64(k as i64 + 1), &f_next[m]));
                let mut rhs = r.zero();
                for j in 0..=m {
                    if !r.is_exact_zero(&weight[j]) {
                        rhs = r.add(&rhs, &r.mul(&weight[j], &g[m - j]));
                    }
                }
                r.is_zero(&r.sub(&lhs, &rhs))
            })
        })
    }
}

trait Pipe: Sized {
    fn pipe<T>(self, f: impl FnOnce(Self) -> T) -> T {
        f(self)
    }
}

impl<T> Pipe for T {}

fn factorial(k: usize) -> Rational {
    Rational::from_integer((1..=k).fold(BigInt::one(), |a, i| a * BigInt::from(i)))
}

/// Splits a U-word into (head, k) with the word = head·e_letter^k, k maximal.
pub(crate) fn strip_trailing(u: &[u8], letter: u8) -> (&[u8], usize) {
    let k = u.iter().rev().take_while(|&&l| l == letter).count();
    (&u[..u.len() - k], k)
}

fn check_weight(w: usize) -> Result<(), PmzvError> {
    if w > WEIGHT_CAP {
        return Err(PmzvError::WeightOverflow { weight: w, cap: WEIGHT_CAP });
    }
    Ok(())
}

static P0_CACHE: Lazy<Mutex<HashMap<(usize, usize), Arc<Series<QQ>>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn rational_p0(weight: usize, nterms: usize) -> Arc<Series<QQ>> {
    if let Some(s) = P0_CACHE.lock().expect("cache lock").get(&(weight, nterms)) {
        return s.clone();
    }
    let s = Arc::new(p0_series(&Dense::new(QQ, weight), nterms));
    P0_CACHE.lock().expect("cache lock").insert((weight, nterms), s.clone());
    s
}

/// Expansion of I_w on the disk at 0 from Λ = P₀(z)·exp(e₀ log z).
pub fn expansion_at_zero(w: &IntegrationWord, nterms: usize) -> Result<ColemanExpansion<QQ>, PmzvError> {
    check_weight(w.weight())?;
    let d = Dense::new(QQ, w.weight().max(1));
    let p0 = rational_p0(d.weight, nterms);
    Ok(expansion_from(&d, &p0, &w.u_word(), 0, nterms))
}

pub(crate) fn expansion_from<R: Ring>(d: &Dense<R>, p: &Series<R>, u: &[u8], center: u8, nterms: usize) -> ColemanExpansion<R> {
    let (_, kmax) = strip_trailing(u, center);
    let columns = (0..=kmax)
        .map(|k| {
            let head = &u[..u.len() - k];
            let inv = Rational::one() / factorial(k);
            (0..nterms).map(|n| d.ring.scale_rational(&p[n][word_index(head)], &inv)).collect()
        })
        .collect();
    ColemanExpansion { ring: d.ring.clone(), center, columns }
}

/// One term G[u](z)·scale·I_v(z) of a functional equation; u is a nonempty
/// prefix of the word (as a U-word) and v the remaining suffix.
#[derive(Clone, Debug, PartialEq)]
pub struct Correction {
    pub outer: Vec<u8>,
    pub inner: Vec<u8>,
    pub scale: Rational,
    pub coefficient: Vec<Rational>,
}

/// I_w(z^p) − p^{|w|}·I_w(z) = Σ corrections, with I_∅ = 1.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalEquation {
    pub word: IntegrationWord,
    pub p: u32,
    pub nterms: usize,
    pub corrections: Vec<Correction>,
}

fn word_text(u: &[u8]) -> String {
    if u.is_empty() {
        return "1".into();
    }
    u.iter().map(|l| format!("e{l}")).collect::<Vec<_>>().join("")
}

impl FunctionalEquation {
    /// Exact check of both sides, log-power by log-power, on nterms
    /// coefficients.
    pub fn verify(&self) -> bool {
        let weight = self.word.weight().max(1);
        let d = Dense::new(QQ, weight);
        let p0 = rational_p0(weight, self.nterms);
        let n = self.nterms;
        let p = self.p as usize;
        let pw = |k: usize| Rational::from_integer(BigInt::from(self.p).pow(k as u32));
        let u = self.word.u_word();
        let lhs_exp = expansion_from(&d, &p0, &u, 0, n);
        let mut lhs: Vec<Vec<Rational>> = Vec::new();
        for (k, col) in lhs_exp.columns.iter().enumerate() {
            let mut c = vec![Rational::zero(); n];
            for (m, x) in col.iter().enumerate() {
                if m * p < n {
                    c[m * p] += x * pw(k);
                }
            }
            for (m, x) in col.iter().enumerate() {
                c[m] -= x * pw(u.len());
            }
            lhs.push(c);
        }
        let inners: Vec<(Rational, &[Rational], ColemanExpansion<QQ>)> = self
            .corrections
            .iter()
            .map(|c| (c.scale.clone(), c.coefficient.as_slice(), expansion_from(&d, &p0, &c.inner, 0, n)))
            .collect();
        if inners.iter().any(|(_, _, e)| e.columns.len() > lhs.len()) {
            return false;
        }
        let rhs_at = |k: usize, m: usize| -> Rational {
            let mut acc = Rational::zero();
            for (scale, a, inner) in &inners {
                let Some(col) = inner.columns.get(k) else { continue };
                let mut part = Rational::zero();
                for i in 0..=m.min(a.len() - 1) {
                    if !a[i].is_zero() && !col[m - i].is_zero() {
                        part += &a[i] * &col[m - i];
                    }
                }
                acc += part * scale;
            }
            acc
        };
        let cells: Vec<(usize, usize)> = (0..lhs.len()).flat_map(|k| (0..n).map(move |m| (k, m))).collect();
        par::all(Exec::default(), &cells, |&(k, m)| rhs_at(k, m) == lhs[k][m])
    }

    pub fn to_json(&self) -> Value {
        json!({
            "word": self.word.to_string(),
            "p": self.p,
            "nterms": self.nterms,
            "corrections": self.corrections.iter().map(|c| json!({
                "outer": word_text(&c.outer),
                "inner": word_text(&c.inner),
                "scale": format_rational(&c.scale),
                "coefficient_head": c.coefficient.iter().take(8).map(format_rational).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// G with Λ(z^p) = G·F₀(Λ), F₀ the scaling eᵢ ↦ p·eᵢ, from its own equation
/// zG' = p(e₀ + e₁z^p/(z^p − 1))·G − p·G·(e₀ + e₁z/(z − 1)), G(0) = 1.
/// Up to weight 3 the conjugation in F₀(e₁) only involves g in weights 1
/// and 2, where g vanishes, so the scaling is exact there.
fn frobenius_g_series(p: u32, weight: usize, nterms: usize) -> (Dense<QQ>, Series<QQ>) {
    let d = Dense::new(QQ, weight);
    let p = p as usize;
    let pq = Rational::from_integer(BigInt::from(p));
    let e0p = d.scale_q(&d.letter(0), &pq);
    let e1 = d.letter(1);
    let mut g = vec![d.one()];
    // Σ_{k<n} G_k, and Σ_{m≥1} G_{n−pm} per residue of n mod p
    let mut all = d.zero();
    let mut by_residue = vec![d.zero(); p];
    for n in 1..nterms {
        d.add_assign(&mut all, &g[n - 1]);
        if n >= p {
            let r = n % p;
            let mut s = by_residue[r].clone();
            d.add_assign(&mut s, &g[n - p]);
            by_residue[r] = s;
        }
        let left = d.mul(&e1, &by_residue[n % p]);
        let right = d.mul(&all, &e1);
        let rhs = d.scale_q(&d.sub(&right, &left), &pq);
        g.push(d.solve_shift(n as i64, &e0p, &rhs));
    }
    (d, g)
}

/// Functional equations for every word of weight 1..=weight.
pub fn frobenius_functional_equations(p: u32, weight: usize, nterms: usize) -> Result<Vec<FunctionalEquation>, PmzvError> {
    super::check_prime(p)?;
    check_weight(weight)?;
    let (d, g) = frobenius_g_series(p, weight, nterms);
    let mut out = Vec::new();
    for i in 1..d.dim {
        let u = index_word(i);
        let corrections = (1..=u.len())
            .map(|cut| {
                let (outer, inner) = u.split_at(cut);
                Correction {
                    outer: outer.to_vec(),
                    inner: inner.to_vec(),
                    scale: Rational::from_integer(BigInt::from(p).pow(inner.len() as u32)),
                    coefficient: g.iter().map(|c| c[word_index(outer)].clone()).collect(),
                }
            })
            .collect();
        out.push(FunctionalEquation { word: IntegrationWord::from_u_word(&u), p, nterms, corrections });
    }
    Ok(out)
}

pub fn frobenius_functional_equation(w: &IntegrationWord, p: u32, nterms: usize) -> Result<FunctionalEquation, PmzvError> {
    check_weight(w.weight())?;
    let all = frobenius_functional_equations(p, w.weight().max(1), nterms)?;
    Ok(all.into_iter().find(|fe| &fe.word == w).expect("every word of the weight is listed"))
}
