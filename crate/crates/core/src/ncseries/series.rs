use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use super::{Alphabet, SeriesError, Word};
use crate::coeffring::{Rational, Ring};
use crate::par::{self, Exec};

/// Sparse series Σ a[w]·w over words of length ≤ cap.
#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<R: Ring> {
    ring: R,
    alphabet: Arc<Alphabet>,
    cap: usize,
    terms: BTreeMap<Word, R::Elem>,
}

// below this many coefficient pairs a product stays on one thread
const PAR_THRESHOLD: usize = 4096;

impl<R: Ring> TruncatedSeries<R> {
    pub fn zero(ring: R, alphabet: Arc<Alphabet>, cap: usize) -> Self {
        TruncatedSeries { ring, alphabet, cap, terms: BTreeMap::new() }
    }

    pub fn one(ring: R, alphabet: Arc<Alphabet>, cap: usize) -> Self {
        let mut s = Self::zero(ring, alphabet, cap);
        let one = s.ring.one();
        s.terms.insert(Word::empty(), one);
        s
    }

    /// The series c·w (zero if w is longer than the cap).
    pub fn monomial(ring: R, alphabet: Arc<Alphabet>, cap: usize, w: Word, c: R::Elem) -> Self {
        let mut s = Self::zero(ring, alphabet, cap);
        s.add_term(w, c);
        s
    }

    pub fn letter(ring: R, alphabet: Arc<Alphabet>, cap: usize, l: u8) -> Self {
        let one = ring.one();
        Self::monomial(ring, alphabet, cap, Word::letter(l), one)
    }

    /// Builds a series from terms; repeated words are summed.
    pub fn from_terms(
        ring: R,
        alphabet: Arc<Alphabet>,
        cap: usize,
        terms: impl IntoIterator<Item = (Word, R::Elem)>,
    ) -> Result<Self, SeriesError> {
        let mut s = Self::zero(ring, alphabet, cap);
        for (w, c) in terms {
            if w.len() > cap {
                return Err(SeriesError::OutOfCap { len: w.len(), cap });
            }
            if w.iter().any(|&l| l as usize >= s.alphabet.len()) {
                return Err(SeriesError::Domain(format!("letter index out of range in {w:?}")));
            }
            s.add_term(w, c);
        }
        Ok(s)
    }

    /// Adds c·w in place, dropping words beyond the cap.
    pub(crate) fn add_term(&mut self, w: Word, c: R::Elem) {
        if w.len() > self.cap || self.ring.is_exact_zero(&c) {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(e) => {
                let s = self.ring.add(e, &c);
                if self.ring.is_exact_zero(&s) {
                    self.terms.remove(&w);
                } else {
                    *e = s;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn terms(&self) -> &BTreeMap<Word, R::Elem> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every coefficient is zero to its known precision.
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| self.ring.is_zero(c))
    }

    pub fn coefficient(&self, w: &Word) -> Result<R::Elem, SeriesError> {
        if w.len() > self.cap {
            return Err(SeriesError::OutOfCap { len: w.len(), cap: self.cap });
        }
        Ok(self.get(w))
    }

    /// Coefficient of w, zero when absent (callers guarantee |w| ≤ cap).
    pub fn get(&self, w: &Word) -> R::Elem {
        self.terms.get(w).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant(&self) -> R::Elem {
        self.get(&Word::empty())
    }

    pub fn check_compatible(&self, o: &Self) -> Result<(), SeriesError> {
        if self.ring != o.ring {
            return Err(SeriesError::Mismatch(format!(
                "rings {} and {}",
                self.ring.describe(),
                o.ring.describe()
            )));
        }
        if self.alphabet != o.alphabet {
            return Err(SeriesError::Mismatch("alphabets differ".into()));
        }
        if self.cap != o.cap {
            return Err(SeriesError::Mismatch(format!("caps {} and {}", self.cap, o.cap)));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(o)?;
        let mut s = self.clone();
        for (w, c) in &o.terms {
            s.add_term(w.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| self.ring.neg(c))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, SeriesError> {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        self.map_coeffs(|x| self.ring.mul(c, x))
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&self.ring.from_rational(q))
    }

    pub fn map_coeffs(&self, f: impl Fn(&R::Elem) -> R::Elem) -> Self {
        let mut s = Self::zero(self.ring.clone(), self.alphabet.clone(), self.cap);
        for (w, c) in &self.terms {
            s.add_term(w.clone(), f(c));
        }
        s
    }

    /// Keeps only the words of length d.
    pub fn degree_part(&self, d: usize) -> Self {
        self.filter(|w| w.len() == d)
    }

    pub fn filter(&self, keep: impl Fn(&Word) -> bool) -> Self {
        let terms = self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, c)| (w.clone(), c.clone())).collect();
        TruncatedSeries { ring: self.ring.clone(), alphabet: self.alphabet.clone(), cap: self.cap, terms }
    }

    /// Lowers the cap, discarding longer words.
    pub fn truncate(&self, cap: usize) -> Result<Self, SeriesError> {
        if cap > self.cap {
            return Err(SeriesError::Domain(format!("cannot raise cap {} to {cap}", self.cap)));
        }
        let mut s = self.filter(|w| w.len() <= cap);
        s.cap = cap;
        Ok(s)
    }

    /// Smallest length of a stored word whose coefficient is not zero.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.iter().find(|(_, c)| !self.ring.is_zero(c)).map(|(w, _)| w.len())
    }

    pub fn concat_mul(&self, o: &Self) -> Result<Self, SeriesError> {
        self.concat_mul_with(Exec::default(), o)
    }

    pub fn concat_mul_with(&self, exec: Exec, o: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(o)?;
        Ok(self.mul_unchecked(exec, o))
    }

    pub(crate) fn mul_unchecked(&self, exec: Exec, o: &Self) -> Self {
        let cap = self.cap;
        let left: Vec<(&Word, &R::Elem)> = self.terms.iter().collect();
        let work = |(u, a): &(&Word, &R::Elem)| {
            let mut part: Vec<(Word, R::Elem)> = Vec::new();
            let room = cap - u.len();
            for (v, b) in o.terms.iter().take_while(|(v, _)| v.len() <= room) {
                part.push((u.concat(v), self.ring.mul(a, b)));
            }
            part
        };
        let exec = if left.len() * o.terms.len() < PAR_THRESHOLD { Exec::Sequential } else { exec };
        let parts = par::map(exec, &left, work);
        let mut s = Self::zero(self.ring.clone(), self.alphabet.clone(), cap);
        for part in parts {
            for (w, c) in part {
                s.add_term(w, c);
            }
        }
        s
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::one(self.ring.clone(), self.alphabet.clone(), self.cap);
        for _ in 0..n {
            acc = acc.mul_unchecked(Exec::default(), self);
        }
        acc
    }

    fn require_constant(&self, want_one: bool, what: &str) -> Result<(), SeriesError> {
        let c = self.constant();
        let ok = if want_one { self.ring.is_one(&c) } else { self.ring.is_zero(&c) };
        if ok {
            Ok(())
        } else {
            Err(SeriesError::Domain(format!(
                "{what} needs constant term {}, found {}",
                if want_one { 1 } else { 0 },
                self.ring.encode(&c)
            )))
        }
    }

    fn without_constant(&self) -> Self {
        self.filter(|w| !w.is_empty())
    }

    /// Σ aⁿ/n! for a with zero constant term.
    pub fn exp_series(&self) -> Result<Self, SeriesError> {
        self.require_constant(false, "exp")?;
        let a = self.without_constant();
        let one = Self::one(self.ring.clone(), self.alphabet.clone(), self.cap);
        // Horner: 1 + a(1 + a/2(1 + a/3(...)))
        let mut acc = one.clone();
        for n in (1..=self.cap).rev() {
            let q = Rational::new(BigInt::one(), BigInt::from(n));
            acc = one.add(&a.mul_unchecked(Exec::default(), &acc).scale_rational(&q))?;
        }
        Ok(acc)
    }

    /// Σ (−1)ⁿ⁺¹(a−1)ⁿ/n for a with constant term 1.
    pub fn log_series(&self) -> Result<Self, SeriesError> {
        self.require_constant(true, "log")?;
        let b = self.without_constant();
        let mut acc = Self::zero(self.ring.clone(), self.alphabet.clone(), self.cap);
        let mut pw = b.clone();
        for n in 1..=self.cap {
            let q = Rational::new(BigInt::from(if n % 2 == 1 { 1 } else { -1 }), BigInt::from(n));
            acc = acc.add(&pw.scale_rational(&q))?;
            pw = pw.mul_unchecked(Exec::default(), &b);
        }
        Ok(acc)
    }

    /// Σ (1−a)ⁿ for a with constant term 1.
    pub fn mul_inverse(&self) -> Result<Self, SeriesError> {
        self.require_constant(true, "inverse")?;
        let b = self.without_constant().neg();
        let one = Self::one(self.ring.clone(), self.alphabet.clone(), self.cap);
        let mut acc = one.clone();
        for _ in 0..self.cap {
            acc = one.add(&b.mul_unchecked(Exec::default(), &acc))?;
        }
        Ok(acc)
    }

    /// Commutator ab − ba.
    pub fn commutator(&self, o: &Self) -> Result<Self, SeriesError> {
        self.concat_mul(o)?.sub(&o.concat_mul(self)?)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word: Vec<&str> = w.iter().map(|&l| self.alphabet.name(l)).collect();
                json!({"word": word, "coeff": self.ring.encode(c)})
            })
            .collect();
        json!({
            "alphabet": self.alphabet.names(),
            "cap": self.cap,
            "ring": self.ring.tag_json(),
            "terms": terms,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, SeriesError> {
        let bad = |m: &str| SeriesError::Parse(m.to_string());
        let names: Vec<String> = v
            .get("alphabet")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing alphabet"))?
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("letter names must be strings")))
            .collect::<Result<_, _>>()?;
        let alphabet = Alphabet::new(&names)?;
        let cap = v.get("cap").and_then(Value::as_u64).ok_or_else(|| bad("missing cap"))? as usize;
        let ring = R::from_tag_json(v.get("ring").ok_or_else(|| bad("missing ring"))?)?;
        let mut terms = Vec::new();
        for t in v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing terms"))? {
            let mut w = Word::empty();
            for l in t.get("word").and_then(Value::as_array).ok_or_else(|| bad("term without word"))? {
                let name = l.as_str().ok_or_else(|| bad("letter names must be strings"))?;
                w.push(alphabet.index_of(name).ok_or_else(|| bad(&format!("unknown letter {name:?}")))?);
            }
            let c = ring.decode(t.get("coeff").ok_or_else(|| bad("term without coeff"))?)?;
            terms.push((w, c));
        }
        Self::from_terms(ring, alphabet, cap, terms)
    }
}

impl<R: Ring> fmt::Debug for TruncatedSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<R: Ring> fmt::Display for TruncatedSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 (cap {})", self.cap);
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let c = match self.ring.encode(c) {
                    Value::String(s) => s,
                    v => v.to_string(),
                };
                format!("({c})·{}", self.alphabet.format_word(w))
            })
            .collect();
        write!(f, "{} (cap {})", parts.join(" + "), self.cap)
    }
}
