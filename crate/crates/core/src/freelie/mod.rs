//! Free Lie algebra in the Lyndon basis (standard bracketing), with
//! conversion to and from primitive series and the BCH product.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use once_cell::sync::Lazy;
use thiserror::Error;

use crate::coeffring::{Rational, Ring};
use crate::ncseries::{Alphabet, SeriesError, ShuffleReport, TruncatedSeries, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("series is not primitive: shuffle pair ({u:?}, {v:?}) does not vanish")]
    NotPrimitive { u: Word, v: Word },
    #[error("mismatched Lie elements: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn is_lyndon(w: &[u8]) -> bool {
    (1..w.len()).all(|i| w < &w[i..])
}

/// Lyndon words of length exactly d over k letters, lexicographically.
pub fn lyndon_words(k: usize, d: usize) -> Vec<Word> {
    // Duval's generation of all Lyndon words of length ≤ d
    let mut out = Vec::new();
    if d == 0 || k == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        if w.len() == d {
            out.push(Word::from_slice(&w));
        }
        let m = w.len();
        while w.len() < d {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last as usize == k - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            None => break,
            Some(l) => *l += 1,
        }
    }
    out
}

fn mobius(n: usize) -> i64 {
    let mut n = n;
    let mut r = 1;
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            n /= q;
            if n % q == 0 {
                return 0;
            }
            r = -r;
        }
        q += 1;
    }
    if n > 1 {
        r = -r;
    }
    r
}

/// (1/d) Σ_{e|d} μ(e) k^{d/e}
pub fn witt_number(k: usize, d: usize) -> usize {
    let mut s: i128 = 0;
    for e in 1..=d {
        if d % e == 0 {
            s += mobius(e) as i128 * (k as i128).pow((d / e) as u32);
        }
    }
    (s / d as i128) as usize
}

/// Standard factorization w = uv with v the longest proper Lyndon suffix.
pub fn standard_factorization(w: &Word) -> Option<(Word, Word)> {
    let s = w.as_slice();
    (1..s.len())
        .find(|&i| is_lyndon(&s[i..]))
        .map(|i| (Word::from_slice(&s[..i]), Word::from_slice(&s[i..])))
}

type Expansion = Vec<(Word, i64)>;

/// Lyndon words up to a cap with their bracket expansions.
pub struct LyndonBasis {
    alphabet: Arc<Alphabet>,
    cap: usize,
    words: Vec<Word>,
    by_degree: Vec<(usize, usize)>,
    index: HashMap<Word, usize>,
    expansions: Vec<Expansion>,
}

static BASIS_CACHE: Lazy<Mutex<HashMap<(Vec<String>, usize), Arc<LyndonBasis>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn commutator_expansion(a: &Expansion, b: &Expansion) -> Expansion {
    let mut m: BTreeMap<Word, i64> = BTreeMap::new();
    for (u, x) in a {
        for (v, y) in b {
            *m.entry(u.concat(v)).or_default() += x * y;
            *m.entry(v.concat(u)).or_default() -= x * y;
        }
    }
    m.into_iter().filter(|(_, c)| *c != 0).collect()
}

impl LyndonBasis {
    /// The shared basis for this alphabet and cap.
    pub fn get(alphabet: &Arc<Alphabet>, cap: usize) -> Arc<LyndonBasis> {
        let key = (alphabet.names().to_vec(), cap);
        let mut cache = BASIS_CACHE.lock().unwrap();
        if let Some(b) = cache.get(&key) {
            return b.clone();
        }
        let b = Arc::new(Self::build(alphabet.clone(), cap));
        cache.insert(key, b.clone());
        b
    }

    fn build(alphabet: Arc<Alphabet>, cap: usize) -> LyndonBasis {
        let k = alphabet.len();
        let mut words = Vec::new();
        let mut by_degree = vec![(0, 0)];
        for d in 1..=cap {
            let start = words.len();
            words.extend(lyndon_words(k, d));
            by_degree.push((start, words.len()));
        }
        let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut expansions: Vec<Expansion> = Vec::with_capacity(words.len());
        for w in &words {
            let e = match standard_factorization(w) {
                None => vec![(w.clone(), 1)],
                Some((u, v)) => commutator_expansion(&expansions[index[&u]], &expansions[index[&v]]),
            };
            expansions.push(e);
        }
        LyndonBasis { alphabet, cap, words, by_degree, index, expansions }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, i: usize) -> &Word {
        &self.words[i]
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Basis indices of degree d.
    pub fn degree_range(&self, d: usize) -> std::ops::Range<usize> {
        if d == 0 || d > self.cap {
            return 0..0;
        }
        let (a, b) = self.by_degree[d];
        a..b
    }

    pub fn degree_words(&self, d: usize) -> &[Word] {
        &self.words[self.degree_range(d)]
    }

    /// Bracketing of basis element i as a word expansion with integer coefficients.
    pub fn expansion(&self, i: usize) -> &[(Word, i64)] {
        &self.expansions[i]
    }

    /// Bracketing as nested brackets of letter names, e.g. `[e0,[e0,e1]]`.
    pub fn bracketing(&self, i: usize) -> String {
        let w = &self.words[i];
        match standard_factorization(w) {
            None => self.alphabet.name(w.as_slice()[0]).to_string(),
            Some((u, v)) => format!("[{},{}]", self.bracketing(self.index[&u]), self.bracketing(self.index[&v])),
        }
    }
}

/// Element of the free Lie algebra, in coordinates on the Lyndon basis.
#[derive(Clone)]
pub struct LieElement<R: Ring> {
    ring: R,
    basis: Arc<LyndonBasis>,
    coords: BTreeMap<usize, R::Elem>,
}

impl<R: Ring> PartialEq for LieElement<R> {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.basis, &o.basis) && self.ring == o.ring && self.coords == o.coords
    }
}

impl<R: Ring> LieElement<R> {
    pub fn zero(ring: R, basis: Arc<LyndonBasis>) -> Self {
        LieElement { ring, basis, coords: BTreeMap::new() }
    }

    /// c times basis element i.
    pub fn basis_element(ring: R, basis: Arc<LyndonBasis>, i: usize, c: R::Elem) -> Self {
        let mut e = Self::zero(ring, basis);
        e.add_coord(i, c);
        e
    }

    pub fn letter(ring: R, basis: Arc<LyndonBasis>, l: u8) -> Self {
        let i = basis.index_of(&Word::letter(l)).expect("letter in alphabet");
        let one = ring.one();
        Self::basis_element(ring, basis, i, one)
    }

    pub fn from_coords(ring: R, basis: Arc<LyndonBasis>, coords: impl IntoIterator<Item = (usize, R::Elem)>) -> Self {
        let mut e = Self::zero(ring, basis);
        for (i, c) in coords {
            assert!(i < e.basis.len(), "basis index out of range");
            e.add_coord(i, c);
        }
        e
    }

    fn add_coord(&mut self, i: usize, c: R::Elem) {
        if self.ring.is_exact_zero(&c) {
            return;
        }
        let v = match self.coords.remove(&i) {
            Some(x) => self.ring.add(&x, &c),
            None => c,
        };
        if !self.ring.is_exact_zero(&v) {
            self.coords.insert(i, v);
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn basis(&self) -> &Arc<LyndonBasis> {
        &self.basis
    }

    pub fn coords(&self) -> &BTreeMap<usize, R::Elem> {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> R::Elem {
        self.coords.get(&i).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.values().all(|c| self.ring.is_zero(c))
    }

    fn check(&self, o: &Self) -> Result<(), LieError> {
        if !Arc::ptr_eq(&self.basis, &o.basis) || self.ring != o.ring {
            return Err(LieError::Mismatch("different bases or rings".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, LieError> {
        self.check(o)?;
        let mut e = self.clone();
        for (i, c) in &o.coords {
            e.add_coord(*i, c.clone());
        }
        Ok(e)
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.ring.from_i64(-1))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, LieError> {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let coords = self.coords.iter().map(|(i, x)| (*i, self.ring.mul(c, x)));
        Self::from_coords(self.ring.clone(), self.basis.clone(), coords)
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&self.ring.from_rational(q))
    }

    pub fn degree_part(&self, d: usize) -> Self {
        let r = self.basis.degree_range(d);
        let coords = self.coords.iter().filter(|(i, _)| r.contains(i)).map(|(i, c)| (*i, c.clone()));
        Self::from_coords(self.ring.clone(), self.basis.clone(), coords)
    }

    pub fn lie_to_series(&self) -> TruncatedSeries<R> {
        let mut terms = Vec::new();
        for (i, c) in &self.coords {
            for (w, n) in self.basis.expansion(*i) {
                let k = self.ring.from_rational(&Rational::from_integer(BigInt::from(*n)));
                terms.push((w.clone(), self.ring.mul(c, &k)));
            }
        }
        TruncatedSeries::from_terms(self.ring.clone(), self.basis.alphabet.clone(), self.basis.cap, terms)
            .expect("basis words are within the cap")
    }

    /// Projects a primitive series onto the Lyndon basis.
    pub fn series_to_lie(basis: Arc<LyndonBasis>, s: &TruncatedSeries<R>) -> Result<Self, LieError> {
        if let ShuffleReport::Fail { u, v, .. } = s.is_primitive() {
            return Err(LieError::NotPrimitive { u, v });
        }
        Self::project(basis, s)
    }

    /// Triangular projection without the primitivity test; fails if a
    /// residue remains.
    pub(crate) fn project(basis: Arc<LyndonBasis>, s: &TruncatedSeries<R>) -> Result<Self, LieError> {
        if s.alphabet() != basis.alphabet() || s.cap() != basis.cap() {
            return Err(LieError::Mismatch("series and basis disagree on alphabet or cap".into()));
        }
        let ring = s.ring().clone();
        let mut residue: BTreeMap<Word, R::Elem> = s.terms().clone();
        let mut out = Self::zero(ring.clone(), basis.clone());
        // P_ℓ = ℓ + (lexicographically larger words), so ascending order is triangular
        for i in 0..basis.len() {
            let w = basis.word(i);
            let Some(c) = residue.get(w).cloned() else { continue };
            for (v, n) in basis.expansion(i) {
                let k = ring.from_rational(&Rational::from_integer(BigInt::from(*n)));
                let sub = ring.mul(&c, &k);
                let cur = residue.remove(v).unwrap_or_else(|| ring.zero());
                let nv = ring.sub(&cur, &sub);
                if !ring.is_exact_zero(&nv) {
                    residue.insert(v.clone(), nv);
                }
            }
            out.add_coord(i, c);
        }
        if let Some((w, _)) = residue.iter().find(|(_, c)| !ring.is_zero(c)) {
            return Err(LieError::NotPrimitive { u: w.clone(), v: Word::empty() });
        }
        Ok(out)
    }

    pub fn bracket(&self, o: &Self) -> Result<Self, LieError> {
        self.check(o)?;
        let c = self.lie_to_series().commutator(&o.lie_to_series())?;
        Self::project(self.basis.clone(), &c)
    }

    /// log(exp(a)·exp(b)), computed in the series ring.
    pub fn bch(&self, o: &Self) -> Result<Self, LieError> {
        self.check(o)?;
        let ea = self.lie_to_series().exp_series()?;
        let eb = o.lie_to_series().exp_series()?;
        let z = ea.concat_mul(&eb)?.log_series()?;
        Self::project(self.basis.clone(), &z)
    }

    pub fn exp(&self) -> TruncatedSeries<R> {
        self.lie_to_series().exp_series().expect("Lie elements have no constant term")
    }
}

impl<R: Ring> fmt::Debug for LieElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|(i, c)| format!("({})·{}", self.ring.encode(c), self.basis.bracketing(*i)))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// bch with an explicit cap: both arguments are read in the basis of that cap.
pub fn bch<R: Ring>(a: &LieElement<R>, b: &LieElement<R>, cap: usize) -> Result<LieElement<R>, LieError> {
    if cap != a.basis.cap {
        return Err(LieError::Mismatch(format!("basis cap {} differs from requested {cap}", a.basis.cap)));
    }
    a.bch(b)
}
