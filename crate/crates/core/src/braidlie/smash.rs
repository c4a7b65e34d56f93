use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;
use serde_json::{json, Value};

use super::{solve_degree_one, BraidError, DegreeOne};
use crate::coeffring::{Ring, QQ};
use crate::ncseries::{Alphabet, SubstTarget, TruncatedSeries, Word};
use crate::par::{self, Exec};

/// U(H_n) for n = 4, 5 truncated at `cap`, in PBW coordinates: monomials
/// are an H₄ word in x, y followed by a G₅ word in a, b, c.
pub struct SmashAlgebra {
    n: usize,
    cap: usize,
    alphabet: Arc<Alphabet>,
    h_letters: u8,
    degree_one: DegreeOne,
    // deriv[ℓ][g]: D_ℓ applied to G letter g, as (two-letter word, sign)
    deriv: Vec<Vec<Vec<([u8; 2], i64)>>>,
}

static SMASH_CACHE: Lazy<Mutex<HashMap<(usize, usize), Arc<SmashAlgebra>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

impl SmashAlgebra {
    pub fn get(n: usize, cap: usize) -> Result<Arc<SmashAlgebra>, BraidError> {
        if n != 4 && n != 5 {
            return Err(BraidError::Unsupported(format!(
                "the smash basis exists for n = 4, 5 (H_3 = 0), got {n}"
            )));
        }
        let mut cache = SMASH_CACHE.lock().unwrap();
        if let Some(a) = cache.get(&(n, cap)) {
            return Ok(a.clone());
        }
        let a = Arc::new(Self::build(n, cap)?);
        cache.insert((n, cap), a.clone());
        Ok(a)
    }

    fn build(n: usize, cap: usize) -> Result<SmashAlgebra, BraidError> {
        let degree_one = solve_degree_one(n)?;
        let names: &[&str] = if n == 4 { &["x", "y"] } else { &["x", "y", "a", "b", "c"] };
        let alphabet = Alphabet::new(names)?;
        let mut deriv = vec![vec![Vec::new(); names.len()]; 2];
        if n == 5 {
            // H letters are e_ij with i, j < 4; G letters are e_k4 (k = 1, 2, 3).
            // [e_ij, e_k4] = 0 for k ∉ {i, j}, and [e_ij, e_i4] = −[e_j4, e_i4].
            let g_of = |k: usize| (k + 1) as u8; // e_14 ↦ a = 2, e_24 ↦ b = 3, e_34 ↦ c = 4
            for (l, &(i, j)) in degree_one.free[..2].iter().enumerate() {
                for k in 1..=3usize {
                    let other = if k == i {
                        j
                    } else if k == j {
                        i
                    } else {
                        continue;
                    };
                    // −[e_o4, e_k4] = e_k4·e_o4 − e_o4·e_k4
                    let (gk, go) = (g_of(k), g_of(other));
                    deriv[l][gk as usize] = vec![([gk, go], 1), ([go, gk], -1)];
                }
            }
        }
        Ok(SmashAlgebra { n, cap, alphabet, h_letters: 2, degree_one, deriv })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn degree_one(&self) -> &DegreeOne {
        &self.degree_one
    }

    pub fn is_h_letter(&self, l: u8) -> bool {
        l < self.h_letters
    }

    /// D_ℓ of a G letter, as signed two-letter words.
    pub fn derivation(&self, l: u8, g: u8) -> &[([u8; 2], i64)] {
        &self.deriv[l as usize][g as usize]
    }

    fn h_len(&self, w: &[u8]) -> usize {
        w.iter().take_while(|&&l| self.is_h_letter(l)).count()
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        let k = self.h_len(w.as_slice());
        w.as_slice()[k..].iter().all(|&l| !self.is_h_letter(l))
    }

    /// Dimension of the degree-d component: Σ_{i+j=d} 2^i·g^j with g the
    /// number of G letters (so 2^d for n = 4).
    pub fn degree_dimension(&self, d: usize) -> usize {
        let g = self.alphabet.len() - self.h_letters as usize;
        (0..=d).map(|i| 2usize.pow(i as u32) * g.pow((d - i) as u32)).sum()
    }

    /// PBW monomials of degree d in canonical order.
    pub fn monomials(&self, d: usize) -> Vec<Word> {
        let k = self.alphabet.len() as u8;
        let mut out = Vec::new();
        for w in crate::ncseries::all_words(k as usize, d) {
            if w.len() == d && self.is_normal(&w) {
                out.push(w);
            }
        }
        out
    }

    /// Monomial text, e.g. `x·y·a·c`; `1` for the empty monomial.
    pub fn monomial_text(&self, w: &Word) -> String {
        self.alphabet.format_word(w)
    }
}

/// An element of truncated U(H_n) in normal form.
#[derive(Clone)]
pub struct BraidElement<R: Ring = QQ> {
    alg: Arc<SmashAlgebra>,
    s: TruncatedSeries<R>,
}

impl<R: Ring> PartialEq for BraidElement<R> {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.alg, &o.alg) && self.s == o.s
    }
}

impl<R: Ring> BraidElement<R> {
    pub fn zero(ring: R, alg: Arc<SmashAlgebra>) -> Self {
        let s = TruncatedSeries::zero(ring, alg.alphabet.clone(), alg.cap);
        BraidElement { alg, s }
    }

    pub fn one(ring: R, alg: Arc<SmashAlgebra>) -> Self {
        let s = TruncatedSeries::one(ring, alg.alphabet.clone(), alg.cap);
        BraidElement { alg, s }
    }

    pub fn generator(ring: R, alg: Arc<SmashAlgebra>, l: u8) -> Self {
        let s = TruncatedSeries::letter(ring, alg.alphabet.clone(), alg.cap, l);
        BraidElement { alg, s }
    }

    /// Builds an element from normal-form monomials.
    pub fn from_terms(
        ring: R,
        alg: Arc<SmashAlgebra>,
        terms: impl IntoIterator<Item = (Word, R::Elem)>,
    ) -> Result<Self, BraidError> {
        let terms: Vec<_> = terms.into_iter().collect();
        if let Some((w, _)) = terms.iter().find(|(w, _)| !alg.is_normal(w)) {
            return Err(BraidError::Index(format!("{w:?} is not a PBW monomial")));
        }
        let s = TruncatedSeries::from_terms(ring, alg.alphabet.clone(), alg.cap, terms)?;
        Ok(BraidElement { alg, s })
    }

    /// The degree-one normal form of e_ij.
    pub fn inject(ring: R, alg: Arc<SmashAlgebra>, i: usize, j: usize) -> Result<Self, BraidError> {
        let e = alg.degree_one.expression(i, j)?;
        let terms: Vec<(Word, R::Elem)> =
            e.iter().enumerate().map(|(k, c)| (Word::letter(k as u8), ring.from_rational(c))).collect();
        Self::from_terms(ring, alg, terms)
    }

    pub fn algebra(&self) -> &Arc<SmashAlgebra> {
        &self.alg
    }

    pub fn ring(&self) -> &R {
        self.s.ring()
    }

    pub fn cap(&self) -> usize {
        self.alg.cap
    }

    pub fn terms(&self) -> &BTreeMap<Word, R::Elem> {
        self.s.terms()
    }

    pub fn coefficient(&self, w: &Word) -> R::Elem {
        self.s.get(w)
    }

    pub fn as_series(&self) -> &TruncatedSeries<R> {
        &self.s
    }

    pub fn is_zero(&self) -> bool {
        self.s.is_zero()
    }

    fn check(&self, o: &Self) -> Result<(), BraidError> {
        if !Arc::ptr_eq(&self.alg, &o.alg) {
            return Err(BraidError::Mismatch("different smash algebras".into()));
        }
        self.s.check_compatible(&o.s)?;
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, BraidError> {
        self.check(o)?;
        Ok(BraidElement { alg: self.alg.clone(), s: self.s.add(&o.s)? })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, BraidError> {
        self.check(o)?;
        Ok(BraidElement { alg: self.alg.clone(), s: self.s.sub(&o.s)? })
    }

    pub fn neg(&self) -> Self {
        BraidElement { alg: self.alg.clone(), s: self.s.neg() }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        BraidElement { alg: self.alg.clone(), s: self.s.scale(c) }
    }

    pub fn degree_part(&self, d: usize) -> Self {
        BraidElement { alg: self.alg.clone(), s: self.s.degree_part(d) }
    }

    /// Lowest degree carrying a nonzero coefficient.
    pub fn min_degree(&self) -> Option<usize> {
        self.s.min_degree()
    }

    pub fn smash_mul(&self, o: &Self) -> Result<Self, BraidError> {
        self.smash_mul_with(Exec::default(), o)
    }

    pub fn smash_mul_with(&self, exec: Exec, o: &Self) -> Result<Self, BraidError> {
        self.check(o)?;
        Ok(self.mul_unchecked(exec, o))
    }

    pub fn commutator(&self, o: &Self) -> Result<Self, BraidError> {
        self.smash_mul(o)?.sub(&o.smash_mul(self)?)
    }

    fn mul_unchecked(&self, exec: Exec, o: &Self) -> Self {
        let alg = &*self.alg;
        let ring = self.s.ring();
        let cap = alg.cap;
        // group the right factor by its H prefix
        let mut groups: BTreeMap<Vec<u8>, Vec<(&[u8], &R::Elem)>> = BTreeMap::new();
        for (w, c) in o.s.terms() {
            let k = alg.h_len(w.as_slice());
            groups.entry(w.as_slice()[..k].to_vec()).or_default().push((&w.as_slice()[k..], c));
        }
        let prefixes: Vec<(Vec<u8>, Vec<(&[u8], &R::Elem)>)> = groups.into_iter().collect();
        let left: Vec<(&Word, &R::Elem)> = self.s.terms().iter().collect();
        let pairs = left.len() * prefixes.iter().map(|p| p.1.len()).sum::<usize>();
        let chunks = if pairs < 2048 || !exec.is_parallel() { 1 } else { left.len().min(64) };
        let size = left.len().div_ceil(chunks.max(1)).max(1);
        let slices: Vec<&[(&Word, &R::Elem)]> = left.chunks(size).collect();
        let parts = par::map(exec, &slices, |chunk| {
            let mut state: HashMap<Word, R::Elem> = HashMap::new();
            for (w, c) in chunk.iter() {
                state.insert((*w).clone(), (*c).clone());
            }
            let mut out: HashMap<Word, R::Elem> = HashMap::new();
            walk_prefixes(alg, ring, cap, &prefixes, 0, &state, &mut out);
            out
        });
        let mut s = TruncatedSeries::zero(ring.clone(), alg.alphabet.clone(), cap);
        for part in parts {
            for (w, c) in part {
                s.add_term(w, c);
            }
        }
        BraidElement { alg: self.alg.clone(), s }
    }

    pub fn to_json(&self) -> Value {
        let terms: serde_json::Map<String, Value> = self
            .s
            .terms()
            .iter()
            .map(|(w, c)| (self.alg.monomial_text(w), self.s.ring().encode(c)))
            .collect();
        json!({"n": self.alg.n, "cap": self.alg.cap, "terms": terms})
    }
}

fn add_to<R: Ring>(ring: &R, out: &mut HashMap<Word, R::Elem>, w: Word, c: R::Elem) {
    match out.get_mut(&w) {
        Some(e) => *e = ring.add(e, &c),
        None => {
            out.insert(w, c);
        }
    }
}

/// state·ℓ for an H letter ℓ: (h, u)·ℓ = (hℓ, u) − (h, D_ℓ(u)).
fn right_mul_h<R: Ring>(
    alg: &SmashAlgebra,
    ring: &R,
    cap: usize,
    state: &HashMap<Word, R::Elem>,
    l: u8,
) -> HashMap<Word, R::Elem> {
    let mut out = HashMap::with_capacity(state.len() * 2);
    for (m, c) in state {
        if m.len() + 1 > cap || ring.is_exact_zero(c) {
            continue;
        }
        let s = m.as_slice();
        let k = alg.h_len(s);
        let mut w = Word::from_slice(&s[..k]);
        w.push(l);
        w.0.extend_from_slice(&s[k..]);
        add_to(ring, &mut out, w, c.clone());
        for t in k..s.len() {
            for (pair, sign) in alg.derivation(l, s[t]) {
                let mut w = Word::from_slice(&s[..t]);
                w.0.extend_from_slice(pair);
                w.0.extend_from_slice(&s[t + 1..]);
                let x = if *sign > 0 { ring.neg(c) } else { c.clone() };
                add_to(ring, &mut out, w, x);
            }
        }
    }
    out
}

type PrefixGroup<'a, E> = (Vec<u8>, Vec<(&'a [u8], &'a E)>);

/// Walks the trie of H prefixes (sorted), carrying state = left·prefix.
fn walk_prefixes<R: Ring>(
    alg: &SmashAlgebra,
    ring: &R,
    cap: usize,
    prefixes: &[PrefixGroup<'_, R::Elem>],
    depth: usize,
    state: &HashMap<Word, R::Elem>,
    out: &mut HashMap<Word, R::Elem>,
) {
    if state.is_empty() {
        return;
    }
    let mut i = 0;
    // a prefix of exactly this depth sorts first in its group
    if let Some((p, tails)) = prefixes.first() {
        if p.len() == depth {
            for (m, c) in state {
                for (u, b) in tails {
                    if m.len() + u.len() <= cap {
                        let mut w = m.clone();
                        w.0.extend_from_slice(u);
                        add_to(ring, out, w, ring.mul(c, b));
                    }
                }
            }
            i = 1;
        }
    }
    while i < prefixes.len() {
        let l = prefixes[i].0[depth];
        let mut j = i;
        while j < prefixes.len() && prefixes[j].0[depth] == l {
            j += 1;
        }
        let next = right_mul_h(alg, ring, cap, state, l);
        walk_prefixes(alg, ring, cap, &prefixes[i..j], depth + 1, &next, out);
        i = j;
    }
}

impl<R: Ring> SubstTarget for BraidElement<R> {
    type Scalar = R::Elem;
    fn unit_like(&self) -> Self {
        BraidElement::one(self.s.ring().clone(), self.alg.clone())
    }
    fn zero_like(&self) -> Self {
        BraidElement::zero(self.s.ring().clone(), self.alg.clone())
    }
    fn cap(&self) -> usize {
        self.alg.cap
    }
    fn constant_is_zero(&self) -> bool {
        self.s.ring().is_zero(&self.s.constant())
    }
    fn is_zero(&self) -> bool {
        self.s.is_zero()
    }
    fn compatible(&self, o: &Self) -> bool {
        self.check(o).is_ok()
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_unchecked(Exec::Sequential, o)
    }
    fn add_scaled(&mut self, o: &Self, c: &R::Elem) {
        SubstTarget::add_scaled(&mut self.s, &o.s, c)
    }
    fn add_assign(&mut self, o: &Self) {
        SubstTarget::add_assign(&mut self.s, &o.s)
    }
}

impl<R: Ring> fmt::Debug for BraidElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.s)
    }
}
