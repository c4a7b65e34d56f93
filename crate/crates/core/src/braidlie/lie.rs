use std::collections::BTreeMap;
use std::sync::Arc;

use super::{BraidElement, BraidError, SmashAlgebra};
use crate::coeffring::{Rational, QQ};
use crate::ncseries::{TruncatedSeries, Word};

/// The Lie algebra H₅ = Lie(x, y) ⋉ Lie(a, b, c), truncated at a cap.
/// Elements are pairs (h, g) stored as associative polynomials.
pub struct H5LieAlgebra {
    alg: Arc<SmashAlgebra>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct H5Lie {
    /// the H₄ part, in words over x, y
    pub h: TruncatedSeries<QQ>,
    /// the G₅ part, in words over a, b, c
    pub g: TruncatedSeries<QQ>,
}

impl H5LieAlgebra {
    pub fn new(cap: usize) -> Result<Self, BraidError> {
        Ok(H5LieAlgebra { alg: SmashAlgebra::get(5, cap)? })
    }

    pub fn smash(&self) -> &Arc<SmashAlgebra> {
        &self.alg
    }

    pub fn cap(&self) -> usize {
        self.alg.cap()
    }

    fn empty(&self) -> TruncatedSeries<QQ> {
        TruncatedSeries::zero(QQ, self.alg.alphabet().clone(), self.alg.cap())
    }

    pub fn zero(&self) -> H5Lie {
        H5Lie { h: self.empty(), g: self.empty() }
    }

    /// Degree-one element with the given coordinates on x, y, a, b, c.
    pub fn degree_one(&self, coords: &[Rational]) -> H5Lie {
        let mut e = self.zero();
        for (k, c) in coords.iter().enumerate() {
            let part = if self.alg.is_h_letter(k as u8) { &mut e.h } else { &mut e.g };
            part.add_term(Word::letter(k as u8), c.clone());
        }
        e
    }

    pub fn inject(&self, i: usize, j: usize) -> Result<H5Lie, BraidError> {
        Ok(self.degree_one(&self.alg.degree_one().expression(i, j)?))
    }

    pub fn add(&self, a: &H5Lie, b: &H5Lie) -> H5Lie {
        H5Lie { h: a.h.add(&b.h).unwrap(), g: a.g.add(&b.g).unwrap() }
    }

    pub fn scale(&self, a: &H5Lie, c: &Rational) -> H5Lie {
        H5Lie { h: a.h.scale(c), g: a.g.scale(c) }
    }

    /// D_ℓ(g) for an H letter ℓ, extended to words as a derivation.
    fn derive_letter(&self, l: u8, g: &TruncatedSeries<QQ>) -> TruncatedSeries<QQ> {
        let mut out = self.empty();
        for (w, c) in g.terms() {
            if w.len() + 1 > self.cap() {
                continue;
            }
            let s = w.as_slice();
            for t in 0..s.len() {
                for (pair, sign) in self.alg.derivation(l, s[t]) {
                    let mut v = Word::from_slice(&s[..t]);
                    v.0.extend_from_slice(pair);
                    v.0.extend_from_slice(&s[t + 1..]);
                    let x = if *sign > 0 { c.clone() } else { -c.clone() };
                    out.add_term(v, x);
                }
            }
        }
        out
    }

    /// D_h(g) = Σ_w h[w]·D_{w₁}∘⋯∘D_{w_k}(g), sharing common suffixes of w.
    pub fn derive(&self, h: &TruncatedSeries<QQ>, g: &TruncatedSeries<QQ>) -> TruncatedSeries<QQ> {
        let mut rev: Vec<(Vec<u8>, &Rational)> =
            h.terms().iter().map(|(w, c)| (w.as_slice().iter().rev().copied().collect(), c)).collect();
        rev.sort();
        let mut out = self.empty();
        self.derive_walk(&rev, 0, g, &mut out);
        out
    }

    fn derive_walk(
        &self,
        words: &[(Vec<u8>, &Rational)],
        depth: usize,
        state: &TruncatedSeries<QQ>,
        out: &mut TruncatedSeries<QQ>,
    ) {
        if state.is_empty() {
            return;
        }
        let mut i = 0;
        while i < words.len() && words[i].0.len() == depth {
            for (w, c) in state.terms() {
                out.add_term(w.clone(), c * words[i].1);
            }
            i += 1;
        }
        while i < words.len() {
            let l = words[i].0[depth];
            let mut j = i;
            while j < words.len() && words[j].0[depth] == l {
                j += 1;
            }
            let next = self.derive_letter(l, state);
            self.derive_walk(&words[i..j], depth + 1, &next, out);
            i = j;
        }
    }

    /// [(h₁,g₁),(h₂,g₂)] = ([h₁,h₂], D_{h₁}g₂ − D_{h₂}g₁ + [g₁,g₂]).
    pub fn bracket(&self, a: &H5Lie, b: &H5Lie) -> H5Lie {
        let h = a.h.commutator(&b.h).unwrap();
        let g = self
            .derive(&a.h, &b.g)
            .sub(&self.derive(&b.h, &a.g))
            .unwrap()
            .add(&a.g.commutator(&b.g).unwrap())
            .unwrap();
        H5Lie { h, g }
    }

    /// The element viewed in U(H₅); pure H and pure G words are PBW monomials.
    pub fn to_braid(&self, a: &H5Lie) -> BraidElement {
        let terms = a.h.terms().iter().chain(a.g.terms()).map(|(w, c)| (w.clone(), c.clone()));
        BraidElement::from_terms(QQ, self.alg.clone(), terms).expect("pure words are normal")
    }

    /// Image of a Lie polynomial in Lyndon coordinates under X ↦ u, Y ↦ v,
    /// memoizing the images of the Lyndon brackets.
    pub fn substitute_lie(
        &self,
        basis: &crate::freelie::LyndonBasis,
        coords: &BTreeMap<usize, Rational>,
        u: &H5Lie,
        v: &H5Lie,
        memo: &mut BTreeMap<usize, H5Lie>,
    ) -> H5Lie {
        let mut acc = self.zero();
        for (i, c) in coords {
            let img = self.lyndon_image(basis, *i, u, v, memo);
            acc = self.add(&acc, &self.scale(&img, c));
        }
        acc
    }

    pub fn lyndon_image(
        &self,
        basis: &crate::freelie::LyndonBasis,
        i: usize,
        u: &H5Lie,
        v: &H5Lie,
        memo: &mut BTreeMap<usize, H5Lie>,
    ) -> H5Lie {
        if let Some(x) = memo.get(&i) {
            return x.clone();
        }
        let w = basis.word(i).clone();
        let img = match crate::freelie::standard_factorization(&w) {
            None => if w.as_slice()[0] == 0 { u.clone() } else { v.clone() },
            Some((p, q)) => {
                let a = self.lyndon_image(basis, basis.index_of(&p).unwrap(), u, v, memo);
                let b = self.lyndon_image(basis, basis.index_of(&q).unwrap(), u, v, memo);
                self.bracket(&a, &b)
            }
        };
        memo.insert(i, img.clone());
        img
    }
}

impl H5Lie {
    pub fn is_zero(&self) -> bool {
        self.h.is_zero() && self.g.is_zero()
    }
}
