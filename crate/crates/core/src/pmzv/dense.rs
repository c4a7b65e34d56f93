//! U(e₀, e₁) truncated at a small weight, stored densely, and power series
//! in one variable with coefficients there.

use std::sync::Arc;

use crate::coeffring::{Rational, Ring};
use crate::ncseries::{Alphabet, SeriesError, TruncatedSeries, Word};
use crate::par::{self, Exec};

pub(crate) type Vector<R> = Vec<<R as Ring>::Elem>;
pub(crate) type Series<R> = Vec<Vector<R>>;

#[derive(Clone, Debug)]
pub(crate) struct Dense<R: Ring> {
    pub ring: R,
    pub weight: usize,
    pub dim: usize,
    lens: Vec<usize>,
    table: Vec<(usize, usize, usize)>,
}

pub(crate) fn word_index(w: &[u8]) -> usize {
    (1usize << w.len()) - 1 + w.iter().fold(0, |acc, &l| 2 * acc + l as usize)
}

pub(crate) fn index_word(mut i: usize) -> Vec<u8> {
    let mut len = 0;
    while i >= (1 << (len + 1)) - 1 {
        len += 1;
    }
    i -= (1 << len) - 1;
    (0..len).rev().map(|b| ((i >> b) & 1) as u8).collect()
}

impl<R: Ring> Dense<R> {
    pub fn new(ring: R, weight: usize) -> Self {
        let dim = (1 << (weight + 1)) - 1;
        let lens: Vec<usize> = (0..dim).map(|i| index_word(i).len()).collect();
        let mut table = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                if lens[i] + lens[j] <= weight {
                    let mut w = index_word(i);
                    w.extend(index_word(j));
                    table.push((i, j, word_index(&w)));
                }
            }
        }
        Dense { ring, weight, dim, lens, table }
    }

    pub fn zero(&self) -> Vector<R> {
        vec![self.ring.zero(); self.dim]
    }

    pub fn one(&self) -> Vector<R> {
        let mut v = self.zero();
        v[0] = self.ring.one();
        v
    }

    pub fn word(&self, w: &[u8], c: R::Elem) -> Vector<R> {
        let mut v = self.zero();
        if w.len() <= self.weight {
            v[word_index(w)] = c;
        }
        v
    }

    pub fn letter(&self, l: u8) -> Vector<R> {
        self.word(&[l], self.ring.one())
    }

    pub fn is_exact_zero(&self, a: &Vector<R>) -> bool {
        a.iter().all(|x| self.ring.is_exact_zero(x))
    }

    pub fn add(&self, a: &Vector<R>, b: &Vector<R>) -> Vector<R> {
        a.iter().zip(b).map(|(x, y)| self.ring.add(x, y)).collect()
    }

    pub fn add_assign(&self, a: &mut Vector<R>, b: &Vector<R>) {
        for (x, y) in a.iter_mut().zip(b) {
            if !self.ring.is_exact_zero(y) {
                *x = self.ring.add(x, y);
            }
        }
    }

    pub fn sub(&self, a: &Vector<R>, b: &Vector<R>) -> Vector<R> {
        a.iter().zip(b).map(|(x, y)| self.ring.sub(x, y)).collect()
    }

    pub fn scale(&self, a: &Vector<R>, c: &R::Elem) -> Vector<R> {
        a.iter()
            .map(|x| if self.ring.is_exact_zero(x) { x.clone() } else { self.ring.mul(x, c) })
            .collect()
    }

    pub fn scale_q(&self, a: &Vector<R>, q: &Rational) -> Vector<R> {
        self.scale(a, &self.ring.from_rational(q))
    }

    pub fn mul(&self, a: &Vector<R>, b: &Vector<R>) -> Vector<R> {
        let mut out = self.zero();
        self.mul_acc(&mut out, a, b);
        out
    }

    /// out += a·b
    pub fn mul_acc(&self, out: &mut Vector<R>, a: &Vector<R>, b: &Vector<R>) {
        let r = &self.ring;
        for &(i, j, k) in &self.table {
            if r.is_exact_zero(&a[i]) || r.is_exact_zero(&b[j]) {
                continue;
            }
            out[k] = r.add(&out[k], &r.mul(&a[i], &b[j]));
        }
    }

    /// Inverse of an element with constant term 1.
    pub fn inv(&self, a: &Vector<R>) -> Vector<R> {
        let n = self.sub(a, &self.one());
        let mut out = self.one();
        let mut pw = self.one();
        for i in 1..=self.weight {
            pw = self.mul(&pw, &n);
            out = if i % 2 == 1 { self.sub(&out, &pw) } else { self.add(&out, &pw) };
        }
        out
    }

    /// x·a − a·x
    pub fn ad(&self, x: &Vector<R>, a: &Vector<R>) -> Vector<R> {
        self.sub(&self.mul(x, a), &self.mul(a, x))
    }

    pub fn weight_part(&self, a: &Vector<R>, w: usize) -> Vector<R> {
        a.iter().enumerate().map(|(i, x)| if self.lens[i] == w { x.clone() } else { self.ring.zero() }).collect()
    }

    /// Images of every word under the algebra map fixed by letter images.
    pub fn endomorphism(&self, images: [&Vector<R>; 2]) -> Vec<Vector<R>> {
        let mut out: Vec<Vector<R>> = Vec::with_capacity(self.dim);
        out.push(self.one());
        for i in 1..self.dim {
            let w = index_word(i);
            let (last, prefix) = w.split_last().expect("nonempty");
            let v = self.mul(&out[word_index(prefix)], images[*last as usize]);
            out.push(v);
        }
        out
    }

    pub fn apply(&self, images: &[Vector<R>], a: &Vector<R>) -> Vector<R> {
        let mut out = self.zero();
        for (x, img) in a.iter().zip(images) {
            if !self.ring.is_exact_zero(x) {
                self.add_assign(&mut out, &self.scale(img, x));
            }
        }
        out
    }

    /// Σ_j ad_x^j(rhs)/n^{j+1}, the solution X of n·X − [x, X] = rhs.
    pub fn solve_shift(&self, n: i64, x: &Vector<R>, rhs: &Vector<R>) -> Vector<R> {
        let mut out = self.zero();
        let mut t = rhs.clone();
        let mut den = Rational::from_integer(n.into());
        let nq = den.clone();
        for _ in 0..=self.weight {
            self.add_assign(&mut out, &self.scale_q(&t, &(Rational::from_integer(1.into()) / &den)));
            t = self.ad(x, &t);
            den *= &nq;
        }
        out
    }

    pub fn series_zero(&self, n: usize) -> Series<R> {
        vec![self.zero(); n]
    }

    /// Truncated product of series, parallel over output coefficients.
    pub fn series_mul(&self, a: &Series<R>, b: &Series<R>, n: usize) -> Series<R> {
        par::map_range(Exec::default(), n, |k| {
            let mut out = self.zero();
            for i in 0..=k.min(a.len().saturating_sub(1)) {
                if k - i < b.len() && !self.is_exact_zero(&a[i]) {
                    self.mul_acc(&mut out, &a[i], &b[k - i]);
                }
            }
            out
        })
    }

    /// Inverse of a series whose constant coefficient has constant term 1.
    pub fn series_inv(&self, a: &Series<R>, n: usize) -> Series<R> {
        let mut out = self.series_zero(n);
        out[0] = self.inv(&a[0]);
        for k in 1..n {
            let mut acc = self.zero();
            for j in 1..=k.min(a.len() - 1) {
                self.mul_acc(&mut acc, &a[j], &out[k - j]);
            }
            out[k] = self.scale_q(&self.mul(&out[0], &acc), &Rational::from_integer((-1).into()));
        }
        out
    }

    pub fn to_series(&self, alphabet: &Arc<Alphabet>, a: &Vector<R>) -> Result<TruncatedSeries<R>, SeriesError> {
        let terms = a.iter().enumerate().map(|(i, c)| (Word::from_slice(&index_word(i)), c.clone()));
        TruncatedSeries::from_terms(self.ring.clone(), alphabet.clone(), self.weight, terms)
    }

    pub fn from_series(&self, s: &TruncatedSeries<R>) -> Vector<R> {
        let mut v = self.zero();
        for (w, c) in s.terms() {
            if w.len() <= self.weight {
                v[word_index(w.as_slice())] = c.clone();
            }
        }
        v
    }
}
