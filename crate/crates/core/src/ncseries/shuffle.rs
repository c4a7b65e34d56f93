use super::{TruncatedSeries, Word};
use crate::coeffring::Ring;
use crate::par::{self, Exec};

/// All interleavings of u and v, with multiplicity.
pub fn shuffle_words(u: &Word, v: &Word) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Word::empty();
    fn rec(u: &[u8], v: &[u8], cur: &mut Word, out: &mut Vec<Word>) {
        if u.is_empty() && v.is_empty() {
            out.push(cur.clone());
            return;
        }
        if let Some((&a, rest)) = u.split_first() {
            cur.push(a);
            rec(rest, v, cur, out);
            cur.0.pop();
        }
        if let Some((&b, rest)) = v.split_first() {
            cur.push(b);
            rec(u, rest, cur, out);
            cur.0.pop();
        }
    }
    rec(u.as_slice(), v.as_slice(), &mut cur, &mut out);
    out
}

/// All words over k letters of length ≤ max_len, in canonical order.
pub fn all_words(k: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * k);
        for w in &layer {
            for l in 0..k {
                let mut x = w.clone();
                x.push(l as u8);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Outcome of a shuffle-identity test. A failure names the first failing
/// pair (u, v) together with both sides of the identity.
#[derive(Clone, Debug, PartialEq)]
pub enum ShuffleReport<E> {
    Pass,
    Fail { u: Word, v: Word, lhs: E, rhs: E },
}

impl<E> ShuffleReport<E> {
    pub fn passed(&self) -> bool {
        matches!(self, ShuffleReport::Pass)
    }
}

/// Pairs u ≤ v of nonempty words with |u|+|v| ≤ cap, lowest total degree first.
fn word_pairs(k: usize, cap: usize) -> Vec<(Word, Word)> {
    let words = all_words(k, cap.saturating_sub(1));
    let mut pairs = Vec::new();
    for total in 2..=cap {
        for (i, u) in words.iter().enumerate() {
            if u.is_empty() || u.len() >= total {
                continue;
            }
            for v in &words[i..] {
                if v.len() + u.len() == total {
                    pairs.push((u.clone(), v.clone()));
                }
            }
        }
    }
    pairs
}

impl<R: Ring> TruncatedSeries<R> {
    fn shuffle_sum(&self, u: &Word, v: &Word) -> R::Elem {
        let ring = self.ring();
        let mut acc = ring.zero();
        for w in shuffle_words(u, v) {
            if let Some(c) = self.terms().get(&w) {
                acc = ring.add(&acc, c);
            }
        }
        acc
    }

    fn shuffle_test(&self, exec: Exec, group_like: bool) -> ShuffleReport<R::Elem> {
        let ring = self.ring();
        let c0 = self.constant();
        let c0_ok = if group_like { ring.is_one(&c0) } else { ring.is_zero(&c0) };
        if !c0_ok {
            let rhs = if group_like { ring.one() } else { ring.zero() };
            return ShuffleReport::Fail { u: Word::empty(), v: Word::empty(), lhs: c0, rhs };
        }
        let pairs = word_pairs(self.alphabet().len(), self.cap());
        let sides = |(u, v): &(Word, Word)| {
            let lhs = if group_like { ring.mul(&self.get(u), &self.get(v)) } else { ring.zero() };
            (lhs, self.shuffle_sum(u, v))
        };
        let bad = par::position_first(exec, &pairs, |pr| {
            let (l, r) = sides(pr);
            !ring.is_zero(&ring.sub(&l, &r))
        });
        match bad {
            None => ShuffleReport::Pass,
            Some(i) => {
                let (lhs, rhs) = sides(&pairs[i]);
                let (u, v) = pairs[i].clone();
                ShuffleReport::Fail { u, v, lhs, rhs }
            }
        }
    }

    /// a[∅] = 1 and a[u]·a[v] = Σ_{w ∈ u ш v} a[w] for |u|+|v| ≤ cap.
    pub fn is_group_like(&self) -> ShuffleReport<R::Elem> {
        self.shuffle_test(Exec::default(), true)
    }

    pub fn is_group_like_with(&self, exec: Exec) -> ShuffleReport<R::Elem> {
        self.shuffle_test(exec, true)
    }

    /// a[∅] = 0 and Σ_{w ∈ u ш v} a[w] = 0 for nonempty u, v.
    pub fn is_primitive(&self) -> ShuffleReport<R::Elem> {
        self.shuffle_test(Exec::default(), false)
    }

    pub fn is_primitive_with(&self, exec: Exec) -> ShuffleReport<R::Elem> {
        self.shuffle_test(exec, false)
    }
}
