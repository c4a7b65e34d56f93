#![allow(dead_code)]

use grt_core::coeffring::{rat, Rational};
use grt_core::logconn::{Flags, LogConnection, QMatrix};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Unit-triangular integer product, so the inverse is integral too.
pub fn random_unimodular(rng: &mut ChaCha8Rng, m: usize) -> QMatrix {
    let mut l = QMatrix::identity(m);
    let mut u = QMatrix::identity(m);
    for i in 0..m {
        for j in 0..i {
            l.set(i, j, rat(rng.gen_range(-2..=2), 1));
            u.set(j, i, rat(rng.gen_range(-2..=2), 1));
        }
    }
    l.mul(&u)
}

/// Commuting residues P·(⊕ λ_b + c_b J_b)·P⁻¹ over random blocks, with
/// eigenvalues drawn from `spectrum`.
pub fn random_commuting(rng: &mut ChaCha8Rng, m: usize, r: usize, spectrum: &[Rational]) -> Vec<QMatrix> {
    let mut blocks = Vec::new();
    let mut left = m;
    while left > 0 {
        let b = rng.gen_range(1..=left);
        blocks.push(b);
        left -= b;
    }
    let p = random_unimodular(rng, m);
    let pinv = p.inverse().expect("unimodular");
    let nil = [rat(0, 1), rat(1, 1), rat(-2, 1), rat(1, 2)];
    (0..r)
        .map(|_| {
            let mut d = QMatrix::zero(m);
            let mut at = 0;
            for &b in &blocks {
                let lambda = spectrum.choose(rng).expect("nonempty").clone();
                let c = nil.choose(rng).expect("nonempty").clone();
                for k in 0..b {
                    d.set(at + k, at + k, lambda.clone());
                    if k + 1 < b {
                        d.set(at + k, at + k + 1, c.clone());
                    }
                }
                at += b;
            }
            p.mul(&d).mul(&pinv)
        })
        .collect()
}

pub fn non_resonant_spectrum() -> Vec<Rational> {
    vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 2), rat(-1, 3), rat(2, 3), rat(-3, 2)]
}

pub fn resonant_spectrum() -> Vec<Rational> {
    vec![rat(0, 1), rat(1, 1), rat(2, 1), rat(-1, 1), rat(1, 2), rat(3, 2), rat(-5, 2)]
}

pub fn random_connection(rng: &mut ChaCha8Rng, spectrum: &[Rational]) -> LogConnection {
    let m = rng.gen_range(1..=4);
    let r = rng.gen_range(1..=2);
    let res = random_commuting(rng, m, r, spectrum);
    LogConnection::with_residues(res, Flags { unipotent: false, integrable: true }).expect("commuting residues")
}

/// Rank of a family of vectors.
pub fn span_rank(vs: &[Vec<Rational>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let mut rows = vs.to_vec();
    let piv = grt_core::linalg::rref(&mut rows);
    piv.len()
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn one() -> Rational {
    Rational::one()
}

/// Coefficients c₀..c_n of (−1)^k Σ_{n₁<⋯<n_k} z^{n_k}/(n₁^{s₁}⋯n_k^{s_k}).
pub fn nested_sum(s: &[u32], nterms: usize) -> Vec<Rational> {
    let pw = |n: usize, e: u32| Rational::from_integer(num_bigint::BigInt::from(n).pow(e));
    let mut a: Vec<Rational> = (0..=nterms).map(|n| if n == 0 { Rational::zero() } else { Rational::one() / pw(n, s[0]) }).collect();
    for &si in &s[1..] {
        let mut prefix = Rational::zero();
        let mut next = vec![Rational::zero(); nterms + 1];
        for n in 1..=nterms {
            next[n] = &prefix / pw(n, si);
            prefix += &a[n];
        }
        a = next;
    }
    if s.len() % 2 == 1 {
        a.iter().map(|x| -x).collect()
    } else {
        a
    }
}

/// B₀..B_n with B₁ = −1/2.
pub fn bernoulli(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::one()];
    for m in 1..=n {
        let mut acc = Rational::zero();
        let mut c = num_bigint::BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            acc += bk * Rational::from_integer(c.clone());
            c = c * num_bigint::BigInt::from(m + 1 - k) / num_bigint::BigInt::from(k + 1);
        }
        b.push(-acc / Rational::from_integer(num_bigint::BigInt::from(m + 1)));
    }
    b
}

/// Washington's formula for L_p(s, χ) with χ(a)⟨a⟩^{1−s} = a^e and
/// conductor dividing p, summed to `terms` Bernoulli terms.
pub fn washington_lp(p: u32, s: i64, e: i32, terms: usize) -> Rational {
    let b = bernoulli(terms);
    let mut total = Rational::zero();
    for a in 1..p as i64 {
        let mut inner = Rational::zero();
        let mut binom = Rational::one();
        let ratio = rat(p as i64, a);
        let mut rj = Rational::one();
        for (j, bj) in b.iter().enumerate() {
            inner += &binom * bj * &rj;
            binom = binom * rat(1 - s - j as i64, j as i64 + 1);
            rj *= &ratio;
        }
        let ae = if e >= 0 { rat(a.pow(e as u32), 1) } else { rat(1, a.pow((-e) as u32)) };
        total += ae * inner;
    }
    total / rat(p as i64 * (s - 1), 1)
}
