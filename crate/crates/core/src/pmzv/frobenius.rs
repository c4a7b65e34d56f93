//! The Frobenius structure on the KZ-type equation dΛ = (e₀dz/z + e₁dz/(z−1))Λ.
//!
//! Λ = P₀(z)·exp(e₀ log z) near 0 and Λ = P₁(t)·exp(e₁ log t)·h with t = z − 1
//! near 1. Frobenius acts by Λ(z^p) = G(z)·F₀(Λ(z)) with F₀(e₀) = p·e₀ and
//! F₀(e₁) = g⁻¹(p·e₁)g, where G is overconvergent. Its value at ∞ is read off
//! in two ways: after the substitution z = −x/(1−x) from the 0-side, and as a
//! constant term on the annulus around 1. Their difference isolates the new
//! weight of g.

use num_bigint::BigInt;
use num_traits::One;

use super::dense::{Dense, Series, Vector};
use crate::coeffring::{Padic, PadicRing, Rational, Ring};
use crate::par::{self, Exec};

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut out = BigInt::one();
    for i in 0..k {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

/// P₀ with zP₀' = [e₀, P₀] − e₁·(z/(1−z))·P₀, P₀(0) = 1.
pub(crate) fn p0_series<R: Ring>(d: &Dense<R>, n: usize) -> Series<R> {
    let e0 = d.letter(0);
    let e1 = d.letter(1);
    let mut out: Series<R> = vec![d.one()];
    let mut prefix = d.one();
    for k in 1..n {
        let rhs = d.scale_q(&d.mul(&e1, &prefix), &q(-1));
        let next = d.solve_shift(k as i64, &e0, &rhs);
        d.add_assign(&mut prefix, &next);
        out.push(next);
    }
    out
}

/// P₁ with tP₁' = [e₁, P₁] + (t/(1+t))·e₀·P₁, P₁(0) = 1.
pub(crate) fn p1_series<R: Ring>(d: &Dense<R>, n: usize) -> Series<R> {
    let e0 = d.letter(0);
    let e1 = d.letter(1);
    let mut out: Series<R> = vec![d.one()];
    for k in 1..n {
        let mut s = d.zero();
        for (j, pj) in out.iter().enumerate() {
            let sign = if (k - j) % 2 == 1 { q(1) } else { q(-1) };
            d.add_assign(&mut s, &d.scale_q(pj, &sign));
        }
        let rhs = d.mul(&e0, &s);
        out.push(d.solve_shift(k as i64, &e1, &rhs));
    }
    out
}

/// Images of all words under F₀ for the given g.
pub(crate) fn f0_images<R: Ring>(d: &Dense<R>, p: u32, g: &Vector<R>) -> Vec<Vector<R>> {
    let pq = q(p as i64);
    let a = d.scale_q(&d.letter(0), &pq);
    let b = d.scale_q(&d.mul(&d.mul(&d.inv(g), &d.letter(1)), g), &pq);
    d.endomorphism([&a, &b])
}

/// Precomputed pieces of one truncation level.
pub(crate) struct Engine {
    pub d: Dense<PadicRing>,
    pub p: u32,
    pub nz: usize,
    pub nt: usize,
    pub p0: Series<PadicRing>,
    pub p1: Series<PadicRing>,
    p0_at_zp: Series<PadicRing>,
    p1_at_s: Series<PadicRing>,
    // coefficient of v^m in exp(e₁·log(1 + u)), as a U-vector
    e_coeffs: Vec<Vector<PadicRing>>,
}

impl Engine {
    pub fn new(p: u32, weight: usize, prec: i64, n: usize) -> Self {
        let ring = PadicRing { p, prec };
        let d = Dense::new(ring, weight);
        let (nz, nt) = (n, n);
        let (p0, p1) = if Exec::default().is_parallel() {
            rayon_join(|| p0_series(&d, nz), || p1_series(&d, nt))
        } else {
            (p0_series(&d, nz), p1_series(&d, nt))
        };
        let mut p0_at_zp = d.series_zero(nz);
        for (k, c) in p0.iter().enumerate() {
            if k * p as usize >= nz {
                break;
            }
            p0_at_zp[k * p as usize] = c.clone();
        }
        let p1_at_s = compose_s(&d, p, &p1, nt);
        let e_coeffs = e_series(&d, p, nt);
        Engine { d, p, nz, nt, p0, p1, p0_at_zp, p1_at_s, e_coeffs }
    }

    fn ring(&self) -> &PadicRing {
        &self.d.ring
    }

    /// (value of G at ∞ from the 0-side, annulus constant term).
    pub fn k_and_ct(&self, g: &Vector<PadicRing>) -> (Vector<PadicRing>, Vector<PadicRing>) {
        let d = &self.d;
        let r = self.ring();
        let imgs = f0_images(d, self.p, g);
        let fp: Series<PadicRing> = par::map(Exec::default(), &self.p0, |c| d.apply(&imgs, c));
        let big_g = d.series_mul(&self.p0_at_zp, &d.series_inv(&fp, self.nz), self.nz);
        // Σ_n [xⁿ] G(−x/(1−x)) = G₀ + Σ_m (−1)^m C(N−1, m) G_m
        let mut k = big_g[0].clone();
        for (m, gm) in big_g.iter().enumerate().skip(1) {
            let mut c = r.from_rational(&Rational::from_integer(binomial(self.nz - 1, m)));
            if m % 2 == 1 {
                c = r.neg(&c);
            }
            d.add_assign(&mut k, &d.scale(gm, &c));
        }
        let fq: Series<PadicRing> = par::map(Exec::default(), &self.p1, |c| d.apply(&imgs, c));
        let z = d.series_mul(&vec![g.clone()], &d.series_inv(&fq, self.nt), self.nt);
        // CT of P₁(s)·E·Z with E in v = 1/t
        let nt = self.nt;
        let parts = par::map_range(Exec::default(), nt, |a| {
            let ps = &self.p1_at_s[a];
            if d.is_exact_zero(ps) {
                return d.zero();
            }
            let mut inner = d.zero();
            for b in 0..nt - a {
                d.mul_acc(&mut inner, &self.e_coeffs[a + b], &z[b]);
            }
            d.mul(ps, &inner)
        });
        let mut ct = d.zero();
        for x in &parts {
            d.add_assign(&mut ct, x);
        }
        (k, ct)
    }
}

fn rayon_join<A: Send, B: Send>(a: impl FnOnce() -> A + Send, b: impl FnOnce() -> B + Send) -> (A, B) {
    #[cfg(feature = "parallel")]
    {
        rayon::join(a, b)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (a(), b())
    }
}

/// P₁(s) with s = (1+t)^p − 1, truncated at tⁿ.
fn compose_s(d: &Dense<PadicRing>, p: u32, p1: &Series<PadicRing>, n: usize) -> Series<PadicRing> {
    let r = &d.ring;
    let s: Vec<Padic> = (0..=p as usize).map(|k| r.from_rational(&Rational::from_integer(binomial(p as usize, k)))).collect();
    let mut out = d.series_zero(n);
    let mut spow: Vec<Padic> = vec![r.one()];
    for (j, qj) in p1.iter().enumerate().take(n) {
        if j > 0 {
            let mut next = vec![r.zero(); (spow.len() + p as usize).min(n)];
            for (a, x) in spow.iter().enumerate() {
                for (b, y) in s.iter().enumerate().skip(1) {
                    if a + b < next.len() {
                        next[a + b] = r.add(&next[a + b], &r.mul(x, y));
                    }
                }
            }
            spow = next;
        }
        if spow.is_empty() {
            break;
        }
        for (a, x) in spow.iter().enumerate() {
            if !r.is_exact_zero(x) {
                d.add_assign(&mut out[a], &d.scale(qj, x));
            }
        }
    }
    out
}

/// exp(e₁·log(1+u)) with u = Σ_{j=1}^{p−1} C(p, p−j)·v^j, as U-vectors per
/// power of v.
fn e_series(d: &Dense<PadicRing>, p: u32, n: usize) -> Vec<Vector<PadicRing>> {
    let r = &d.ring;
    let mul = |a: &[Padic], b: &[Padic]| -> Vec<Padic> {
        let mut c = vec![r.zero(); n];
        for (i, x) in a.iter().enumerate() {
            if r.is_exact_zero(x) {
                continue;
            }
            for (k, y) in b.iter().enumerate().take(n - i) {
                if !r.is_exact_zero(y) {
                    c[i + k] = r.add(&c[i + k], &r.mul(x, y));
                }
            }
        }
        c
    };
    let mut u = vec![r.zero(); n];
    for (j, slot) in u.iter_mut().enumerate().take((p as usize).min(n)).skip(1) {
        *slot = r.from_rational(&Rational::from_integer(binomial(p as usize, p as usize - j)));
    }
    let mut log = vec![r.zero(); n];
    let mut pw = vec![r.zero(); n];
    pw[0] = r.one();
    for m in 1..n {
        pw = mul(&pw, &u);
        // uᵐ has valuation ≥ m
        if pw.iter().all(|x| r.is_zero(x)) {
            break;
        }
        let c = Rational::new(if m % 2 == 1 { BigInt::one() } else { -BigInt::one() }, BigInt::from(m));
        for (l, x) in log.iter_mut().zip(&pw) {
            if !r.is_exact_zero(x) {
                *l = r.add(l, &r.scale_rational(x, &c));
            }
        }
    }
    let mut out = vec![d.zero(); n];
    let mut lk = vec![r.zero(); n];
    lk[0] = r.one();
    let mut fact = Rational::one();
    for k in 0..=d.weight {
        if k > 0 {
            lk = mul(&lk, &log);
            fact *= q(k as i64);
        }
        let word = vec![1u8; k];
        for (m, x) in lk.iter().enumerate() {
            if !r.is_exact_zero(x) {
                let c = r.scale_rational(x, &(Rational::one() / &fact));
                d.add_assign(&mut out[m], &d.word(&word, c));
            }
        }
    }
    out
}

/// g by weight induction, g_w = [K − CT]_w with g_w absent on the right.
/// Returns g and the valuation of the weight-one residue (which must vanish).
pub(crate) fn solve_g(e: &Engine) -> (Vector<PadicRing>, i64) {
    let d = &e.d;
    let mut g = d.one();
    let mut weight_one = i64::MAX;
    for w in 1..=d.weight {
        let (k, ct) = e.k_and_ct(&g);
        let gw = d.weight_part(&d.sub(&k, &ct), w);
        if w == 1 {
            weight_one = gw
                .iter()
                .filter(|x| !x.is_exact_zero())
                .map(|x| if x.is_zero() { x.precision() } else { x.valuation() })
                .min()
                .unwrap_or(i64::MAX);
            continue;
        }
        d.add_assign(&mut g, &gw);
    }
    (g, weight_one)
}

/// h from h = g·F₀(h): h_w(1 − p^w) = [g·F₀(h)]_w with h_w absent on the right.
pub(crate) fn h_from_g<R: Ring>(d: &Dense<R>, p: u32, g: &Vector<R>) -> Vector<R> {
    let imgs = f0_images(d, p, g);
    let mut h = d.one();
    for w in 1..=d.weight {
        let x = d.weight_part(&d.mul(g, &d.apply(&imgs, &h)), w);
        let pw = Rational::from_integer(BigInt::from(p).pow(w as u32));
        let scale = Rational::one() / (Rational::one() - pw);
        d.add_assign(&mut h, &d.scale_q(&x, &scale));
    }
    h
}

/// g from h by the same fixed point: g_w = h_w − [g·F₀(h)]_w with g_w absent.
pub(crate) fn g_from_h<R: Ring>(d: &Dense<R>, p: u32, h: &Vector<R>) -> Vector<R> {
    let mut g = d.one();
    for w in 1..=d.weight {
        let imgs = f0_images(d, p, &g);
        let rhs = d.weight_part(&d.mul(&g, &d.apply(&imgs, h)), w);
        let gw = d.sub(&d.weight_part(h, w), &rhs);
        d.add_assign(&mut g, &gw);
    }
    g
}
