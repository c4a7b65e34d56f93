use std::sync::Arc;

use grt_core::coeffring::rat;
use grt_core::ncseries::{all_words, shuffle_words, ShuffleReport};
use grt_core::{Alphabet, Rational, TruncatedSeries, Word, QQ};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type S = TruncatedSeries<QQ>;

fn ab() -> Arc<Alphabet> {
    Alphabet::new(&["e0", "e1"]).unwrap()
}

fn mono(cap: usize, w: &[u8], c: Rational) -> S {
    S::monomial(QQ, ab(), cap, Word::from_slice(w), c)
}

fn letter(cap: usize, l: u8) -> S {
    S::letter(QQ, ab(), cap, l)
}

fn one(cap: usize) -> S {
    S::one(QQ, ab(), cap)
}

fn random_series(rng: &mut ChaCha8Rng, cap: usize, density: f64, constant: Option<i64>) -> S {
    let mut terms = Vec::new();
    for w in all_words(2, cap) {
        if w.is_empty() {
            continue;
        }
        if rng.gen_bool(density) {
            terms.push((w, rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))));
        }
    }
    if let Some(c) = constant {
        terms.push((Word::empty(), rat(c, 1)));
    }
    S::from_terms(QQ, ab(), cap, terms).unwrap()
}

/// A random Lie polynomial built from nested commutators of letters.
fn random_lie(rng: &mut ChaCha8Rng, cap: usize) -> S {
    let mut acc = S::zero(QQ, ab(), cap);
    for _ in 0..4 {
        let depth = rng.gen_range(1..=cap);
        let mut e = letter(cap, rng.gen_range(0..2));
        for _ in 1..depth {
            let l = letter(cap, rng.gen_range(0..2));
            e = l.commutator(&e).unwrap();
        }
        acc = acc.add(&e.scale_rational(&rat(rng.gen_range(-3..=3), rng.gen_range(1..=3)))).unwrap();
    }
    acc
}

#[test]
fn coefficient_examples() {
    let a = one(4).add(&mono(4, &[0, 1], rat(2, 1))).unwrap();
    assert_eq!(a.coefficient(&Word::from([0, 1])).unwrap(), rat(2, 1));
    assert_eq!(one(4).coefficient(&Word::empty()).unwrap(), rat(1, 1));
    let e = letter(4, 0).exp_series().unwrap();
    assert_eq!(e.coefficient(&Word::from([0, 0, 0])).unwrap(), rat(1, 6));
    assert!(e.coefficient(&Word::from([0, 0, 0, 0, 0])).is_err());
}

#[test]
fn product_examples() {
    let a = one(3).add(&letter(3, 0)).unwrap();
    let b = one(3).add(&letter(3, 1)).unwrap();
    let expect = S::from_terms(
        QQ,
        ab(),
        3,
        [
            (Word::empty(), rat(1, 1)),
            (Word::from([0]), rat(1, 1)),
            (Word::from([1]), rat(1, 1)),
            (Word::from([0, 1]), rat(1, 1)),
        ],
    )
    .unwrap();
    assert_eq!(a.concat_mul(&b).unwrap(), expect);
    assert_eq!(one(3).concat_mul(&a).unwrap(), a);
    let e = letter(3, 0).pow(3);
    assert!(e.concat_mul(&letter(3, 0)).unwrap().is_empty());
    assert!(a.concat_mul(&one(4)).is_err());
}

#[test]
fn shuffle_examples() {
    let s = shuffle_words(&Word::from([0]), &Word::from([1]));
    assert_eq!(s, vec![Word::from([0, 1]), Word::from([1, 0])]);
    let s = shuffle_words(&Word::from([0]), &Word::from([0]));
    assert_eq!(s, vec![Word::from([0, 0]), Word::from([0, 0])]);
}

#[test]
fn group_like_examples() {
    assert!(letter(5, 0).exp_series().unwrap().is_group_like().passed());
    let a = one(3).add(&letter(3, 0)).unwrap().add(&letter(3, 1)).unwrap();
    match a.is_group_like() {
        ShuffleReport::Fail { u, v, lhs, rhs } => {
            // the degree-2 pair (e0, e0) fails first: 1 ≠ 2·0
            assert_eq!(u.len() + v.len(), 2);
            assert_ne!(lhs, rhs);
        }
        ShuffleReport::Pass => panic!("1 + e0 + e1 is not group-like"),
    }
    // (e0, e1) is a failing pair as well: 1·1 ≠ 0 + 0
    let lhs = a.get(&Word::from([0])) * a.get(&Word::from([1]));
    let rhs: Rational = shuffle_words(&Word::from([0]), &Word::from([1])).iter().map(|w| a.get(w)).sum();
    assert_eq!((lhs, rhs), (rat(1, 1), rat(0, 1)));
    // the (e0, e1) instance
    let g = letter(4, 0).add(&letter(4, 1)).unwrap().exp_series().unwrap();
    let lhs = g.get(&Word::from([0])) * g.get(&Word::from([1]));
    assert_eq!(lhs, g.get(&Word::from([0, 1])) + g.get(&Word::from([1, 0])));
}

#[test]
fn primitive_examples() {
    assert!(letter(4, 0).is_primitive().passed());
    let c = letter(4, 0).commutator(&letter(4, 1)).unwrap();
    assert!(c.is_primitive().passed());
    match mono(4, &[0, 1], rat(1, 1)).is_primitive() {
        ShuffleReport::Fail { u, v, .. } => {
            assert_eq!((u, v), (Word::from([0]), Word::from([1])));
        }
        ShuffleReport::Pass => panic!("e0e1 is not primitive"),
    }
}

#[test]
fn exp_log_examples() {
    let l = one(5).add(&letter(5, 0)).unwrap().log_series().unwrap();
    for n in 1..=5u8 {
        let w = Word::from_slice(&vec![0; n as usize]);
        let sign = if n % 2 == 1 { 1 } else { -1 };
        assert_eq!(l.get(&w), rat(sign, n as i64));
    }
    let xy = letter(3, 0).exp_series().unwrap().concat_mul(&letter(3, 1).exp_series().unwrap()).unwrap();
    let z = xy.log_series().unwrap();
    let half_comm = letter(3, 0).commutator(&letter(3, 1)).unwrap().scale_rational(&rat(1, 2));
    let low = letter(3, 0).add(&letter(3, 1)).unwrap().add(&half_comm).unwrap();
    assert_eq!(z.filter(|w| w.len() <= 2), low);
    assert!(one(3).exp_series().is_err());
    assert!(letter(3, 0).log_series().is_err());
}

#[test]
fn inverse_examples() {
    let inv = one(4).add(&letter(4, 0)).unwrap().mul_inverse().unwrap();
    for n in 0..=4usize {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        assert_eq!(inv.get(&Word::from_slice(&vec![0; n])), rat(sign, 1));
    }
    let e = letter(4, 0).exp_series().unwrap();
    assert_eq!(e.mul_inverse().unwrap(), letter(4, 0).neg().exp_series().unwrap());
    assert!(letter(4, 0).mul_inverse().is_err());
}

#[test]
fn substitution_examples() {
    let xy = Alphabet::new(&["X", "Y"]).unwrap();
    let phi = S::from_terms(QQ, xy.clone(), 3, [(Word::empty(), rat(1, 1)), (Word::from([0, 1]), rat(1, 1))]).unwrap();
    let out = phi.substitute(&[letter(3, 0), letter(3, 1)]).unwrap();
    assert_eq!(out, one(3).add(&mono(3, &[0, 1], rat(1, 1))).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = random_series(&mut rng, 5, 0.5, Some(2));
    assert_eq!(a.substitute(&[letter(5, 0), letter(5, 1)]).unwrap(), a);
    let bad = one(3).add(&letter(3, 0)).unwrap();
    assert!(phi.substitute(&[bad, letter(3, 1)]).is_err());
}

#[test]
fn substitution_preserves_group_likeness() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let g = random_lie(&mut rng, 5).exp_series().unwrap();
        let images = [random_lie(&mut rng, 5), random_lie(&mut rng, 5)];
        let out = g.substitute(&images).unwrap();
        assert!(out.is_group_like().passed());
    }
}

#[test]
fn exp_of_primitive_and_log_of_group_like() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let a = random_lie(&mut rng, 6);
        assert!(a.is_primitive().passed());
        let g = a.exp_series().unwrap();
        assert!(g.is_group_like().passed());
        assert_eq!(g.log_series().unwrap(), a);
        let h = random_lie(&mut rng, 6).exp_series().unwrap();
        let gh = g.concat_mul(&h).unwrap();
        assert!(gh.is_group_like().passed());
        assert!(gh.log_series().unwrap().is_primitive().passed());
        assert!(g.mul_inverse().unwrap().is_group_like().passed());
    }
}

#[test]
fn convolution_identity_exhaustive() {
    // (ab)[w] = Σ a[u]b[v] over all u, v with |u|+|v| ≤ 4
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a = random_series(&mut rng, 4, 0.8, Some(1));
    let b = random_series(&mut rng, 4, 0.8, Some(-2));
    let ab_ = a.concat_mul(&b).unwrap();
    let words = all_words(2, 4);
    for w in &words {
        let mut s = rat(0, 1);
        for k in 0..=w.len() {
            let (u, v) = w.as_slice().split_at(k);
            s += a.get(&Word::from_slice(u)) * b.get(&Word::from_slice(v));
        }
        assert_eq!(ab_.get(w), s, "{w:?}");
    }
    for u in &words {
        for v in &words {
            if u.len() + v.len() <= 4 {
                let m = mono(4, u.as_slice(), rat(1, 1)).concat_mul(&mono(4, v.as_slice(), rat(1, 1))).unwrap();
                assert_eq!(m, mono(4, u.concat(v).as_slice(), rat(1, 1)));
            }
        }
    }
}

#[test]
fn associativity_on_monomial_supports() {
    let words = all_words(2, 2);
    for u in &words {
        for v in &words {
            for w in &words {
                let (a, b, c) = (mono(6, u.as_slice(), rat(1, 1)), mono(6, v.as_slice(), rat(2, 1)), mono(6, w.as_slice(), rat(-1, 3)));
                let l = a.concat_mul(&b).unwrap().concat_mul(&c).unwrap();
                let r = a.concat_mul(&b.concat_mul(&c).unwrap()).unwrap();
                assert_eq!(l, r);
            }
        }
    }
}

#[test]
fn json_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = random_series(&mut rng, 4, 0.5, Some(1));
    let j = a.to_json();
    assert_eq!(S::from_json(&j).unwrap(), a);
    let first = &j["terms"][0]["word"];
    assert_eq!(first.as_array().unwrap().len(), 0);
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #[test]
    fn shuffle_count_is_binomial(u in prop::collection::vec(0u8..3, 0..5), v in prop::collection::vec(0u8..3, 0..5)) {
        let n = shuffle_words(&Word::from_slice(&u), &Word::from_slice(&v)).len();
        prop_assert_eq!(n, binom(u.len() + v.len(), u.len()));
    }

    #[test]
    fn random_associativity(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_series(&mut rng, 5, 0.3, Some(1));
        let b = random_series(&mut rng, 5, 0.3, None);
        let c = random_series(&mut rng, 5, 0.3, Some(-1));
        let l = a.concat_mul(&b).unwrap().concat_mul(&c).unwrap();
        let r = a.concat_mul(&b.concat_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn inverse_and_exp_log_roundtrip(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_series(&mut rng, 5, 0.4, Some(1));
        prop_assert_eq!(a.concat_mul(&a.mul_inverse().unwrap()).unwrap(), one(5));
        let b = random_series(&mut rng, 5, 0.4, None);
        prop_assert_eq!(b.exp_series().unwrap().log_series().unwrap(), b);
    }
}
