use std::sync::Arc;

use grt_core::coeffring::rat;
use grt_core::freelie::{bch, lyndon_words, witt_number, LieElement, LieError, LyndonBasis};
use grt_core::{Alphabet, TruncatedSeries, Word, QQ};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type L = LieElement<QQ>;

fn basis(k: usize, cap: usize) -> Arc<LyndonBasis> {
    LyndonBasis::get(&Alphabet::indexed("e", k), cap)
}

fn random_lie(rng: &mut ChaCha8Rng, b: &Arc<LyndonBasis>, density: f64) -> L {
    let mut coords = Vec::new();
    for i in 0..b.len() {
        if rng.gen_bool(density) {
            coords.push((i, rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))));
        }
    }
    L::from_coords(QQ, b.clone(), coords)
}

#[test]
fn lyndon_examples() {
    assert_eq!(lyndon_words(2, 1), vec![Word::from([0]), Word::from([1])]);
    assert_eq!(lyndon_words(2, 2), vec![Word::from([0, 1])]);
    assert_eq!(lyndon_words(2, 5).len(), 6);
    assert_eq!(lyndon_words(2, 3), vec![Word::from([0, 0, 1]), Word::from([0, 1, 1])]);
}

#[test]
fn witt_counts_up_to_eight() {
    for k in [2usize, 3] {
        for d in 1..=8 {
            // independent count: words of length d with no smaller rotation and primitive
            let mut n = 0;
            for code in 0..k.pow(d as u32) {
                let mut w = vec![0u8; d];
                let mut c = code;
                for x in w.iter_mut().rev() {
                    *x = (c % k) as u8;
                    c /= k;
                }
                if (1..d).all(|i| {
                    let mut r = w[i..].to_vec();
                    r.extend_from_slice(&w[..i]);
                    w < r
                }) {
                    n += 1;
                }
            }
            assert_eq!(lyndon_words(k, d).len(), n);
            assert_eq!(witt_number(k, d), n);
        }
    }
}

#[test]
fn bracket_examples() {
    let b = basis(2, 5);
    let x = L::letter(QQ, b.clone(), 0);
    let y = L::letter(QQ, b.clone(), 1);
    assert!(x.bracket(&x).unwrap().is_zero());
    let xy = x.bracket(&y).unwrap();
    let i = b.index_of(&Word::from([0, 1])).unwrap();
    assert_eq!(xy, L::basis_element(QQ, b.clone(), i, rat(1, 1)));
    let s = xy.lie_to_series();
    let a = Alphabet::indexed("e", 2);
    let expect = TruncatedSeries::from_terms(QQ, a, 5, [(Word::from([0, 1]), rat(1, 1)), (Word::from([1, 0]), rat(-1, 1))]).unwrap();
    assert_eq!(s, expect);
    assert_eq!(b.bracketing(b.index_of(&Word::from([0, 0, 1])).unwrap()), "[e0,[e0,e1]]");
}

#[test]
fn jacobi_on_random_triples() {
    let b = basis(3, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let (x, y, z) = (random_lie(&mut rng, &b, 0.1), random_lie(&mut rng, &b, 0.1), random_lie(&mut rng, &b, 0.1));
        let j = x
            .bracket(&y.bracket(&z).unwrap())
            .unwrap()
            .add(&y.bracket(&z.bracket(&x).unwrap()).unwrap())
            .unwrap()
            .add(&z.bracket(&x.bracket(&y).unwrap()).unwrap())
            .unwrap();
        assert!(j.is_zero());
    }
}

#[test]
fn basis_images_are_primitive_and_independent() {
    let b = basis(2, 6);
    for i in 0..b.len() {
        let e = L::basis_element(QQ, b.clone(), i, rat(1, 1));
        let s = e.lie_to_series();
        assert!(s.is_primitive().passed());
        assert_eq!(L::series_to_lie(b.clone(), &s).unwrap(), e);
    }
    let rank = grt_core::linalg::rank((0..b.len()).map(|i| {
        let s = L::basis_element(QQ, b.clone(), i, rat(1, 1)).lie_to_series();
        let words = grt_core::ncseries::all_words(2, 6);
        s.terms().iter().map(|(w, c)| (words.iter().position(|x| x == w).unwrap(), c.clone())).collect()
    }));
    assert_eq!(rank, b.len());
}

#[test]
fn series_to_lie_rejects_non_primitive() {
    let b = basis(2, 4);
    let s = TruncatedSeries::monomial(QQ, Alphabet::indexed("e", 2), 4, Word::from([0, 1]), rat(1, 1));
    match L::series_to_lie(b, &s) {
        Err(LieError::NotPrimitive { u, v }) => assert_eq!((u, v), (Word::from([0]), Word::from([1]))),
        other => panic!("expected failure, got {other:?}"),
    }
}

#[test]
fn bch_examples() {
    let b = basis(2, 5);
    let x = L::letter(QQ, b.clone(), 0);
    let y = L::letter(QQ, b.clone(), 1);
    let zero = L::zero(QQ, b.clone());
    assert_eq!(bch(&x, &zero, 5).unwrap(), x);
    let z = bch(&x, &y, 5).unwrap();
    let half = x.bracket(&y).unwrap().scale_rational(&rat(1, 2));
    assert_eq!(z.degree_part(2), half);
    // series oracle
    let direct = x.exp().concat_mul(&y.exp()).unwrap().log_series().unwrap();
    assert_eq!(z.lie_to_series(), direct);
    let sym = bch(&y.neg(), &x.neg(), 5).unwrap().neg();
    assert_eq!(z, sym);
    assert!(bch(&x, &y, 4).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn lie_series_roundtrip(seed in 0u64..100_000) {
        let b = basis(2, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_lie(&mut rng, &b, 0.3);
        prop_assert_eq!(L::series_to_lie(b.clone(), &a.lie_to_series()).unwrap(), a);
    }

    #[test]
    fn bch_inverse_symmetry(seed in 0u64..100_000) {
        let b = basis(2, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (random_lie(&mut rng, &b, 0.3), random_lie(&mut rng, &b, 0.3));
        prop_assert_eq!(x.bch(&y).unwrap(), y.neg().bch(&x.neg()).unwrap().neg());
    }

    #[test]
    fn bch_is_associative(seed in 0u64..100_000) {
        let b = basis(2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (random_lie(&mut rng, &b, 0.4), random_lie(&mut rng, &b, 0.4), random_lie(&mut rng, &b, 0.4));
        prop_assert_eq!(x.bch(&y.bch(&z).unwrap()).unwrap(), x.bch(&y).unwrap().bch(&z).unwrap());
    }
}
