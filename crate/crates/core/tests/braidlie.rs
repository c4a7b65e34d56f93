use std::sync::Arc;

use grt_core::braidlie::{
    oracle_matches_smash, quotient_oracle, solve_degree_one, BraidElement, H5LieAlgebra, SmashAlgebra,
};
use grt_core::coeffring::rat;
use grt_core::linalg;
use grt_core::par::Exec;
use grt_core::{Rational, Word, QQ};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type B = BraidElement<QQ>;

fn inj(alg: &Arc<SmashAlgebra>, i: usize, j: usize) -> B {
    B::inject(QQ, alg.clone(), i, j).unwrap()
}

fn v(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| rat(x, 1)).collect()
}

#[test]
fn degree_one_solutions() {
    let h3 = solve_degree_one(3).unwrap();
    assert_eq!(h3.dimension, 0);
    assert!(h3.expressions.iter().all(|e| e.is_empty()));
    let h4 = solve_degree_one(4).unwrap();
    assert_eq!(h4.dimension, 2);
    assert_eq!(h4.expression(0, 1).unwrap(), h4.expression(2, 3).unwrap());
    assert_eq!(h4.expression(0, 2).unwrap(), h4.expression(1, 3).unwrap());
    assert_eq!(h4.expression(0, 3).unwrap(), h4.expression(1, 2).unwrap());
    assert_eq!(h4.expression(0, 1).unwrap(), v(&[-1, -1]));
    let h5 = solve_degree_one(5).unwrap();
    assert_eq!(h5.dimension, 5);
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];
    let rows = edges.iter().map(|&(i, j)| {
        h5.expression(i, j).unwrap().into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
    });
    assert_eq!(linalg::rank(rows), 5);
    assert_eq!(h5.expression(0, 1).unwrap(), v(&[-1, -1, -1, 0, 0]));
    assert_eq!(h5.expression(0, 2).unwrap(), v(&[0, 1, 1, 0, 1]));
    assert_eq!(h5.expression(0, 3).unwrap(), v(&[1, 0, 1, 1, 0]));
    assert_eq!(h5.expression(2, 3).unwrap(), v(&[-1, -1, -1, -1, -1]));
    assert!(solve_degree_one(6).is_err());
}

#[test]
fn inject_examples() {
    let alg = SmashAlgebra::get(5, 3).unwrap();
    assert!(inj(&alg, 0, 0).is_zero());
    assert_eq!(inj(&alg, 1, 0), inj(&alg, 0, 1));
    let abc = inj(&alg, 1, 4).add(&inj(&alg, 2, 4)).unwrap().add(&inj(&alg, 3, 4)).unwrap();
    assert_eq!(inj(&alg, 0, 4), abc.neg());
    assert!(B::inject(QQ, alg.clone(), 0, 5).is_err());
}

#[test]
fn relations_vanish_exhaustively() {
    for n in [4, 5] {
        let alg = SmashAlgebra::get(n, 3).unwrap();
        for i in 0..n {
            let mut s = B::zero(QQ, alg.clone());
            for j in 0..n {
                s = s.add(&inj(&alg, i, j)).unwrap();
                assert_eq!(inj(&alg, i, j), inj(&alg, j, i));
            }
            assert!(s.is_zero(), "row sum {i} for n = {n}");
            assert!(inj(&alg, i, i).is_zero());
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        if [i, j].iter().any(|x| *x == k || *x == l) || i == j || k == l {
                            continue;
                        }
                        assert!(inj(&alg, i, j).commutator(&inj(&alg, k, l)).unwrap().is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn action_formula_commutators() {
    let alg = SmashAlgebra::get(5, 3).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                continue;
            }
            let lhs = inj(&alg, i, j).commutator(&inj(&alg, i, 4)).unwrap();
            let rhs = inj(&alg, j, 4).commutator(&inj(&alg, i, 4)).unwrap().neg();
            assert_eq!(lhs, rhs, "i={i} j={j}");
        }
    }
}

#[test]
fn smash_dimensions() {
    let alg = SmashAlgebra::get(5, 8).unwrap();
    for d in 0..=8 {
        let expect: usize = (0..=d).map(|i| 2usize.pow(i as u32) * 3usize.pow((d - i) as u32)).sum();
        assert_eq!(alg.degree_dimension(d), expect);
        assert_eq!(alg.monomials(d).len(), expect);
    }
    // degree 2 reachable by products of degree-one elements
    let alg = SmashAlgebra::get(5, 2).unwrap();
    let mono = alg.monomials(2);
    let gens: Vec<B> = (0..5).map(|l| B::generator(QQ, alg.clone(), l)).collect();
    let mut rows = Vec::new();
    for a in &gens {
        for b in &gens {
            let p = a.smash_mul(b).unwrap();
            rows.push(p.terms().iter().map(|(w, c)| (mono.iter().position(|m| m == w).unwrap(), c.clone())).collect());
        }
    }
    assert_eq!(linalg::rank(rows), 19);
}

#[test]
fn oracle_examples() {
    assert_eq!(quotient_oracle(5, 1).unwrap().dimension, 5);
    assert_eq!(quotient_oracle(5, 2).unwrap().dimension, 19);
    assert_eq!(quotient_oracle(4, 3).unwrap().dimension, 8);
    assert_eq!(quotient_oracle(3, 2).unwrap().dimension, 0);
    assert!(quotient_oracle(5, 6).is_err());
}

#[test]
fn oracle_agrees_with_smash_through_degree_four() {
    for n in [4, 5] {
        for d in 0..=4 {
            let c = oracle_matches_smash(n, d).unwrap();
            assert!(c.agrees(), "n={n} d={d}: {c:?}");
        }
    }
}

fn random_element(rng: &mut ChaCha8Rng, alg: &Arc<SmashAlgebra>, max_deg: usize) -> B {
    let mut terms = Vec::new();
    for d in 0..=max_deg {
        for w in alg.monomials(d) {
            if rng.gen_bool(0.3) {
                terms.push((w, rat(rng.gen_range(-3..=3), rng.gen_range(1..=2))));
            }
        }
    }
    B::from_terms(QQ, alg.clone(), terms).unwrap()
}

#[test]
fn smash_mul_is_associative_and_graded() {
    let alg = SmashAlgebra::get(5, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let (a, b, c) = (random_element(&mut rng, &alg, 2), random_element(&mut rng, &alg, 2), random_element(&mut rng, &alg, 2));
        let l = a.smash_mul(&b).unwrap().smash_mul(&c).unwrap();
        let r = a.smash_mul(&b.smash_mul(&c).unwrap()).unwrap();
        assert_eq!(l, r);
        for i in 0..=2 {
            for j in 0..=2 {
                let p = a.degree_part(i).smash_mul(&b.degree_part(j)).unwrap();
                assert!(p.terms().keys().all(|w| w.len() == i + j));
            }
        }
    }
}

#[test]
fn parallel_and_sequential_products_agree() {
    let alg = SmashAlgebra::get(5, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let a = random_element(&mut rng, &alg, 3);
    let b = random_element(&mut rng, &alg, 3);
    assert_eq!(a.smash_mul_with(Exec::Sequential, &b).unwrap(), a.smash_mul_with(Exec::Parallel, &b).unwrap());
}

#[test]
fn lie_route_brackets_match_commutators() {
    let lie = H5LieAlgebra::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..10 {
        let mut rnd = || lie.degree_one(&(0..5).map(|_| rat(rng.gen_range(-2..=2), 1)).collect::<Vec<_>>());
        let (a, b, c) = (rnd(), rnd(), rnd());
        let ab = lie.bracket(&a, &b);
        let abc = lie.bracket(&ab, &c);
        let cab = lie.bracket(&c, &ab);
        let (ba, bb, bc) = (lie.to_braid(&a), lie.to_braid(&b), lie.to_braid(&c));
        assert_eq!(lie.to_braid(&ab), ba.commutator(&bb).unwrap());
        assert_eq!(lie.to_braid(&abc), ba.commutator(&bb).unwrap().commutator(&bc).unwrap());
        assert_eq!(lie.to_braid(&cab), bc.commutator(&ba.commutator(&bb).unwrap()).unwrap());
    }
    let _ = Word::empty();
}
