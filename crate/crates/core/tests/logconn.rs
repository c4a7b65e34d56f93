mod common;

use common::*;
use grt_core::coeffring::{rat, teichmuller, Padic, Rational};
use grt_core::logconn::*;
use grt_core::{Alphabet, TruncatedSeries, Word};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(rows: &[&[i64]]) -> QMatrix {
    QMatrix::from_i64(rows).unwrap()
}

fn conn(res: Vec<QMatrix>) -> LogConnection {
    LogConnection::with_residues(res, Flags { unipotent: false, integrable: true }).unwrap()
}

fn unipotent(res: Vec<QMatrix>) -> LogConnection {
    LogConnection::with_residues(res, Flags { unipotent: true, integrable: true }).unwrap()
}

#[test]
fn charpoly_and_spectrum() {
    let a = q(&[&[2, 1], &[0, 2]]);
    assert_eq!(a.charpoly(), vec![rat(4, 1), rat(-4, 1), rat(1, 1)]);
    assert_eq!(a.rational_eigenvalues(), vec![(rat(2, 1), 2)]);
    let b = q(&[&[0, 2], &[1, 0]]);
    assert!(b.rational_eigenvalues().is_empty());
    let c = QMatrix::diagonal(&[rat(1, 2), rat(-3, 1), rat(1, 2)]);
    assert_eq!(c.rational_eigenvalues(), vec![(rat(-3, 1), 1), (rat(1, 2), 2)]);
}

#[test]
fn shear_of_non_resonant_is_identity() {
    let c = conn(vec![QMatrix::diagonal(&[rat(0, 1), rat(1, 2)])]);
    let g = shear(&c).unwrap();
    assert!(g.is_identity());
    assert_eq!(g.gauge, LaurentMatrix::identity(1, 2));
    assert!(g.verify(&c));
}

#[test]
fn shear_diag_zero_two() {
    let c = conn(vec![q(&[&[0, 0], &[0, 2]])]);
    let g = shear(&c).unwrap();
    assert_eq!(g.residues, vec![q(&[&[2, 0], &[0, 2]])]);
    // t² on the 0-eigenline
    assert_eq!(g.gauge.entry(0, 0), &Laurent::power(1, 0, 2, rat(1, 1)));
    assert_eq!(g.gauge.entry(1, 1), &Laurent::constant(1, rat(1, 1)));
    assert!(g.gauge.entry(0, 1).is_zero() && g.gauge.entry(1, 0).is_zero());
    assert!(g.verify(&c));
    assert!(g.non_resonant());
}

#[test]
fn shear_leaves_jordan_block() {
    let c = conn(vec![q(&[&[0, 1], &[0, 0]])]);
    assert!(shear(&c).unwrap().is_identity());
}

#[test]
fn shear_errors() {
    let irrational = conn(vec![q(&[&[0, 2], &[1, 0]])]);
    assert_eq!(shear(&irrational), Err(LogError::UnsupportedSpectrum(0)));
    let nc = LogConnection::with_residues(vec![q(&[&[0, 1], &[0, 0]]), q(&[&[0, 0], &[1, 0]])], Flags::default()).unwrap();
    assert_eq!(shear(&nc), Err(LogError::Integrability(0, 1)));
    let flagged = LogConnection::with_residues(vec![q(&[&[0, 1], &[0, 0]]), q(&[&[0, 0], &[1, 0]])], Flags { unipotent: false, integrable: true });
    assert!(matches!(flagged, Err(LogError::Integrability(0, 1))));
}

#[test]
fn shear_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let spec = resonant_spectrum();
    let mut sheared = 0;
    for _ in 0..60 {
        let c = random_connection(&mut rng, &spec);
        let g = shear(&c).unwrap();
        assert!(g.non_resonant(), "{:?}", c.to_json());
        assert!(g.verify(&c));
        sheared += !g.is_identity() as usize;
    }
    assert!(sheared >= 10);
}

#[test]
fn horizontal_examples() {
    assert_eq!(horizontal_sections(&conn(vec![QMatrix::zero(3), QMatrix::zero(3)])).unwrap().len(), 3);
    assert_eq!(horizontal_sections(&conn(vec![q(&[&[0, 1], &[0, 0]])])).unwrap(), vec![vec![rat(1, 1), rat(0, 1)]]);
    let g2 = QMatrix::diagonal(&[rat(1, 2), rat(-1, 3)]);
    assert!(horizontal_sections(&conn(vec![QMatrix::zero(2), g2])).unwrap().is_empty());
    let res = horizontal_sections(&conn(vec![q(&[&[0, 0], &[0, 2]])]));
    assert!(matches!(res, Err(LogError::Resonant { var: 0, .. })));
}

#[test]
fn horizontal_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let spec = non_resonant_spectrum();
    for _ in 0..40 {
        let c = random_connection(&mut rng, &spec);
        let h = horizontal_sections(&c).unwrap();
        let brute = brute_force_sections(&c, 3);
        assert_eq!(brute.len(), h.len());
        let origin = vec![0i64; c.vars().len()];
        let mut u0 = Vec::new();
        for s in &brute {
            assert!(s.iter().all(|(e, _)| *e == origin));
            u0.push(s[0].1.clone());
        }
        let mut all = h.clone();
        all.extend(u0.iter().cloned());
        assert_eq!(span_rank(&all), h.len());
        for v in &h {
            for g in c.residues() {
                assert!(is_zero_vec(&g.apply(v)));
            }
        }
    }
}

#[test]
fn brute_force_sees_resonant_sections() {
    // Γ = diag(0, 2): U = (c₀, c₂t²)
    let c = conn(vec![q(&[&[0, 0], &[0, 2]])]);
    let brute = brute_force_sections(&c, 3);
    assert_eq!(brute.len(), 2);
    assert!(brute.iter().any(|s| s.iter().any(|(e, _)| e == &vec![2])));
}

#[test]
fn json_round_trip() {
    let c = LogConnection::new(
        vec!["u".into(), "w".into()],
        vec![q(&[&[0, 1], &[0, 0]]), QMatrix::zero(2)],
        Flags { unipotent: true, integrable: true },
    )
    .unwrap();
    let j = c.to_json();
    assert_eq!(j["rank"], 2);
    assert_eq!(j["flags"], serde_json::json!(["unipotent", "integrable"]));
    assert_eq!(LogConnection::from_json(&j).unwrap(), c);
    let bad = serde_json::json!({"rank": 2, "vars": ["t"], "residues": [[["1", "0"]]], "flags": []});
    assert!(LogConnection::from_json(&bad).is_err());
    let not_nil = serde_json::json!({"rank": 1, "vars": ["t"], "residues": [[["1"]]], "flags": ["unipotent"]});
    assert!(LogConnection::from_json(&not_nil).is_err());
}

const P: u32 = 5;
const PREC: i64 = 20;

fn pq(n: i64, d: i64) -> Padic {
    Padic::from_rational(&rat(n, d), P, PREC)
}

fn agrees(a: &PadicMatrix, b: &PadicMatrix) -> bool {
    a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| x.agrees(y))
}

fn id(m: usize) -> PadicMatrix {
    (0..m).map(|i| (0..m).map(|j| Padic::from_i64((i == j) as i64, P, PREC)).collect()).collect()
}

fn mat_mul(a: &PadicMatrix, b: &PadicMatrix) -> PadicMatrix {
    let m = a.len();
    (0..m)
        .map(|i| (0..m).map(|j| (0..m).fold(Padic::exact_zero(P), |acc, k| acc.add(&a[i][k].mul(&b[k][j])))).collect())
        .collect()
}

#[test]
fn transport_same_point_is_identity() {
    let c = unipotent(vec![q(&[&[0, 1, 2], &[0, 0, 3], &[0, 0, 0]])]);
    let x = TangentialPoint::points(vec![pq(7, 3)]).unwrap();
    assert!(agrees(&transport(&c, &x, &x).unwrap(), &id(3)));
}

#[test]
fn transport_one_to_one_plus_p() {
    let c = unipotent(vec![q(&[&[0, 1], &[0, 0]])]);
    let from = TangentialPoint::points(vec![pq(1, 1)]).unwrap();
    let to = TangentialPoint::points(vec![pq(1 + P as i64, 1)]).unwrap();
    let t = transport(&c, &from, &to).unwrap();
    // log(1+p) = p − p²/2 + p³/3 − ⋯
    let mut l = Rational::zero();
    let mut pk = Rational::from_integer(1.into());
    for k in 1..=40i64 {
        pk *= Rational::from_integer((P as i64).into());
        let term = &pk / Rational::from_integer(k.into());
        l += if k % 2 == 1 { term } else { -term };
    }
    assert!(t[0][1].agrees(&Padic::from_rational(&l, P, PREC)));
    assert!(t[0][0].agrees(&pq(1, 1)) && t[1][1].agrees(&pq(1, 1)) && t[1][0].is_zero());
}

#[test]
fn transport_composes_and_is_unipotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let n1 = q(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
    let n2 = n1.mul(&n1).scale(&rat(3, 1)).add(&n1.scale(&rat(-2, 1)));
    let c = unipotent(vec![n1, n2]);
    for _ in 0..10 {
        let mut pt = || {
            let coords = (0..2).map(|_| pq(rng.gen_range(1..200) * if rng.gen_bool(0.3) { P as i64 } else { 1 }, rng.gen_range(1..4)));
            TangentialPoint::points(coords.collect()).unwrap()
        };
        let (x, y, z) = (pt(), pt(), pt());
        let xz = transport(&c, &x, &z).unwrap();
        let via = mat_mul(&transport(&c, &y, &z).unwrap(), &transport(&c, &x, &y).unwrap());
        assert!(agrees(&xz, &via));
        for i in 0..3 {
            assert!(xz[i][i].agrees(&pq(1, 1)));
            for j in 0..i {
                assert!(xz[i][j].is_zero());
            }
        }
    }
}

#[test]
fn transport_from_tangent_vector() {
    let c = unipotent(vec![q(&[&[0, 1], &[0, 0]])]);
    let u = pq(3, 1);
    let z = pq(3 * 16, 1);
    let from = TangentialPoint::new(vec![Coordinate::Tangential(u.clone())]).unwrap();
    let to = TangentialPoint::points(vec![z.clone()]).unwrap();
    let t = transport(&c, &from, &to).unwrap();
    let direct = grt_core::coeffring::iwasawa_log(&z.div(&u).unwrap()).unwrap();
    assert!(t[0][1].agrees(&direct.coeff(0)));
}

#[test]
fn transport_errors() {
    let c = conn(vec![q(&[&[1, 0], &[0, 0]])]);
    let x = TangentialPoint::points(vec![pq(1, 1)]).unwrap();
    assert!(matches!(transport(&c, &x, &x), Err(LogError::Domain(_))));
    assert!(TangentialPoint::points(vec![Padic::zero(P, PREC)]).is_err());
}

fn e_alphabet(r: usize) -> std::sync::Arc<Alphabet> {
    Alphabet::indexed("e", r)
}

#[test]
fn frobenius_same_point_is_identity() {
    let x = TangentialPoint::points(vec![pq(2, 1), pq(3, 7)]).unwrap();
    let f = frobenius_gm(&e_alphabet(2), 4, &x, &x, P).unwrap();
    assert!(f.terms().iter().all(|(w, c)| if w.len() == 0 { c.agrees(&pq(1, 1)) } else { c.is_zero() }));
}

#[test]
fn frobenius_fixes_root_of_unity_ratios() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10 {
        let xs: Vec<Padic> = (0..2).map(|_| pq(rng.gen_range(1..4) + P as i64 * rng.gen_range(0..30), 1)).collect();
        let ys: Vec<Padic> =
            xs.iter().map(|x| x.mul(&teichmuller(&pq(rng.gen_range(1..P as i64), 1)).unwrap())).collect();
        let f = frobenius_gm(
            &e_alphabet(2),
            4,
            &TangentialPoint::points(xs).unwrap(),
            &TangentialPoint::points(ys).unwrap(),
            P,
        )
        .unwrap();
        assert!(f.terms().iter().all(|(w, c)| w.len() == 0 || c.is_zero()));
        assert!(f.is_group_like().passed());
    }
}

#[test]
fn frobenius_principal_unit_instance() {
    let y = pq(1 + 3 * P as i64, 1);
    let f = frobenius_gm(
        &e_alphabet(1),
        5,
        &TangentialPoint::points(vec![pq(1, 1)]).unwrap(),
        &TangentialPoint::points(vec![y.clone()]).unwrap(),
        P,
    )
    .unwrap();
    let a = grt_core::coeffring::iwasawa_log(&y).unwrap().coeff(0).mul(&Padic::from_i64(1 - P as i64, P, PREC));
    let ring = f.ring().clone();
    let expected = TruncatedSeries::monomial(ring, e_alphabet(1), 5, Word::from([0]), a).exp_series().unwrap();
    for (w, c) in expected.terms() {
        assert!(c.agrees(&f.get(w)), "{w:?}");
    }
    assert!(f.is_group_like().passed());
}

#[test]
fn frobenius_rejects_non_units() {
    let x = TangentialPoint::points(vec![pq(P as i64, 1)]).unwrap();
    let y = TangentialPoint::points(vec![pq(1, 1)]).unwrap();
    assert!(matches!(frobenius_gm(&e_alphabet(1), 3, &x, &y, P), Err(LogError::Domain(_))));
}
