use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{xy_alphabet, GrtError, PENTAGON_PAIRS};
use crate::braidlie::{BraidElement, H5Lie, H5LieAlgebra};
use crate::coeffring::{Rational, QQ};
use crate::freelie::{LieElement, LyndonBasis};
use crate::linalg::{self, PivotOrder, SparseVec};
use crate::ncseries::{TruncatedSeries, Word};
use crate::par::{self, Exec};

/// Solutions of the linearized relations in Lie degree d.
#[derive(Clone, Debug)]
pub struct GradedSolution {
    pub degree: usize,
    pub dimension: usize,
    /// dimension found by the second elimination order
    pub cross_check_dimension: usize,
    /// every returned solution was substituted back and satisfies all rows
    pub verified: bool,
    pub solutions: Vec<LieElement<QQ>>,
}

fn word_index(w: &Word, base: usize, offset: u8) -> usize {
    w.iter().fold(0, |acc, &l| acc * base + (l - offset) as usize)
}

fn push_series(col: &mut SparseVec, s: &TruncatedSeries<QQ>, d: usize, base: usize, offset: u8, shift: usize) {
    for (w, c) in s.terms() {
        if w.len() == d && !c.is_zero() {
            let k = shift + word_index(w, base, offset);
            let e = col.entry(k).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                col.remove(&k);
            }
        }
    }
}

/// Σ over the five pentagon pairs of ψ(u, v), computed in the Lie algebra H₅.
fn pentagon_images(lie: &H5LieAlgebra, basis: &LyndonBasis, cols: &[usize]) -> Result<Vec<H5Lie>, GrtError> {
    let pairs: Vec<(H5Lie, H5Lie)> = PENTAGON_PAIRS
        .iter()
        .map(|&((a, b), (c, d))| Ok((lie.inject(a, b)?, lie.inject(c, d)?)))
        .collect::<Result<_, GrtError>>()?;
    let per_pair = par::map(Exec::default(), &pairs, |(u, v)| {
        let mut memo = BTreeMap::new();
        cols.iter().map(|&i| lie.lyndon_image(basis, i, u, v, &mut memo)).collect::<Vec<_>>()
    });
    Ok((0..cols.len())
        .map(|k| per_pair.iter().fold(lie.zero(), |acc, imgs| lie.add(&acc, &imgs[k])))
        .collect())
}

/// Nullspace of the linearized 2-cycle, 3-cycle and pentagon in degree d ≥ 2.
pub fn grt1_graded_dimension(d: usize) -> Result<GradedSolution, GrtError> {
    if d < 2 {
        return Err(GrtError::Domain(format!(
            "degree {d} refused: in degree 1 every a(X−Y) solves the linearized relations, \
             yet exp(a(X−Y)) violates the 3-cycle in degree 2 (degree-1 anomaly); use d ≥ 2"
        )));
    }
    let alpha = xy_alphabet();
    let basis = LyndonBasis::get(&alpha, d);
    let cols_idx: Vec<usize> = basis.degree_range(d).collect();
    let lie = H5LieAlgebra::new(d)?;
    let pent = pentagon_images(&lie, &basis, &cols_idx)?;
    let two_d = 1usize << d;
    let letter = |l: u8| TruncatedSeries::letter(QQ, alpha.clone(), d, l);
    let (x, y) = (letter(0), letter(1));
    let z = x.add(&y)?.neg();
    let columns: Vec<SparseVec> = par::map(Exec::default(), &cols_idx.iter().zip(&pent).collect::<Vec<_>>(), |(i, p)| {
        let psi = LieElement::basis_element(QQ, basis.clone(), **i, Rational::one()).lie_to_series();
        let mut col = SparseVec::new();
        let swapped = psi.substitute(&[y.clone(), x.clone()]).expect("valid images");
        push_series(&mut col, &swapped.add(&psi).unwrap(), d, 2, 0, 0);
        let a = psi.substitute(&[z.clone(), x.clone()]).expect("valid images");
        let b = psi.substitute(&[y.clone(), z.clone()]).expect("valid images");
        push_series(&mut col, &a.add(&b).unwrap().add(&psi).unwrap(), d, 2, 0, two_d);
        push_series(&mut col, &p.h, d, 2, 0, 2 * two_d);
        push_series(&mut col, &p.g, d, 3, 2, 3 * two_d);
        col
    });
    let primary = linalg::nullspace(&columns, PivotOrder::Natural);
    let second = linalg::nullspace(&columns, PivotOrder::Reversed);
    let verified = primary.iter().chain(&second).all(|v| linalg::apply(&columns, v).is_empty());
    let solutions = primary
        .iter()
        .map(|v| {
            let lead = v.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(Rational::one);
            let coords = cols_idx.iter().zip(v).map(|(&i, c)| (i, c / &lead));
            LieElement::from_coords(QQ, basis.clone(), coords)
        })
        .collect();
    Ok(GradedSolution {
        degree: d,
        dimension: primary.len(),
        cross_check_dimension: second.len(),
        verified,
        solutions,
    })
}

/// The solution spanning a one-dimensional degree d, re-expressed in the
/// Lyndon basis of the given cap.
pub fn grt1_generator(d: usize, cap: usize) -> Result<LieElement<QQ>, GrtError> {
    let sol = grt1_graded_dimension(d)?;
    if sol.dimension != 1 {
        return Err(GrtError::Domain(format!("degree {d} has dimension {}", sol.dimension)));
    }
    let src = &sol.solutions[0];
    let target = LyndonBasis::get(&xy_alphabet(), cap);
    let coords = src.coords().iter().map(|(i, c)| {
        let w = src.basis().word(*i);
        (target.index_of(w).expect("degree within cap"), c.clone())
    });
    Ok(LieElement::from_coords(QQ, target.clone(), coords))
}

/// Linearized pentagon Σ ψ(u, v) through the Lie algebra H₅.
pub fn linearized_pentagon_lie(psi: &LieElement<QQ>) -> Result<BraidElement, GrtError> {
    let basis = psi.basis().clone();
    let lie = H5LieAlgebra::new(basis.cap())?;
    let cols: Vec<usize> = psi.coords().keys().copied().collect();
    let imgs = pentagon_images(&lie, &basis, &cols)?;
    let mut acc = lie.zero();
    for (img, i) in imgs.iter().zip(&cols) {
        acc = lie.add(&acc, &lie.scale(img, &psi.coord(*i)));
    }
    Ok(lie.to_braid(&acc))
}

/// Linearized pentagon Σ ψ(u, v) by substituting the series of ψ into U(H₅).
pub fn linearized_pentagon_smash(psi: &LieElement<QQ>) -> Result<BraidElement, GrtError> {
    let s = psi.lie_to_series();
    let lie = H5LieAlgebra::new(s.cap())?;
    let alg = lie.smash().clone();
    let mut acc = BraidElement::zero(QQ, alg.clone());
    for ((a, b), (c, d)) in PENTAGON_PAIRS {
        let u = BraidElement::inject(QQ, alg.clone(), a, b)?;
        let v = BraidElement::inject(QQ, alg.clone(), c, d)?;
        acc = acc.add(&s.substitute(&[u, v])?)?;
    }
    Ok(acc)
}
