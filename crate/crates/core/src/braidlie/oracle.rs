use std::collections::BTreeMap;

use num_traits::Zero;

use super::{BraidElement, BraidError, BraidPresentation, SmashAlgebra};
use crate::coeffring::{Rational, QQ};
use crate::linalg::{self, Echelon, PivotOrder, SparseVec};
use crate::ncseries::Word;

// largest degree-d column count the dense oracle will attempt (5^5)
const MAX_COLUMNS: usize = 3125;

/// Degree-d component of U(H_n) computed in the free associative algebra.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub n: usize,
    pub d: usize,
    pub dimension: usize,
    /// generators kept after eliminating the row sums
    pub free_generators: Vec<(usize, usize)>,
    /// standard monomials (non-pivot columns) spanning the quotient
    pub transversal: Vec<Vec<(usize, usize)>>,
    relators: Vec<BTreeMap<(usize, usize), Rational>>,
}

fn digits(mut idx: usize, base: usize, len: usize) -> Vec<usize> {
    let mut v = vec![0; len];
    for x in v.iter_mut().rev() {
        *x = idx % base;
        idx /= base;
    }
    v
}

/// Quotient of the free algebra on the symmetric generators by the ideal of
/// the row-sum and disjoint-commutator relators, in degree d.
pub fn quotient_oracle(n: usize, d: usize) -> Result<OracleReport, BraidError> {
    let pres = BraidPresentation::new(n)?;
    let gens = pres.generators();
    // the ideal generated by the linear relators: pass to T(V/R₁)
    let mut m = pres.row_sums();
    let pivots = linalg::rref(&mut m);
    let free: Vec<usize> = (0..gens.len()).filter(|c| !pivots.contains(c)).collect();
    let w = free.len();
    let expr: Vec<Vec<Rational>> = (0..gens.len())
        .map(|g| match free.iter().position(|&f| f == g) {
            Some(k) => (0..w).map(|t| if t == k { Rational::from_integer(1.into()) } else { Rational::zero() }).collect(),
            None => {
                let r = pivots.iter().position(|&p| p == g).unwrap();
                free.iter().map(|&f| -m[r][f].clone()).collect()
            }
        })
        .collect();
    let free_generators: Vec<(usize, usize)> = free.iter().map(|&f| gens[f]).collect();
    let cols = w.checked_pow(d as u32).filter(|&c| c <= MAX_COLUMNS).ok_or_else(|| {
        BraidError::Resource(format!("quotient oracle for n = {n}, d = {d} needs {w}^{d} columns"))
    })?;
    let relators: Vec<BTreeMap<(usize, usize), Rational>> = pres
        .disjoint_pairs()
        .into_iter()
        .map(|(s, t)| {
            let mut r: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
            for p in 0..w {
                for q in 0..w {
                    let c = &expr[s][p] * &expr[t][q] - &expr[t][p] * &expr[s][q];
                    if !c.is_zero() {
                        r.insert((p, q), c);
                    }
                }
            }
            r
        })
        .filter(|r| !r.is_empty())
        .collect();
    let mut ech = Echelon::new(PivotOrder::Natural, false);
    let mut id = 0;
    if d >= 2 {
        for pos in 0..=d - 2 {
            let right = d - 2 - pos;
            for pre in 0..w.pow(pos as u32) {
                for suf in 0..w.pow(right as u32) {
                    for r in &relators {
                        let mut row = SparseVec::new();
                        for (&(p, q), c) in r {
                            let idx = ((pre * w + p) * w + q) * w.pow(right as u32) + suf;
                            row.insert(idx, c.clone());
                        }
                        ech.insert(id, row);
                        id += 1;
                    }
                }
            }
        }
    }
    let transversal: Vec<Vec<(usize, usize)>> = (0..cols)
        .filter(|c| !ech.is_pivot(*c))
        .map(|c| digits(c, w, d).into_iter().map(|k| free_generators[k]).collect())
        .collect();
    Ok(OracleReport { n, d, dimension: transversal.len(), free_generators, transversal, relators })
}

/// Comparison of the oracle with the smash normal form in degree d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleComparison {
    pub oracle_dimension: usize,
    pub smash_dimension: usize,
    /// row sums, symmetry and every degree-2 relator map to zero
    pub relators_vanish: bool,
    /// rank of the transversal's images among degree-d PBW monomials
    pub transversal_rank: usize,
}

impl OracleComparison {
    pub fn agrees(&self) -> bool {
        self.relators_vanish
            && self.oracle_dimension == self.smash_dimension
            && self.transversal_rank == self.oracle_dimension
    }
}

pub fn oracle_matches_smash(n: usize, d: usize) -> Result<OracleComparison, BraidError> {
    let rep = quotient_oracle(n, d)?;
    let alg = SmashAlgebra::get(n, d.max(2))?;
    let inj = |(i, j): (usize, usize)| BraidElement::inject(QQ, alg.clone(), i, j);
    let mut vanish = true;
    for i in 0..n {
        let mut s = BraidElement::zero(QQ, alg.clone());
        for j in 0..n {
            s = s.add(&inj((i, j))?)?;
            vanish &= inj((i, j))?.sub(&inj((j, i))?)?.is_zero();
        }
        vanish &= s.is_zero() && inj((i, i))?.is_zero();
    }
    let images: Vec<BraidElement> = rep.free_generators.iter().map(|&g| inj(g)).collect::<Result<_, _>>()?;
    for r in &rep.relators {
        let mut acc = BraidElement::zero(QQ, alg.clone());
        for (&(p, q), c) in r {
            acc = acc.add(&images[p].smash_mul(&images[q])?.scale(c))?;
        }
        vanish &= acc.is_zero();
    }
    let mono = alg.monomials(d);
    let index: BTreeMap<&Word, usize> = mono.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let alg_d = SmashAlgebra::get(n, d)?;
    let mut rows = Vec::new();
    for t in &rep.transversal {
        let mut acc = BraidElement::one(QQ, alg_d.clone());
        for &(i, j) in t {
            acc = acc.smash_mul(&BraidElement::inject(QQ, alg_d.clone(), i, j)?)?;
        }
        let row: SparseVec = acc.degree_part(d).terms().iter().map(|(w, c)| (index[w], c.clone())).collect();
        rows.push(row);
    }
    Ok(OracleComparison {
        oracle_dimension: rep.dimension,
        smash_dimension: alg_d.degree_dimension(d),
        relators_vanish: vanish,
        transversal_rank: linalg::rank(rows),
    })
}
