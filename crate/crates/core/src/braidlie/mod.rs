//! The Lie algebras H_n (n = 3, 4, 5), the truncated enveloping algebra
//! U(H₅) = U(H₄) ⋉ U(G₅) in PBW normal form, and a quotient oracle built
//! from plain linear algebra in the free associative algebra.

mod lie;
mod oracle;
mod smash;

use num_traits::Zero;
use thiserror::Error;

use crate::coeffring::{rat, Rational};
use crate::linalg;
use crate::ncseries::SeriesError;

pub use lie::{H5Lie, H5LieAlgebra};
pub use oracle::{oracle_matches_smash, quotient_oracle, OracleComparison, OracleReport};
pub use smash::{BraidElement, SmashAlgebra};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("index out of range: {0}")]
    Index(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("mismatched braid elements: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Generators e_ij (i < j) of H_n, with the relations: symmetry, e_ii = 0,
/// row sums Σ_j e_ij = 0 and [e_ij, e_kl] = 0 for disjoint pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidPresentation {
    pub n: usize,
}

impl BraidPresentation {
    pub fn new(n: usize) -> Result<Self, BraidError> {
        if !(3..=5).contains(&n) {
            return Err(BraidError::Unsupported(format!("n = {n}; only 3, 4, 5 are supported")));
        }
        Ok(BraidPresentation { n })
    }

    /// Symmetric generators (i, j) with i < j, in lexicographic order.
    pub fn generators(&self) -> Vec<(usize, usize)> {
        let mut g = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                g.push((i, j));
            }
        }
        g
    }

    pub fn generator_index(&self, i: usize, j: usize) -> Option<usize> {
        if i == j || i >= self.n || j >= self.n {
            return None;
        }
        let (i, j) = (i.min(j), i.max(j));
        self.generators().iter().position(|&g| g == (i, j))
    }

    /// Row-sum relators as coefficient vectors over the generators.
    pub fn row_sums(&self) -> Vec<Vec<Rational>> {
        let gens = self.generators();
        (0..self.n)
            .map(|i| gens.iter().map(|&(a, b)| if a == i || b == i { rat(1, 1) } else { Rational::zero() }).collect())
            .collect()
    }

    /// Pairs of generator indices with disjoint index sets.
    pub fn disjoint_pairs(&self) -> Vec<(usize, usize)> {
        let gens = self.generators();
        let mut out = Vec::new();
        for (s, &(i, j)) in gens.iter().enumerate() {
            for (t, &(k, l)) in gens.iter().enumerate().skip(s + 1) {
                if i != k && i != l && j != k && j != l {
                    out.push((s, t));
                }
            }
        }
        out
    }
}

/// The degree-one part of H_n: each e_ij written in chosen free generators.
#[derive(Clone, Debug)]
pub struct DegreeOne {
    pub n: usize,
    pub dimension: usize,
    /// the free generators (i, j), in letter order
    pub free: Vec<(usize, usize)>,
    /// expression of each symmetric generator (presentation order) over `free`
    pub expressions: Vec<Vec<Rational>>,
}

impl DegreeOne {
    /// Expression of e_ij for any 0 ≤ i, j < n (e_ii = 0).
    pub fn expression(&self, i: usize, j: usize) -> Result<Vec<Rational>, BraidError> {
        if i >= self.n || j >= self.n {
            return Err(BraidError::Index(format!("e_{i}{j} with n = {}", self.n)));
        }
        if i == j {
            return Ok(vec![Rational::zero(); self.dimension]);
        }
        let p = BraidPresentation { n: self.n };
        Ok(self.expressions[p.generator_index(i, j).unwrap()].clone())
    }
}

/// Free generators: H₄ uses x = e₀₃, y = e₁₃; H₅ uses x = e₁₂, y = e₁₃
/// (a lift of H₄) and a = e₁₄, b = e₂₄, c = e₃₄ for G₅.
fn chosen_free(n: usize) -> Vec<(usize, usize)> {
    match n {
        4 => vec![(0, 3), (1, 3)],
        5 => vec![(1, 2), (1, 3), (1, 4), (2, 4), (3, 4)],
        _ => vec![],
    }
}

/// Eliminates the row-sum relations, keeping the chosen free generators.
pub fn solve_degree_one(n: usize) -> Result<DegreeOne, BraidError> {
    let pres = BraidPresentation::new(n)?;
    let gens = pres.generators();
    let free = chosen_free(n);
    // columns: bound generators first, free generators last
    let mut order: Vec<usize> = (0..gens.len()).filter(|g| !free.contains(&gens[*g])).collect();
    order.extend(free.iter().map(|f| gens.iter().position(|g| g == f).unwrap()));
    let mut m: Vec<Vec<Rational>> =
        pres.row_sums().iter().map(|r| order.iter().map(|&c| r[c].clone()).collect()).collect();
    let pivots = linalg::rref(&mut m);
    let bound = gens.len() - free.len();
    let dimension = gens.len() - pivots.len();
    assert_eq!(pivots, (0..bound).collect::<Vec<_>>(), "chosen generators are not free");
    assert_eq!(dimension, free.len());
    let mut expressions = vec![vec![Rational::zero(); free.len()]; gens.len()];
    for (r, &pc) in pivots.iter().enumerate() {
        let g = order[pc];
        // e_g + Σ m[r][bound+k] f_k = 0
        expressions[g] = (0..free.len()).map(|k| -m[r][bound + k].clone()).collect();
    }
    for (k, f) in free.iter().enumerate() {
        let g = gens.iter().position(|x| x == f).unwrap();
        expressions[g] = (0..free.len()).map(|t| if t == k { rat(1, 1) } else { Rational::zero() }).collect();
    }
    Ok(DegreeOne { n, dimension, free, expressions })
}
