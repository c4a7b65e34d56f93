//! Exact sparse elimination over Q.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::coeffring::Rational;

pub type SparseVec = BTreeMap<usize, Rational>;

/// v += c·w
pub fn axpy(v: &mut SparseVec, c: &Rational, w: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (k, x) in w {
        let e = v.entry(*k).or_insert_with(Rational::zero);
        *e += c * x;
        if e.is_zero() {
            v.remove(k);
        }
    }
}

/// Which coordinate leads when eliminating.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotOrder {
    /// smallest coordinate index leads; unknowns taken in increasing order
    Natural,
    /// largest coordinate index leads; unknowns taken in decreasing order
    Reversed,
}

impl PivotOrder {
    fn key(self, k: usize) -> usize {
        match self {
            PivotOrder::Natural => k,
            PivotOrder::Reversed => usize::MAX - k,
        }
    }
}

/// Incremental row echelon form. Each stored row has leading coefficient 1.
/// With tracking on, every row remembers which inserted vectors it came from.
pub struct Echelon {
    order: PivotOrder,
    rows: HashMap<usize, (SparseVec, SparseVec)>,
    track: bool,
}

pub enum Inserted {
    Independent(usize),
    /// combination of previously inserted vectors (by insertion id) that
    /// vanishes, including the new vector itself with coefficient 1
    Dependent(SparseVec),
}

impl Echelon {
    pub fn new(order: PivotOrder, track: bool) -> Self {
        Echelon { order, rows: HashMap::new(), track }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn lead(&self, v: &SparseVec) -> Option<usize> {
        match self.order {
            PivotOrder::Natural => v.keys().next().copied(),
            PivotOrder::Reversed => v.keys().next_back().copied(),
        }
    }

    /// Reduces `v` until its leading coordinate is not a pivot.
    pub fn reduce(&self, mut v: SparseVec, mut comb: SparseVec) -> (SparseVec, SparseVec) {
        while let Some(k) = self.lead(&v) {
            let Some((row, rc)) = self.rows.get(&k) else { break };
            let c = -v[&k].clone();
            axpy(&mut v, &c, row);
            if self.track {
                axpy(&mut comb, &c, rc);
            }
        }
        (v, comb)
    }

    pub fn insert(&mut self, id: usize, v: SparseVec) -> Inserted {
        let mut comb = SparseVec::new();
        if self.track {
            comb.insert(id, Rational::one());
        }
        let (mut v, mut comb) = self.reduce(v, comb);
        match self.lead(&v) {
            None => Inserted::Dependent(comb),
            Some(k) => {
                let inv = Rational::one() / &v[&k];
                for x in v.values_mut() {
                    *x *= &inv;
                }
                for x in comb.values_mut() {
                    *x *= &inv;
                }
                self.rows.insert(k, (v, comb));
                Inserted::Independent(k)
            }
        }
    }

    pub fn is_pivot(&self, k: usize) -> bool {
        self.rows.contains_key(&k)
    }

    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.keys().copied().collect();
        p.sort_by_key(|&k| self.order.key(k));
        p
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone(), SparseVec::new()).0.is_empty()
    }
}

pub fn rank(rows: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new(PivotOrder::Natural, false);
    for (i, r) in rows.into_iter().enumerate() {
        e.insert(i, r);
    }
    e.rank()
}

/// Kernel of the linear map sending unknown j to `cols[j]`. Each kernel
/// vector is returned densely over the unknowns.
pub fn nullspace(cols: &[SparseVec], order: PivotOrder) -> Vec<Vec<Rational>> {
    let n = cols.len();
    let mut e = Echelon::new(order, true);
    let mut out = Vec::new();
    let ids: Vec<usize> = match order {
        PivotOrder::Natural => (0..n).collect(),
        PivotOrder::Reversed => (0..n).rev().collect(),
    };
    for j in ids {
        if let Inserted::Dependent(c) = e.insert(j, cols[j].clone()) {
            let mut dense = vec![Rational::zero(); n];
            for (k, x) in c {
                dense[k] = x;
            }
            out.push(dense);
        }
    }
    out
}

/// Applies the map to a dense coefficient vector.
pub fn apply(cols: &[SparseVec], x: &[Rational]) -> SparseVec {
    let mut out = SparseVec::new();
    for (c, xi) in cols.iter().zip(x) {
        axpy(&mut out, xi, c);
    }
    out
}

/// Reduced row echelon form of a dense matrix; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows).find(|&k| !m[k][c].is_zero()) else { continue };
        m.swap(r, k);
        let inv = Rational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for k in 0..rows {
            if k != r && !m[k][c].is_zero() {
                let f = m[k][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[k][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}
