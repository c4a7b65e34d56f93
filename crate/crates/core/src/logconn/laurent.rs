use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::matrix::QMatrix;
use crate::coeffring::{format_rational, Rational};

/// Laurent polynomial in r variables over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    vars: usize,
    terms: BTreeMap<Vec<i64>, Rational>,
}

impl Laurent {
    pub fn zero(vars: usize) -> Self {
        Laurent { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: Rational) -> Self {
        Self::monomial(vars, vec![0; vars], c)
    }

    pub fn monomial(vars: usize, exps: Vec<i64>, c: Rational) -> Self {
        let mut out = Self::zero(vars);
        if !c.is_zero() {
            out.terms.insert(exps, c);
        }
        out
    }

    /// c·t_i^n
    pub fn power(vars: usize, i: usize, n: i64, c: Rational) -> Self {
        let mut e = vec![0; vars];
        e[i] = n;
        Self::monomial(vars, e, c)
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// A unit of the Laurent ring: a single nonzero term.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    fn insert(&mut self, e: Vec<i64>, c: Rational) {
        let slot = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        Laurent { vars: self.vars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(e, c1 * c2);
            }
        }
        out
    }

    /// t_i ∂/∂t_i
    pub fn euler(&self, i: usize) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            out.insert(e.clone(), c * Rational::from_integer(e[i].into()));
        }
        out
    }

    pub fn to_text(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            parts.push(match (mono.is_empty(), c.is_one()) {
                (true, _) => format_rational(c),
                (false, true) => mono.join("*"),
                (false, false) => format!("{}*{}", format_rational(c), mono.join("*")),
            });
        }
        parts.join(" + ")
    }
}

/// Square matrix over the Laurent ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMatrix {
    vars: usize,
    rows: Vec<Vec<Laurent>>,
}

impl LaurentMatrix {
    pub fn identity(vars: usize, n: usize) -> Self {
        Self::constant(vars, &QMatrix::identity(n))
    }

    pub fn constant(vars: usize, m: &QMatrix) -> Self {
        let rows = m.rows().iter().map(|r| r.iter().map(|x| Laurent::constant(vars, x.clone())).collect()).collect();
        LaurentMatrix { vars, rows }
    }

    /// I + (t_i^n − 1)·P
    pub fn shear_step(vars: usize, i: usize, n: i64, p: &QMatrix) -> Self {
        let k = p.dim();
        let mut rows = Vec::with_capacity(k);
        for a in 0..k {
            let mut row = Vec::with_capacity(k);
            for b in 0..k {
                let pab = p.get(a, b).clone();
                let mut e = Laurent::power(vars, i, n, pab.clone()).sub(&Laurent::constant(vars, pab));
                if a == b {
                    e = e.add(&Laurent::constant(vars, Rational::one()));
                }
                row.push(e);
            }
            rows.push(row);
        }
        LaurentMatrix { vars, rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Laurent {
        &self.rows[i][j]
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.dim();
        let mut rows = vec![vec![Laurent::zero(self.vars); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                for k in 0..n {
                    *slot = slot.add(&self.rows[i][k].mul(&o.rows[k][j]));
                }
            }
        }
        LaurentMatrix { vars: self.vars, rows }
    }

    pub fn add(&self, o: &Self) -> Self {
        let rows = self.rows.iter().zip(&o.rows).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y)).collect()).collect();
        LaurentMatrix { vars: self.vars, rows }
    }

    pub fn euler(&self, i: usize) -> Self {
        let rows = self.rows.iter().map(|r| r.iter().map(|x| x.euler(i)).collect()).collect();
        LaurentMatrix { vars: self.vars, rows }
    }

    /// Cofactor expansion; ranks here are small.
    pub fn det(&self) -> Laurent {
        fn go(m: &[Vec<Laurent>], cols: &[usize], vars: usize) -> Laurent {
            if cols.is_empty() {
                return Laurent::constant(vars, Rational::one());
            }
            let row = m.len() - cols.len();
            let mut acc = Laurent::zero(vars);
            for (k, &c) in cols.iter().enumerate() {
                if m[row][c].is_zero() {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = m[row][c].mul(&go(m, &rest, vars));
                acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
        let cols: Vec<usize> = (0..self.dim()).collect();
        go(&self.rows, &cols, self.vars)
    }

    pub fn to_text(&self, names: &[String]) -> Vec<Vec<String>> {
        self.rows.iter().map(|r| r.iter().map(|x| x.to_text(names)).collect()).collect()
    }
}
