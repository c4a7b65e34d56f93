use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coeffring::Rational;
use crate::linalg;

/// Dense square matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    n: usize,
    rows: Vec<Vec<Rational>>,
}

impl QMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(QMatrix { n, rows })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Option<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect())
    }

    pub fn zero(n: usize) -> Self {
        QMatrix { n, rows: vec![vec![Rational::zero(); n]; n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.rows[i][i] = Rational::one();
        }
        m
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let mut m = Self::zero(d.len());
        for (i, x) in d.iter().enumerate() {
            m.rows[i][i] = x.clone();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        self.rows[i][j] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Zero::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let rows = self.rows.iter().zip(&o.rows).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        QMatrix { n: self.n, rows }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QMatrix { n: self.n, rows: self.rows.iter().map(|r| r.iter().map(|x| x * c).collect()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.rows[i][j] += a * &o.rows[k][j];
                }
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::identity(self.n), |acc, _| acc.mul(self))
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn shift(&self, c: &Rational) -> Self {
        self.add(&Self::identity(self.n).scale(c))
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).map(|i| self.rows[i][i].clone()).sum()
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.n).is_zero()
    }

    /// Basis of the kernel, one vector per free column of the reduced form.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        kernel_of_rows(self.rows.clone(), self.n)
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut aug: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        let piv = linalg::rref(&mut aug);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(QMatrix { n, rows: aug.into_iter().map(|r| r[n..].to_vec()).collect() })
    }

    /// Coefficients c₀..c_n of det(x − A), lowest degree first.
    pub fn charpoly(&self) -> Vec<Rational> {
        // Faddeev–LeVerrier
        let n = self.n;
        let mut c = vec![Rational::zero(); n + 1];
        c[n] = Rational::one();
        let mut m = Self::zero(n);
        for k in 1..=n {
            m = self.mul(&m).shift(&c[n + 1 - k]);
            let t = self.mul(&m).trace();
            c[n - k] = -t / Rational::from_integer(BigInt::from(k));
        }
        c
    }

    /// Rational eigenvalues with algebraic multiplicity, ascending. The
    /// multiplicities sum to n exactly when the spectrum is rational.
    pub fn rational_eigenvalues(&self) -> Vec<(Rational, usize)> {
        rational_roots(&self.charpoly())
    }

    /// Basis of ker (A − λ)^n.
    pub fn generalized_eigenspace(&self, lambda: &Rational) -> Vec<Vec<Rational>> {
        self.shift(&-lambda.clone()).pow(self.n).kernel()
    }
}

pub(crate) fn kernel_of_rows(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let piv = if rows.is_empty() { Vec::new() } else { linalg::rref(&mut rows) };
    let mut out = Vec::new();
    for f in (0..ncols).filter(|c| !piv.contains(c)) {
        let mut v = vec![Rational::zero(); ncols];
        v[f] = Rational::one();
        for (r, &pc) in piv.iter().enumerate() {
            v[pc] = -rows[r][f].clone();
        }
        out.push(v);
    }
    out
}

fn divisors(n: &BigInt) -> Option<Vec<i64>> {
    let n = n.abs().to_i64()?;
    let mut out = Vec::new();
    let mut d = 1i64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    Some(out)
}

fn eval(poly: &[Rational], x: &Rational) -> Rational {
    poly.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

// synthetic division by (x − r)
fn deflate(poly: &[Rational], r: &Rational) -> Vec<Rational> {
    let n = poly.len() - 1;
    let mut q = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for k in (1..=n).rev() {
        carry = &poly[k] + carry * r;
        q[k - 1] = carry.clone();
    }
    q
}

/// Rational roots with multiplicity by the rational root test.
pub fn rational_roots(poly: &[Rational]) -> Vec<(Rational, usize)> {
    let mut p: Vec<Rational> = poly.to_vec();
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    let mut roots: Vec<(Rational, usize)> = Vec::new();
    let mut zero_mult = 0;
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rational::zero(), zero_mult));
    }
    if p.len() > 1 {
        let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
        if let (Some(num), Some(den)) = (divisors(&ints[0]), divisors(ints.last().expect("nonempty"))) {
            let mut cands: Vec<Rational> = Vec::new();
            for &a in &num {
                for &b in &den {
                    for s in [1i64, -1] {
                        let q = Rational::new((s * a).into(), b.into());
                        if !cands.contains(&q) {
                            cands.push(q);
                        }
                    }
                }
            }
            cands.sort();
            for r in cands {
                let mut m = 0;
                while p.len() > 1 && eval(&p, &r).is_zero() {
                    p = deflate(&p, &r);
                    m += 1;
                }
                if m > 0 {
                    roots.push((r, m));
                }
            }
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    roots
}
