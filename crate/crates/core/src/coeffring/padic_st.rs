use std::fmt;

use super::{CoeffError, Padic};

/// Polynomial in the formal symbol l(p) with p-adic coefficients.
/// `coeffs[k]` multiplies l(p)^k; trailing zeros above degree 0 are dropped.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicSt {
    p: u32,
    coeffs: Vec<Padic>,
}

impl PadicSt {
    pub fn new(p: u32, coeffs: Vec<Padic>) -> Result<Self, CoeffError> {
        for c in &coeffs {
            c.check_same_p(&Padic::exact_zero(p))?;
        }
        let mut s = PadicSt { p, coeffs };
        s.trim();
        Ok(s)
    }

    pub fn constant(c: Padic) -> Self {
        PadicSt { p: c.p(), coeffs: vec![c] }
    }

    /// The symbol l(p) itself, with coefficient known to precision `prec`.
    pub fn lp(p: u32, prec: i64) -> Self {
        PadicSt { p, coeffs: vec![Padic::zero(p, prec), Padic::one(p, prec)] }
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().is_zero() {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(Padic::exact_zero(self.p));
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[Padic] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Padic {
        self.coeffs.get(k).cloned().unwrap_or_else(|| Padic::exact_zero(self.p))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Padic::is_zero)
    }

    pub fn add(&self, o: &PadicSt) -> PadicSt {
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect();
        let mut s = PadicSt { p: self.p, coeffs };
        s.trim();
        s
    }

    pub fn neg(&self) -> PadicSt {
        PadicSt { p: self.p, coeffs: self.coeffs.iter().map(Padic::neg).collect() }
    }

    pub fn sub(&self, o: &PadicSt) -> PadicSt {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &PadicSt) -> PadicSt {
        let mut coeffs = vec![Padic::exact_zero(self.p); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        let mut s = PadicSt { p: self.p, coeffs };
        s.trim();
        s
    }

    pub fn scale(&self, c: &Padic) -> PadicSt {
        let mut s = PadicSt { p: self.p, coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() };
        s.trim();
        s
    }

    /// True when every coefficient difference vanishes at shared precision.
    pub fn agrees(&self, o: &PadicSt) -> bool {
        self.sub(o).is_zero()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coeffs.iter().map(Padic::to_json).collect())
    }

    pub fn from_json(v: &serde_json::Value) -> Result<PadicSt, CoeffError> {
        let arr = v
            .as_array()
            .ok_or_else(|| CoeffError::Parse("l(p)-polynomial must be a list".into()))?;
        if arr.is_empty() {
            return Err(CoeffError::Parse("empty l(p)-polynomial".into()));
        }
        let coeffs = arr.iter().map(Padic::from_json).collect::<Result<Vec<_>, _>>()?;
        let p = coeffs[0].p();
        PadicSt::new(p, coeffs)
    }
}

impl fmt::Debug for PadicSt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PadicSt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})·l(p)")?,
                _ => write!(f, "({c})·l(p)^{k}")?,
            }
        }
        Ok(())
    }
}
