use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{CoeffError, Rational};

/// Precision marker of the exact zero. No other value is exact.
pub const PREC_INF: i64 = i64::MAX;

/// A p-adic number known modulo p^prec (absolute precision).
///
/// Nonzero values are stored as p^val · unit with `0 < unit < p^(prec-val)`
/// and `p ∤ unit`. A value indistinguishable from zero has `unit = 0` and
/// `val = prec`; the exact zero has `prec = val = PREC_INF`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Padic {
    p: u32,
    prec: i64,
    val: i64,
    unit: BigInt,
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn pow_p(p: u32, k: i64) -> BigInt {
    assert!(k >= 0, "negative power of p");
    num_traits::pow(BigInt::from(p), k as usize)
}

fn sat_add(a: i64, b: i64) -> i64 {
    if a == PREC_INF || b == PREC_INF {
        PREC_INF
    } else {
        a.saturating_add(b)
    }
}

pub(crate) fn modinv(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    assert!(e.gcd.is_one(), "modular inverse of a non-unit");
    e.x.mod_floor(m)
}

/// Splits off the p-part: returns (v, n / p^v). `n` must be nonzero.
pub(crate) fn split_p(n: &BigInt, p: u32) -> (i64, BigInt) {
    let pb = BigInt::from(p);
    let mut v = 0i64;
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}

impl Padic {
    fn check_p(p: u32) {
        assert!(is_prime(p), "p = {p} is not prime");
    }

    /// The exact zero.
    pub fn exact_zero(p: u32) -> Self {
        Self::check_p(p);
        Padic { p, prec: PREC_INF, val: PREC_INF, unit: BigInt::zero() }
    }

    /// Zero known only modulo p^prec.
    pub fn zero(p: u32, prec: i64) -> Self {
        Self::check_p(p);
        Padic { p, prec, val: prec, unit: BigInt::zero() }
    }

    pub fn one(p: u32, prec: i64) -> Self {
        Self::from_int(&BigInt::one(), p, prec)
    }

    pub fn from_i64(n: i64, p: u32, prec: i64) -> Self {
        Self::from_int(&BigInt::from(n), p, prec)
    }

    pub fn from_int(n: &BigInt, p: u32, prec: i64) -> Self {
        Self::check_p(p);
        assert!(prec != PREC_INF, "only zero is exact");
        if n.is_zero() {
            return Padic::zero(p, prec);
        }
        let (v, u) = split_p(n, p);
        Self::normalized(p, prec, v, u)
    }

    /// The rational `q` reduced to absolute precision `prec`. Zero maps to
    /// the exact zero.
    pub fn from_rational(q: &Rational, p: u32, prec: i64) -> Self {
        Self::check_p(p);
        if q.is_zero() {
            return Padic::exact_zero(p);
        }
        let (vn, un) = split_p(q.numer(), p);
        let (vd, ud) = split_p(q.denom(), p);
        let val = vn - vd;
        if val >= prec {
            return Padic::zero(p, prec);
        }
        let m = pow_p(p, prec - val);
        let raw = (un * modinv(&ud, &m)).mod_floor(&m);
        Padic { p, prec, val, unit: raw }
    }

    /// Builds p^val · raw mod p^prec, pulling further p-factors out of `raw`.
    fn normalized(p: u32, prec: i64, val: i64, raw: BigInt) -> Self {
        if val >= prec {
            return Padic::zero(p, prec);
        }
        let m = pow_p(p, prec - val);
        let raw = raw.mod_floor(&m);
        if raw.is_zero() {
            return Padic::zero(p, prec);
        }
        let (extra, u) = split_p(&raw, p);
        let val = val + extra;
        if val >= prec {
            return Padic::zero(p, prec);
        }
        let m = pow_p(p, prec - val);
        Padic { p, prec, val, unit: u.mod_floor(&m) }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Absolute precision; `PREC_INF` for the exact zero.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Valuation; equals the precision for values indistinguishable from 0.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    /// Relative precision (digits of the unit part).
    pub fn relative_precision(&self) -> i64 {
        if self.prec == PREC_INF {
            PREC_INF
        } else {
            self.prec - self.val
        }
    }

    pub fn unit_part(&self) -> &BigInt {
        &self.unit
    }

    pub fn is_exact_zero(&self) -> bool {
        self.prec == PREC_INF
    }

    /// True if the value is indistinguishable from zero at its precision.
    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.val == 0
    }

    fn same_p(&self, other: &Padic) {
        assert_eq!(self.p, other.p, "mismatched primes");
    }

    pub fn check_same_p(&self, other: &Padic) -> Result<(), CoeffError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(CoeffError::PrimeMismatch(self.p, other.p))
        }
    }

    /// Reduces to a lower absolute precision (never raises it).
    pub fn with_precision(&self, prec: i64) -> Padic {
        if prec >= self.prec {
            return self.clone();
        }
        if self.is_zero() {
            return Padic::zero(self.p, prec);
        }
        Self::normalized(self.p, prec, self.val, self.unit.clone())
    }

    /// Treats the stored representative as exact and re-reads it at a higher
    /// precision. Only for callers that know the extra digits (e.g. integers).
    pub fn lift_to(&self, prec: i64) -> Padic {
        if self.is_zero() {
            return if self.is_exact_zero() { self.clone() } else { Padic::zero(self.p, prec.max(self.prec)) };
        }
        Padic { p: self.p, prec, val: self.val, unit: self.unit.clone() }
            .renormalize()
    }

    fn renormalize(self) -> Padic {
        Self::normalized(self.p, self.prec, self.val, self.unit)
    }

    pub fn add(&self, other: &Padic) -> Padic {
        self.same_p(other);
        if self.is_exact_zero() {
            return other.clone();
        }
        if other.is_exact_zero() {
            return self.clone();
        }
        let prec = self.prec.min(other.prec);
        let m = self.val.min(other.val);
        if m >= prec {
            return Padic::zero(self.p, prec);
        }
        let mut raw = BigInt::zero();
        if !self.unit.is_zero() && self.val < prec {
            raw += &self.unit * pow_p(self.p, self.val - m);
        }
        if !other.unit.is_zero() && other.val < prec {
            raw += &other.unit * pow_p(self.p, other.val - m);
        }
        Self::normalized(self.p, prec, m, raw)
    }

    pub fn neg(&self) -> Padic {
        if self.is_zero() {
            return self.clone();
        }
        let m = pow_p(self.p, self.prec - self.val);
        Padic { p: self.p, prec: self.prec, val: self.val, unit: (&m - &self.unit).mod_floor(&m) }
    }

    pub fn sub(&self, other: &Padic) -> Padic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Padic) -> Padic {
        self.same_p(other);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Padic::exact_zero(self.p);
        }
        let prec = sat_add(self.prec, other.val).min(sat_add(other.prec, self.val));
        if self.is_zero() || other.is_zero() {
            return Padic::zero(self.p, prec);
        }
        Self::normalized(self.p, prec, self.val + other.val, &self.unit * &other.unit)
    }

    /// Multiplicative inverse. Relative precision is preserved.
    pub fn inv(&self) -> Result<Padic, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::Domain("division by a p-adic indistinguishable from zero".into()));
        }
        let rel = self.prec - self.val;
        let m = pow_p(self.p, rel);
        Ok(Padic { p: self.p, prec: rel - self.val, val: -self.val, unit: modinv(&self.unit, &m) })
    }

    pub fn div(&self, other: &Padic) -> Result<Padic, CoeffError> {
        self.check_same_p(other)?;
        let q = self.mul(&other.inv()?);
        Ok(q)
    }

    /// Multiplies by p^k exactly (k may be negative).
    pub fn shift(&self, k: i64) -> Padic {
        if self.is_exact_zero() {
            return self.clone();
        }
        Padic { p: self.p, prec: self.prec + k, val: self.val + k, unit: self.unit.clone() }
    }

    pub fn pow(&self, e: u32) -> Padic {
        if e == 0 {
            let prec = if self.is_exact_zero() { 1 } else { self.prec.max(1) };
            return Padic::one(self.p, prec);
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// The rational p^val · unit (the stored representative).
    pub fn to_rational(&self) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        let u = Rational::from_integer(self.unit.clone());
        if self.val >= 0 {
            u * Rational::from_integer(pow_p(self.p, self.val))
        } else {
            u / Rational::from_integer(pow_p(self.p, -self.val))
        }
    }

    /// The residue representative in [0, p^prec) for integral values.
    pub fn residue(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.val < 0 {
            return None;
        }
        Some(&self.unit * pow_p(self.p, self.val))
    }

    /// True if `self - other` vanishes at the shared precision.
    pub fn agrees(&self, other: &Padic) -> bool {
        self.sub(other).is_zero()
    }

    /// Smallest integer n such that the digits agree modulo p^n fail, i.e. the
    /// valuation of the difference (capped by the shared precision).
    pub fn agreement(&self, other: &Padic) -> i64 {
        self.sub(other).valuation()
    }

    /// Signed integer representative closest to zero, when it fits.
    pub fn to_i64_symmetric(&self) -> Option<i64> {
        let r = self.residue()?;
        if self.prec == PREC_INF {
            return Some(0);
        }
        let m = pow_p(self.p, self.prec);
        let half = &m / 2;
        let s = if r > half { r - &m } else { r };
        s.to_i64()
    }

    pub fn encode_value(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        match self.residue() {
            Some(r) => r.to_string(),
            None => {
                let d = pow_p(self.p, -self.val);
                format!("{}/{}", self.unit, d)
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let prec = if self.is_exact_zero() {
            serde_json::Value::String("inf".into())
        } else {
            serde_json::Value::from(self.prec)
        };
        serde_json::json!({"p": self.p, "precision": prec, "value": self.encode_value()})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Padic, CoeffError> {
        let bad = |m: &str| CoeffError::Parse(format!("p-adic value: {m}"));
        let p = v.get("p").and_then(|x| x.as_u64()).ok_or_else(|| bad("missing p"))?;
        let p = u32::try_from(p).map_err(|_| bad("p too large"))?;
        if !is_prime(p) {
            return Err(bad("p is not prime"));
        }
        let value = v.get("value").and_then(|x| x.as_str()).ok_or_else(|| bad("missing value"))?;
        let q = super::parse_rational(value)?;
        match v.get("precision") {
            Some(serde_json::Value::String(s)) if s == "inf" => {
                if q.is_zero() {
                    Ok(Padic::exact_zero(p))
                } else {
                    Err(bad("only zero may be exact"))
                }
            }
            Some(x) => {
                let n = x.as_i64().ok_or_else(|| bad("precision must be an integer"))?;
                if q.is_zero() {
                    Ok(Padic::zero(p, n))
                } else {
                    Ok(Padic::from_rational(&q, p, n))
                }
            }
            None => Err(bad("missing precision")),
        }
    }
}

impl fmt::Debug for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact_zero() {
            return write!(f, "0");
        }
        write!(f, "{} + O({}^{})", self.encode_value(), self.p, self.prec)
    }
}
