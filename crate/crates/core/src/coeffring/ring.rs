use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::Value;

use super::{format_rational, is_prime, parse_rational, CoeffError, Padic, Rational};

/// A coefficient ring. The ring value is a tag (e.g. the prime and working
/// precision) and elements are plain values of `Elem`.
pub trait Ring: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_rational(&self, q: &Rational) -> Self::Elem;
    /// Only exact zeros may be dropped from sparse storage.
    fn is_exact_zero(&self, a: &Self::Elem) -> bool;
    /// Zero to the element's known precision.
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn describe(&self) -> String;
    /// JSON tag identifying the ring, e.g. `{"kind": "QQ"}`.
    fn tag_json(&self) -> Value;
    fn from_tag_json(v: &Value) -> Result<Self, CoeffError>
    where
        Self: Sized;
    fn encode(&self, a: &Self::Elem) -> Value;
    fn decode(&self, v: &Value) -> Result<Self::Elem, CoeffError>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_rational(&Rational::from_integer(BigInt::from(n)))
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, &self.one()))
    }
    fn scale_rational(&self, a: &Self::Elem, q: &Rational) -> Self::Elem {
        self.mul(a, &self.from_rational(q))
    }
}

/// The rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct QQ;

impl Ring for QQ {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn from_rational(&self, q: &Rational) -> Rational {
        q.clone()
    }
    fn is_exact_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &Rational) -> bool {
        a.is_one()
    }
    fn describe(&self) -> String {
        "QQ".into()
    }
    fn tag_json(&self) -> Value {
        serde_json::json!({"kind": "QQ"})
    }
    fn from_tag_json(v: &Value) -> Result<Self, CoeffError> {
        match v.get("kind").and_then(Value::as_str) {
            Some("QQ") => Ok(QQ),
            _ => Err(CoeffError::Parse(format!("expected ring QQ, got {v}"))),
        }
    }
    fn encode(&self, a: &Rational) -> Value {
        Value::String(format_rational(a))
    }
    fn decode(&self, v: &Value) -> Result<Rational, CoeffError> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(BigInt::from(n.as_i64().unwrap()))),
            _ => Err(CoeffError::Parse(format!("not a rational: {v}"))),
        }
    }
}

/// Q_p with working absolute precision `prec`; constants enter at `prec`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PadicRing {
    pub p: u32,
    pub prec: i64,
}

impl PadicRing {
    pub fn new(p: u32, prec: i64) -> Result<Self, CoeffError> {
        if !is_prime(p) {
            return Err(CoeffError::Domain(format!("{p} is not prime")));
        }
        if prec <= 0 {
            return Err(CoeffError::Domain("precision must be positive".into()));
        }
        Ok(PadicRing { p, prec })
    }
}

impl Ring for PadicRing {
    type Elem = Padic;

    fn zero(&self) -> Padic {
        Padic::exact_zero(self.p)
    }
    fn one(&self) -> Padic {
        Padic::one(self.p, self.prec)
    }
    fn add(&self, a: &Padic, b: &Padic) -> Padic {
        a.add(b)
    }
    fn neg(&self, a: &Padic) -> Padic {
        a.neg()
    }
    fn sub(&self, a: &Padic, b: &Padic) -> Padic {
        a.sub(b)
    }
    fn mul(&self, a: &Padic, b: &Padic) -> Padic {
        a.mul(b)
    }
    fn from_rational(&self, q: &Rational) -> Padic {
        Padic::from_rational(q, self.p, self.prec)
    }
    fn is_exact_zero(&self, a: &Padic) -> bool {
        a.is_exact_zero()
    }
    fn is_zero(&self, a: &Padic) -> bool {
        a.is_zero()
    }
    fn describe(&self) -> String {
        format!("Q_{} (precision {})", self.p, self.prec)
    }
    fn tag_json(&self) -> Value {
        serde_json::json!({"kind": "Qp", "p": self.p, "precision": self.prec})
    }
    fn from_tag_json(v: &Value) -> Result<Self, CoeffError> {
        let bad = || CoeffError::Parse(format!("expected ring Qp with p and precision, got {v}"));
        if v.get("kind").and_then(Value::as_str) != Some("Qp") {
            return Err(bad());
        }
        let p = v.get("p").and_then(Value::as_u64).ok_or_else(bad)?;
        let prec = v.get("precision").and_then(Value::as_i64).ok_or_else(bad)?;
        PadicRing::new(u32::try_from(p).map_err(|_| bad())?, prec)
    }
    fn encode(&self, a: &Padic) -> Value {
        a.to_json()
    }
    fn decode(&self, v: &Value) -> Result<Padic, CoeffError> {
        let x = match v {
            Value::String(s) => self.from_rational(&parse_rational(s)?),
            _ => Padic::from_json(v)?,
        };
        if x.p() != self.p {
            return Err(CoeffError::PrimeMismatch(self.p, x.p()));
        }
        Ok(x)
    }
}
