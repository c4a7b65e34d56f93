use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::padic::pow_p;
use super::{CoeffError, Padic, PadicSt, Rational, PREC_INF};

/// Teichmüller representative of a p-adic unit, at the unit's precision.
pub fn teichmuller(x: &Padic) -> Result<Padic, CoeffError> {
    if !x.is_unit() {
        return Err(CoeffError::Domain("Teichmüller part needs a unit".into()));
    }
    let p = x.p();
    let r = x.precision();
    if p == 2 {
        if r < 2 {
            return Ok(Padic::one(2, r));
        }
        let four = BigInt::from(4);
        let s = if (x.unit_part() % &four) == BigInt::one() { 1 } else { -1 };
        return Ok(Padic::from_i64(s, 2, r));
    }
    let m = pow_p(p, r);
    let pb = BigInt::from(p);
    let mut y = x.unit_part().clone();
    for _ in 0..=r + 1 {
        let next = y.modpow(&pb, &m);
        if next == y {
            break;
        }
        y = next;
    }
    Ok(Padic::from_int(&y, p, r))
}

fn floor_log(p: u32, n: i64) -> i64 {
    let mut k = 0;
    let mut q = p as i64;
    while q <= n {
        k += 1;
        q = q.saturating_mul(p as i64);
    }
    k
}

/// Logarithm on the principal units: z must have positive valuation (at
/// least 2 when p = 2). Result has absolute precision z.precision().
fn log_one_plus(z: &Padic) -> Padic {
    let p = z.p();
    let r = z.precision();
    if z.is_zero() {
        return Padic::zero(p, r);
    }
    let vz = z.valuation();
    let mut acc = Padic::zero(p, r);
    let mut pw = z.clone();
    let mut n: i64 = 1;
    loop {
        if n * vz - floor_log(p, n) >= r {
            break;
        }
        let inv_n = Padic::from_i64(n, p, r + 2 * floor_log(p, n) + 1).inv().expect("n is nonzero");
        let term = pw.mul(&inv_n);
        acc = if n % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
        pw = pw.mul(z);
        n += 1;
    }
    acc.with_precision(r)
}

/// The Iwasawa logarithm x = p^v·ω·⟨u⟩ ↦ v·l(p) + log⟨u⟩.
/// The result is known to the relative precision of x.
pub fn iwasawa_log(x: &Padic) -> Result<PadicSt, CoeffError> {
    if x.is_zero() {
        return Err(CoeffError::Domain("logarithm of zero".into()));
    }
    let p = x.p();
    let v = x.valuation();
    let r = x.relative_precision();
    let u = Padic::from_int(x.unit_part(), p, r);
    let omega = teichmuller(&u)?;
    let principal = u.mul(&omega.inv()?);
    let z = principal.sub(&Padic::one(p, r));
    let l = if p == 2 && r < 2 { Padic::zero(p, r) } else { log_one_plus(&z) };
    let vcoef = if v == 0 { Padic::zero(p, r) } else { Padic::from_i64(v, p, r) };
    PadicSt::new(p, vec![l, vcoef])
}

/// Evaluates the l(p)-polynomial at l(p) = c.
pub fn specialize_lp(x: &PadicSt, c: &Padic) -> Result<Padic, CoeffError> {
    if x.p() != c.p() {
        return Err(CoeffError::PrimeMismatch(x.p(), c.p()));
    }
    let mut acc = Padic::exact_zero(x.p());
    for a in x.coeffs().iter().rev() {
        acc = acc.mul(c).add(a);
    }
    Ok(acc)
}

/// exp(x) for v(x) > 1/(p−1). The result carries x's absolute precision.
pub fn padic_exp(x: &Padic) -> Result<Padic, CoeffError> {
    if x.is_exact_zero() {
        return Err(CoeffError::Domain(
            "exp of the exact zero has no finite precision; use padic_exp_with_precision".into(),
        ));
    }
    exp_at(x, x.precision())
}

/// exp(x) computed to absolute precision `prec` (capped by x's precision).
pub fn padic_exp_with_precision(x: &Padic, prec: i64) -> Result<Padic, CoeffError> {
    exp_at(x, prec.min(x.precision()))
}

fn exp_at(x: &Padic, n_prec: i64) -> Result<Padic, CoeffError> {
    let p = x.p();
    if n_prec == PREC_INF || n_prec <= 0 {
        return Err(CoeffError::PrecisionUnderflow("exp needs a finite positive precision".into()));
    }
    if x.is_zero() {
        return Ok(Padic::one(p, n_prec));
    }
    let v = x.valuation();
    let need = if p == 2 { 2 } else { 1 };
    if v < need {
        return Err(CoeffError::Domain(format!(
            "exp diverges: valuation {v} is not above 1/(p-1) for p = {p}"
        )));
    }
    let xq = x.to_rational();
    let mut acc = Rational::zero();
    let mut term = Rational::one();
    let mut n: i64 = 0;
    // term n has valuation at least n·v − (n−1)/(p−1), increasing in n
    loop {
        if n > 0 && (n * v * (p as i64 - 1) - (n - 1)) >= n_prec * (p as i64 - 1) {
            break;
        }
        acc += &term;
        n += 1;
        term = term * &xq / Rational::from_integer(BigInt::from(n));
    }
    Ok(Padic::from_rational(&acc, p, n_prec))
}
