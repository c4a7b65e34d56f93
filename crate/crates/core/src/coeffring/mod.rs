//! Coefficient arithmetic: exact rationals, capped-precision p-adic numbers,
//! polynomials in the formal symbol l(p) = log p, and the branch conventions
//! used by the logarithm and exponential.

mod branch;
mod padic;
mod padic_st;
mod rational;
mod ring;

pub use branch::{iwasawa_log, padic_exp, padic_exp_with_precision, specialize_lp, teichmuller};
pub use padic::{is_prime, Padic, PREC_INF};
pub use padic_st::PadicSt;
pub use rational::{format_rational, parse_rational, rat, Rational};
pub use ring::{PadicRing, Ring, QQ};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("mismatched primes {0} and {1}")]
    PrimeMismatch(u32, u32),
    #[error("precision underflow: no justified digits remain ({0})")]
    PrecisionUnderflow(String),
    #[error("parse error: {0}")]
    Parse(String),
}
