//! Exact algebra for associator relations in GRT₁, the braid Lie algebra
//! U(H₅), regular-singular log connections and p-adic multiple zeta values.

pub mod braidlie;
pub mod cli;
pub mod coeffring;
pub mod freelie;
pub mod grtcheck;
pub mod linalg;
pub mod logconn;
pub mod ncseries;
pub mod par;
pub mod pmzv;

pub use coeffring::{Padic, PadicRing, PadicSt, Rational, Ring, QQ};
pub use ncseries::{Alphabet, TruncatedSeries, Word};
