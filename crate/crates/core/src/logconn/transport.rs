use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::{LogConnection, LogError, QMatrix};
use crate::coeffring::{iwasawa_log, specialize_lp, Padic, PadicRing, Rational};
use crate::ncseries::{Alphabet, TruncatedSeries, Word};

pub type PadicMatrix = Vec<Vec<Padic>>;

/// One coordinate of a base point: an honest point, or the scale of a
/// tangent vector at the divisor tᵢ = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coordinate {
    Point(Padic),
    Tangential(Padic),
}

impl Coordinate {
    pub fn value(&self) -> &Padic {
        match self {
            Coordinate::Point(x) | Coordinate::Tangential(x) => x,
        }
    }

    pub fn is_tangential(&self) -> bool {
        matches!(self, Coordinate::Tangential(_))
    }
}

/// A base point given coordinatewise. A tangential scale u enters log
/// ratios as u itself, so transport from the tangent vector u·∂/∂t at 0 to
/// the point z uses log(z/u): the divergent log of the distance to the
/// divisor cancels in the limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentialPoint {
    coords: Vec<Coordinate>,
}

impl TangentialPoint {
    pub fn new(coords: Vec<Coordinate>) -> Result<Self, LogError> {
        let Some(first) = coords.first() else {
            return Err(LogError::Shape("a point needs at least one coordinate".into()));
        };
        for c in &coords {
            if c.value().is_zero() {
                return Err(LogError::Domain("coordinates and tangential scales must be nonzero".into()));
            }
            first.value().check_same_p(c.value())?;
        }
        Ok(TangentialPoint { coords })
    }

    pub fn points(xs: Vec<Padic>) -> Result<Self, LogError> {
        Self::new(xs.into_iter().map(Coordinate::Point).collect())
    }

    pub fn coords(&self) -> &[Coordinate] {
        &self.coords
    }

    pub fn p(&self) -> u32 {
        self.coords[0].value().p()
    }
}

fn log_ratio(from: &Padic, to: &Padic, lp: &Padic) -> Result<Padic, LogError> {
    let ratio = to.div(from)?;
    Ok(specialize_lp(&iwasawa_log(&ratio)?, lp)?)
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn vp_factorial(p: u32, k: usize) -> i64 {
    let (mut v, mut q) = (0, p as usize);
    while q <= k {
        v += (k / q) as i64;
        q *= p as usize;
    }
    v
}

fn identity(p: u32, m: usize, prec: i64) -> PadicMatrix {
    (0..m).map(|i| (0..m).map(|j| if i == j { Padic::one(p, prec) } else { Padic::zero(p, prec) }).collect()).collect()
}

fn mat_mul(a: &PadicMatrix, b: &PadicMatrix) -> PadicMatrix {
    let m = a.len();
    let p = a[0][0].p();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| (0..m).fold(Padic::exact_zero(p), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

/// exp(N·L) for nilpotent N, a finite sum.
fn unipotent_exp(n: &QMatrix, l: &Padic) -> PadicMatrix {
    let p = l.p();
    let m = n.dim();
    let prec = l.precision();
    let mut out = identity(p, m, prec);
    let mut nk = QMatrix::identity(m);
    let mut lk = Padic::one(p, prec);
    for k in 1..m {
        nk = nk.mul(n);
        lk = lk.mul(l);
        if nk.is_zero() {
            break;
        }
        let f = Rational::from_integer(factorial(k));
        for (a, row) in out.iter_mut().enumerate() {
            for (b, x) in row.iter_mut().enumerate() {
                let c = Padic::from_rational(&(nk.get(a, b) / &f), p, prec + vp_factorial(p, k));
                *x = x.add(&c.mul(&lk));
            }
        }
    }
    out
}

/// ∏ᵢ exp(Nᵢ·log(toᵢ/fromᵢ)) with the branch l(p) = 0.
pub fn transport(conn: &LogConnection, from: &TangentialPoint, to: &TangentialPoint) -> Result<PadicMatrix, LogError> {
    let lp = Padic::exact_zero(from.p());
    transport_with_lp(conn, from, to, &lp)
}

/// Transport with the logarithm branch l(p) = `lp`. Factors are multiplied
/// in variable order.
pub fn transport_with_lp(
    conn: &LogConnection,
    from: &TangentialPoint,
    to: &TangentialPoint,
    lp: &Padic,
) -> Result<PadicMatrix, LogError> {
    if !conn.flags().unipotent {
        return Err(LogError::Domain("transport needs a connection flagged unipotent".into()));
    }
    if let Some(i) = conn.residues().iter().position(|g| !g.is_nilpotent()) {
        return Err(LogError::Domain(format!("residue {i} is not nilpotent")));
    }
    let r = conn.vars().len();
    if from.coords.len() != r || to.coords.len() != r {
        return Err(LogError::Shape(format!("endpoints must have {r} coordinates")));
    }
    from.coords[0].value().check_same_p(to.coords[0].value())?;
    lp.check_same_p(from.coords[0].value())?;
    let mut acc: Option<PadicMatrix> = None;
    for i in 0..r {
        let l = log_ratio(from.coords[i].value(), to.coords[i].value(), lp)?;
        let e = unipotent_exp(&conn.residues()[i], &l);
        acc = Some(match acc {
            None => e,
            Some(a) => mat_mul(&a, &e),
        });
    }
    Ok(acc.expect("at least one variable"))
}

/// ∏ᵢ exp(eᵢ·(1−p)·(log yᵢ − log xᵢ)) in the letters of `alphabet`, with
/// l(p) = 0. Coordinates must be units.
pub fn frobenius_gm(
    alphabet: &Arc<Alphabet>,
    cap: usize,
    from: &TangentialPoint,
    to: &TangentialPoint,
    p: u32,
) -> Result<TruncatedSeries<PadicRing>, LogError> {
    let r = alphabet.len();
    if from.coords.len() != r || to.coords.len() != r {
        return Err(LogError::Shape(format!("endpoints must have {r} coordinates")));
    }
    let mut prec = i64::MAX;
    for c in from.coords.iter().chain(&to.coords) {
        let x = c.value();
        if x.p() != p {
            return Err(LogError::Coeff(crate::coeffring::CoeffError::PrimeMismatch(x.p(), p)));
        }
        if x.valuation() != 0 {
            return Err(LogError::Domain(format!(
                "coordinate {x} is not a unit; the formula needs good reduction"
            )));
        }
        prec = prec.min(x.precision());
    }
    let ring = PadicRing::new(p, prec)?;
    let lp = Padic::exact_zero(p);
    let one_minus_p = Padic::from_i64(1 - p as i64, p, prec);
    let mut acc = TruncatedSeries::one(ring.clone(), alphabet.clone(), cap);
    for i in 0..r {
        let a = log_ratio(from.coords[i].value(), to.coords[i].value(), &lp)?.mul(&one_minus_p);
        let mut terms = Vec::new();
        let mut ak = Padic::one(p, prec);
        for k in 0..=cap {
            let inv = Padic::from_rational(&Rational::new(BigInt::one(), factorial(k)), p, prec + vp_factorial(p, k));
            terms.push((Word(std::iter::repeat(i as u8).take(k).collect()), ak.mul(&inv)));
            ak = ak.mul(&a);
        }
        let f = TruncatedSeries::from_terms(ring.clone(), alphabet.clone(), cap, terms)?;
        acc = acc.concat_mul(&f)?;
    }
    Ok(acc)
}
