//! Checks of the GRT₁ relations on a series φ(X, Y) and the linearized
//! solver for the graded dimensions of its Lie algebra.
//!
//! Conventions: the 2-cycle is φ(Y,X)·φ(X,Y) = 1; the 3-cycle is
//! φ(Z,X)·φ(Y,Z)·φ(X,Y) = 1 with Z = −X−Y; the pentagon is
//! φ(x₂₃,x₃₄)·φ(x₄₀,x₀₁)·φ(x₁₂,x₂₃)·φ(x₃₄,x₄₀)·φ(x₀₁,x₁₂) = 1 in U(H₅).

mod solver;

use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::braidlie::{BraidElement, BraidError, SmashAlgebra};
use crate::coeffring::Ring;
use crate::freelie::LieError;
use crate::ncseries::{Alphabet, SeriesError, ShuffleReport, TruncatedSeries, Word};
use crate::par::Exec;

pub use solver::{
    grt1_generator, grt1_graded_dimension, linearized_pentagon_lie, linearized_pentagon_smash, GradedSolution,
};

pub const TWO_CYCLE_FORM: &str = "phi(Y,X)*phi(X,Y) = 1";
pub const THREE_CYCLE_FORM: &str = "phi(Z,X)*phi(Y,Z)*phi(X,Y) = 1 with Z = -X-Y";
pub const PENTAGON_ORDER: &str = "phi(x23,x34)*phi(x40,x01)*phi(x12,x23)*phi(x34,x40)*phi(x01,x12) = 1";

/// The five argument pairs of the pentagon, in product order.
pub const PENTAGON_PAIRS: [((usize, usize), (usize, usize)); 5] =
    [((2, 3), (3, 4)), ((4, 0), (0, 1)), ((1, 2), (2, 3)), ((3, 4), (4, 0)), ((0, 1), (1, 2))];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrtError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    GroupLike,
    TwoCycle,
    ThreeCycle,
    Pentagon,
}

impl Relation {
    pub const ALL: [Relation; 4] = [Relation::GroupLike, Relation::TwoCycle, Relation::ThreeCycle, Relation::Pentagon];

    pub fn name(self) -> &'static str {
        match self {
            Relation::GroupLike => "group_like",
            Relation::TwoCycle => "two_cycle",
            Relation::ThreeCycle => "three_cycle",
            Relation::Pentagon => "pentagon",
        }
    }

    pub fn parse(s: &str) -> Option<Relation> {
        match s.trim().replace('-', "_").as_str() {
            "group_like" | "grouplike" => Some(Relation::GroupLike),
            "two_cycle" | "2cycle" | "2_cycle" => Some(Relation::TwoCycle),
            "three_cycle" | "3cycle" | "3_cycle" => Some(Relation::ThreeCycle),
            "pentagon" | "5cycle" | "5_cycle" => Some(Relation::Pentagon),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RelationStatus {
    Pass,
    Defect { degree: usize, defect: Value },
}

/// Result of one relation check. A defect is the lowest-degree nonzero
/// component of (left-hand side − 1).
#[derive(Clone, Debug, PartialEq)]
pub struct RelationReport {
    pub relation: Relation,
    pub cap: usize,
    pub status: RelationStatus,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.status == RelationStatus::Pass
    }

    pub fn first_defect_degree(&self) -> Option<usize> {
        match self.status {
            RelationStatus::Pass => None,
            RelationStatus::Defect { degree, .. } => Some(degree),
        }
    }

    pub fn to_json(&self) -> Value {
        let status = match &self.status {
            RelationStatus::Pass => json!("pass"),
            RelationStatus::Defect { degree, defect } => json!({"first_defect_degree": degree, "defect": defect}),
        };
        json!({"relation": self.relation.name(), "cap": self.cap, "status": status})
    }
}

fn require_two_letters<R: Ring>(phi: &TruncatedSeries<R>) -> Result<(), GrtError> {
    if phi.alphabet().len() != 2 {
        return Err(GrtError::Domain(format!(
            "candidate must be over two letters, found {}",
            phi.alphabet().len()
        )));
    }
    Ok(())
}

pub fn xy_alphabet() -> Arc<Alphabet> {
    Alphabet::new(&["X", "Y"]).expect("valid alphabet")
}

fn letter<R: Ring>(phi: &TruncatedSeries<R>, l: u8) -> TruncatedSeries<R> {
    TruncatedSeries::letter(phi.ring().clone(), phi.alphabet().clone(), phi.cap(), l)
}

/// φ(Y,X)·φ(X,Y)
pub fn two_cycle_lhs<R: Ring>(phi: &TruncatedSeries<R>) -> Result<TruncatedSeries<R>, GrtError> {
    require_two_letters(phi)?;
    let swapped = phi.substitute(&[letter(phi, 1), letter(phi, 0)])?;
    Ok(swapped.concat_mul(phi)?)
}

/// φ(Z,X)·φ(Y,Z)·φ(X,Y) with Z = −X−Y
pub fn three_cycle_lhs<R: Ring>(phi: &TruncatedSeries<R>) -> Result<TruncatedSeries<R>, GrtError> {
    require_two_letters(phi)?;
    let (x, y) = (letter(phi, 0), letter(phi, 1));
    let z = x.add(&y)?.neg();
    let a = phi.substitute(&[z.clone(), x])?;
    let b = phi.substitute(&[y, z])?;
    Ok(a.concat_mul(&b)?.concat_mul(phi)?)
}

/// The five-factor pentagon product in U(H₅) at φ's cap.
pub fn pentagon_lhs<R: Ring>(phi: &TruncatedSeries<R>) -> Result<BraidElement<R>, GrtError> {
    pentagon_lhs_with(Exec::default(), phi)
}

pub fn pentagon_lhs_with<R: Ring>(exec: Exec, phi: &TruncatedSeries<R>) -> Result<BraidElement<R>, GrtError> {
    require_two_letters(phi)?;
    let alg = SmashAlgebra::get(5, phi.cap())?;
    let ring = phi.ring().clone();
    let inj = |(i, j): (usize, usize)| BraidElement::inject(ring.clone(), alg.clone(), i, j);
    let mut acc = BraidElement::one(ring.clone(), alg.clone());
    for (u, v) in PENTAGON_PAIRS {
        let f = phi.substitute_with(exec, &[inj(u)?, inj(v)?])?;
        acc = acc.smash_mul_with(exec, &f)?;
    }
    Ok(acc)
}

fn series_status<R: Ring>(lhs: &TruncatedSeries<R>) -> RelationStatus {
    let one = TruncatedSeries::one(lhs.ring().clone(), lhs.alphabet().clone(), lhs.cap());
    let defect = lhs.sub(&one).expect("same shape");
    match defect.min_degree() {
        None => RelationStatus::Pass,
        Some(d) => RelationStatus::Defect { degree: d, defect: defect.degree_part(d).to_json() },
    }
}

fn braid_status<R: Ring>(lhs: &BraidElement<R>) -> RelationStatus {
    let one = BraidElement::one(lhs.ring().clone(), lhs.algebra().clone());
    let defect = lhs.sub(&one).expect("same algebra");
    match defect.min_degree() {
        None => RelationStatus::Pass,
        Some(d) => RelationStatus::Defect { degree: d, defect: defect.degree_part(d).to_json() },
    }
}

pub fn check_two_cycle<R: Ring>(phi: &TruncatedSeries<R>) -> Result<RelationReport, GrtError> {
    let status = series_status(&two_cycle_lhs(phi)?);
    Ok(RelationReport { relation: Relation::TwoCycle, cap: phi.cap(), status })
}

pub fn check_three_cycle<R: Ring>(phi: &TruncatedSeries<R>) -> Result<RelationReport, GrtError> {
    let status = series_status(&three_cycle_lhs(phi)?);
    Ok(RelationReport { relation: Relation::ThreeCycle, cap: phi.cap(), status })
}

pub fn check_pentagon<R: Ring>(phi: &TruncatedSeries<R>) -> Result<RelationReport, GrtError> {
    let status = braid_status(&pentagon_lhs(phi)?);
    Ok(RelationReport { relation: Relation::Pentagon, cap: phi.cap(), status })
}

pub fn check_group_like<R: Ring>(phi: &TruncatedSeries<R>) -> RelationReport {
    let ring = phi.ring();
    let word = |w: &Word| w.iter().map(|&l| phi.alphabet().name(l).to_string()).collect::<Vec<_>>();
    let status = match phi.is_group_like() {
        ShuffleReport::Pass => RelationStatus::Pass,
        ShuffleReport::Fail { u, v, lhs, rhs } => RelationStatus::Defect {
            degree: u.len() + v.len(),
            defect: json!({"u": word(&u), "v": word(&v), "lhs": ring.encode(&lhs), "rhs": ring.encode(&rhs)}),
        },
    };
    RelationReport { relation: Relation::GroupLike, cap: phi.cap(), status }
}

/// Aggregate of the selected checks, plus the degree-one coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct FullReport {
    pub cap: usize,
    pub reports: Vec<RelationReport>,
    pub degree_one: [Value; 2],
    pub degree_one_vanishes: bool,
}

impl FullReport {
    /// Every selected relation holds to the cap.
    pub fn passed(&self) -> bool {
        self.reports.iter().all(RelationReport::passed)
    }

    /// Relations hold and the degree-one part vanishes.
    pub fn member(&self) -> bool {
        self.passed() && self.degree_one_vanishes
    }

    pub fn report(&self, r: Relation) -> Option<&RelationReport> {
        self.reports.iter().find(|x| x.relation == r)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "cap": self.cap,
            "conventions": {
                "two_cycle": TWO_CYCLE_FORM,
                "three_cycle": THREE_CYCLE_FORM,
                "pentagon": PENTAGON_ORDER,
            },
            "relations": self.reports.iter().map(RelationReport::to_json).collect::<Vec<_>>(),
            "degree_one": {"X": self.degree_one[0], "Y": self.degree_one[1], "vanishes": self.degree_one_vanishes},
            "passed": self.passed(),
            "member": self.member(),
        })
    }
}

pub fn full_report<R: Ring>(phi: &TruncatedSeries<R>, relations: &[Relation]) -> Result<FullReport, GrtError> {
    require_two_letters(phi)?;
    let mut reports = Vec::new();
    for r in Relation::ALL {
        if !relations.contains(&r) {
            continue;
        }
        reports.push(match r {
            Relation::GroupLike => check_group_like(phi),
            Relation::TwoCycle => check_two_cycle(phi)?,
            Relation::ThreeCycle => check_three_cycle(phi)?,
            Relation::Pentagon => check_pentagon(phi)?,
        });
    }
    let ring = phi.ring();
    let (cx, cy) = if phi.cap() >= 1 {
        (phi.get(&Word::letter(0)), phi.get(&Word::letter(1)))
    } else {
        (ring.zero(), ring.zero())
    };
    let vanish = ring.is_zero(&cx) && ring.is_zero(&cy);
    Ok(FullReport {
        cap: phi.cap(),
        reports,
        degree_one: [ring.encode(&cx), ring.encode(&cy)],
        degree_one_vanishes: vanish,
    })
}
