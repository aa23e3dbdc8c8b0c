//! Three-valued commutativity predicates for triples `(D1, D2, pi)`: a
//! derivative by `St(D1)` against an integral by `St(D2)`.
//!
//! Decisive answers come from the eta comparison whenever the integral is
//! computable, and otherwise from sufficient criteria that only look at the
//! two segments. `Unknown` is returned when neither applies.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{epsilon, eta, EtaVector};
use crate::operators::{derive, derive_multi, integrate, integrate_along, Side};
use crate::rep::RepParam;
use crate::segment::{Multisegment, Segment, STEP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Outcome {
    True,
    False,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Reason {
    /// The derivative by `D1` already vanishes on `pi`.
    EpsZero,
    EtaEqual,
    EtaDiffer,
    /// Same line, `a1 > a2` or `b1 > b2` (mirrored for the left version).
    EndpointDominance,
    DisjointSupport,
    /// `a(D2)` is not a point of `D1`.
    IntegralStartOutsideSupport,
    /// `b(D1)` is not a point of `D2`.
    DerivativeEndOutsideSupport,
    IntegralUnsupported,
    /// Multisegment version with no triple to check.
    Automatic,
    /// Multisegment version where every triple was decided `True`.
    AllTriplesCommute,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Eta { before: EtaVector, after: EtaVector },
    Criterion { d1: Segment, d2: Segment, criterion: Reason },
    Triple { i: usize, j: usize, d1: Segment, d2: Segment, pi: RepParam, reason: Reason },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleVerdict {
    pub outcome: Outcome,
    pub reason: Reason,
    pub witness: Option<Witness>,
}

impl TripleVerdict {
    fn new(outcome: Outcome, reason: Reason, witness: Option<Witness>) -> Self {
        TripleVerdict { outcome, reason, witness }
    }

    pub fn is_true(&self) -> bool {
        self.outcome == Outcome::True
    }

    pub fn is_false(&self) -> bool {
        self.outcome == Outcome::False
    }

    pub fn is_decisive(&self) -> bool {
        self.outcome != Outcome::Unknown
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self.outcome {
            Outcome::True => Some(true),
            Outcome::False => Some(false),
            Outcome::Unknown => None,
        }
    }
}

impl fmt::Display for TripleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} ({:?})", self.outcome, self.reason)
    }
}

fn same_grid(d1: &Segment, d2: &Segment) -> bool {
    d1.line() == d2.line() && (d1.a() - d2.a()).rem_euclid(STEP) == 0
}

/// Segment-only sufficient criteria for the right-derivative / left-integral
/// triple, in precedence order.
pub fn rdli_criterion(d1: &Segment, d2: &Segment) -> Option<Reason> {
    if same_grid(d1, d2) && (d1.a() > d2.a() || d1.b() > d2.b()) {
        return Some(Reason::EndpointDominance);
    }
    if d1.intersection(d2).is_none() {
        return Some(Reason::DisjointSupport);
    }
    if !d1.contains_point(d2.line(), d2.a()) {
        return Some(Reason::IntegralStartOutsideSupport);
    }
    if !d2.contains_point(d1.line(), d1.b()) {
        return Some(Reason::DerivativeEndOutsideSupport);
    }
    None
}

/// Mirror of [`rdli_criterion`] for the left-derivative / right-integral
/// triple, obtained through duals.
pub fn ldri_criterion(d1: &Segment, d2: &Segment) -> Option<Reason> {
    rdli_criterion(&d1.dual(), &d2.dual())
}

fn decide(d1: &Segment, d2: &Segment, pi: &RepParam, dside: Side) -> Result<TripleVerdict> {
    let before = eta(pi, d1, dside)?;
    if before.values[0] == 0 {
        return Ok(TripleVerdict::new(Outcome::False, Reason::EpsZero, None));
    }
    match integrate(pi, d2, dside.flip()) {
        Ok(up) => {
            let after = eta(&up, d1, dside)?;
            let (outcome, reason) =
                if after == before { (Outcome::True, Reason::EtaEqual) } else { (Outcome::False, Reason::EtaDiffer) };
            return Ok(TripleVerdict::new(outcome, reason, Some(Witness::Eta { before, after })));
        }
        Err(Error::UnsupportedDomain(_)) => {}
        Err(e) => return Err(e),
    }
    let criterion = match dside {
        Side::R => rdli_criterion(d1, d2),
        Side::L => ldri_criterion(d1, d2),
    };
    if let Some(c) = criterion {
        let w = Witness::Criterion { d1: d1.clone(), d2: d2.clone(), criterion: c };
        return Ok(TripleVerdict::new(Outcome::True, c, Some(w)));
    }
    Ok(TripleVerdict::new(Outcome::Unknown, Reason::IntegralUnsupported, None))
}

/// Right derivative by `d1` against left integral by `d2`.
pub fn comm_rdli(d1: &Segment, d2: &Segment, pi: &RepParam) -> Result<TripleVerdict> {
    decide(d1, d2, pi, Side::R)
}

/// Left derivative by `d1` against right integral by `d2`.
pub fn comm_ldri(d1: &Segment, d2: &Segment, pi: &RepParam) -> Result<TripleVerdict> {
    decide(d1, d2, pi, Side::L)
}

/// The dual formulation: compares `eta^L_{d2}` of `D_{d1}(I_{d2}(pi))` and of
/// `I_{d2}(pi)`. No sufficient criteria are applied.
pub fn comm_dual_rdli(d1: &Segment, d2: &Segment, pi: &RepParam) -> Result<TripleVerdict> {
    if epsilon(pi, d1, Side::R)? == 0 {
        return Ok(TripleVerdict::new(Outcome::False, Reason::EpsZero, None));
    }
    let up = match integrate(pi, d2, Side::L) {
        Ok(up) => up,
        Err(Error::UnsupportedDomain(_)) => {
            return Ok(TripleVerdict::new(Outcome::Unknown, Reason::IntegralUnsupported, None))
        }
        Err(e) => return Err(e),
    };
    let down = derive(&up, d1, Side::R)?;
    let before = eta(&up, d2, Side::L)?;
    let after = eta(&down, d2, Side::L)?;
    let (outcome, reason) =
        if after == before { (Outcome::True, Reason::EtaEqual) } else { (Outcome::False, Reason::EtaDiffer) };
    Ok(TripleVerdict::new(outcome, reason, Some(Witness::Eta { before, after })))
}

/// Strong commutativity of `(m, n, pi)`: every triple
/// `(D_i, D'_j, I^L_{n_{j-1}} D^R_{m_{i-1}}(pi))` along the canonical orders.
pub fn strong_multi(m: &Multisegment, n: &Multisegment, pi: &RepParam) -> Result<TripleVerdict> {
    let mo = m.canonical_order();
    let no = n.canonical_order();
    let mut chain = vec![pi.clone()];
    for (i, d) in mo.iter().enumerate() {
        let next = derive(&chain[i], d, Side::R)?;
        if next.is_zero() {
            return Err(Error::ZeroDerivativeChain(i + 1));
        }
        chain.push(next);
    }
    if mo.is_empty() || no.is_empty() {
        return Ok(TripleVerdict::new(Outcome::True, Reason::Automatic, None));
    }
    let mut unknown: Option<TripleVerdict> = None;
    for (i, di) in mo.iter().enumerate() {
        for (j, dj) in no.iter().enumerate() {
            let tau = match integrate_along(&chain[i], &no[..j], Side::L) {
                Ok(t) => t,
                Err(Error::UnsupportedDomain(_)) => {
                    // D_i(chain[i]) != 0 and integrals only raise epsilon, so
                    // the segment criteria still apply to the unknown tau.
                    if rdli_criterion(di, dj).is_none() {
                        unknown.get_or_insert(TripleVerdict::new(Outcome::Unknown, Reason::IntegralUnsupported, None));
                    }
                    continue;
                }
                Err(e) => return Err(e),
            };
            let v = comm_rdli(di, dj, &tau)?;
            let w = Witness::Triple { i: i + 1, j: j + 1, d1: di.clone(), d2: dj.clone(), pi: tau, reason: v.reason };
            match v.outcome {
                Outcome::False => return Ok(TripleVerdict::new(Outcome::False, v.reason, Some(w))),
                Outcome::Unknown => {
                    unknown.get_or_insert(TripleVerdict::new(Outcome::Unknown, v.reason, Some(w)));
                }
                Outcome::True => {}
            }
        }
    }
    Ok(unknown.unwrap_or(TripleVerdict::new(Outcome::True, Reason::AllTriplesCommute, None)))
}

/// `D^R_m(pi)` is nonzero.
pub fn removable(pi: &RepParam, m: &Multisegment) -> Result<bool> {
    Ok(!derive_multi(pi, m, Side::R)?.is_zero())
}
