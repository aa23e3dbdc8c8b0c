//! Relevant pairs: certificates `(m, n)` with
//! `D^R_m(nu^{1/2} pi) = D^L_n(pi')` and strongly commuting triples, their
//! duality transform, and generators for the standard worked examples.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::commutativity::{strong_multi, Outcome, TripleVerdict};
use crate::error::{Error, Result};
use crate::operators::{derive, derive_multi, Side};
use crate::rep::RepParam;
use crate::segment::{Line, Multisegment, Segment, STEP};

/// The twist `nu^{1/2}` in half-units.
pub const HALF: i32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub m: Multisegment,
    pub n: Multisegment,
    pub common: RepParam,
    pub verdict: TripleVerdict,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Search {
    pub certificates: Vec<Certificate>,
    /// Matching pairs whose commutativity could not be decided.
    pub unknown: Vec<Certificate>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchBound {
    /// Upper bound on `l_abs` of `m` and of `n`; defaults to `l_abs(pi)`.
    pub max_labs: Option<u32>,
}

/// Segments whose points all lie in the cuspidal support of `pi`.
fn window_segments(pi: &RepParam) -> Result<Vec<Segment>> {
    let mut pts = pi.csupp()?;
    pts.dedup();
    let mut out = Vec::new();
    for p in &pts {
        let mut b = p.exp;
        while pts.iter().any(|q| q.line == p.line && q.exp == b) {
            out.push(Segment::new(p.line.clone(), p.exp, b)?);
            b += STEP;
        }
    }
    out.sort();
    Ok(out)
}

/// Every multisegment `m` of segments in the support window with
/// `D^side_m(pi) != 0` and `l_abs(m) <= bound`, keyed by the result.
pub fn removable(pi: &RepParam, side: Side, bound: u32) -> Result<BTreeMap<RepParam, Vec<Multisegment>>> {
    let mut segs = window_segments(pi)?;
    // Build multisets in application order so a vanishing prefix prunes.
    if side == Side::L {
        segs.reverse();
    }
    let mut out: BTreeMap<RepParam, Vec<Multisegment>> = BTreeMap::new();
    let mut chosen = Vec::new();
    grow(pi, side, &segs, 0, bound, &mut chosen, &mut out)?;
    for v in out.values_mut() {
        v.sort();
    }
    Ok(out)
}

fn grow(
    cur: &RepParam,
    side: Side,
    segs: &[Segment],
    from: usize,
    budget: u32,
    chosen: &mut Vec<Segment>,
    out: &mut BTreeMap<RepParam, Vec<Multisegment>>,
) -> Result<()> {
    out.entry(cur.clone()).or_default().push(Multisegment::new(chosen.clone()));
    for k in from..segs.len() {
        let d = &segs[k];
        if d.l_abs() > budget {
            continue;
        }
        let next = derive(cur, d, side)?;
        if next.is_zero() {
            continue;
        }
        chosen.push(d.clone());
        grow(&next, side, segs, k, budget - d.l_abs(), chosen, out)?;
        chosen.pop();
    }
    Ok(())
}

fn check_sizes(pi: &RepParam, pi2: &RepParam) -> Result<()> {
    if pi.l_abs() != pi2.l_abs() + 1 {
        return Err(Error::SizeMismatch { pi: pi.l_abs(), pi2: pi2.l_abs() });
    }
    Ok(())
}

/// All certificates for `(pi, pi2)` within the bound.
pub fn find_certificates(pi: &RepParam, pi2: &RepParam, bound: SearchBound) -> Result<Search> {
    check_sizes(pi, pi2)?;
    let lim = bound.max_labs.unwrap_or(pi.l_abs());
    let shifted = pi.shift(HALF);
    let left = removable(&shifted, Side::R, lim)?;
    let right = removable(pi2, Side::L, lim)?;
    let mut pairs = Vec::new();
    for (common, ms) in &left {
        if let Some(ns) = right.get(common) {
            for m in ms {
                for n in ns {
                    pairs.push((m.clone(), n.clone(), common.clone()));
                }
            }
        }
    }
    let judged: Vec<Result<Certificate>> = pairs
        .into_par_iter()
        .map(|(m, n, common)| {
            let verdict = strong_multi(&m, &n, &shifted)?;
            Ok(Certificate { m, n, common, verdict })
        })
        .collect();
    let mut out = Search::default();
    for c in judged {
        let c = c?;
        match c.verdict.outcome {
            Outcome::True => out.certificates.push(c),
            Outcome::Unknown => out.unknown.push(c),
            Outcome::False => {}
        }
    }
    Ok(out)
}

/// Re-evaluates a certificate from scratch. Relevance itself has no size
/// condition, so none is imposed here.
pub fn verify_certificate(m: &Multisegment, n: &Multisegment, pi: &RepParam, pi2: &RepParam) -> Result<Certificate> {
    let shifted = pi.shift(HALF);
    let a = derive_multi(&shifted, m, Side::R)?;
    let b = derive_multi(pi2, n, Side::L)?;
    let verdict = if a.is_zero() || a != b {
        TripleVerdict { outcome: Outcome::False, reason: crate::commutativity::Reason::EpsZero, witness: None }
    } else {
        strong_multi(m, n, &shifted)?
    };
    Ok(Certificate { m: m.clone(), n: n.clone(), common: a, verdict })
}

/// Transports a certificate for `(pi, pi2)` to the pair `(pi2^v, pi^v)`:
/// `(m, n) -> (nu^{1/2} n^v, nu^{1/2} m^v)`. The result is re-verified.
pub fn dualize_certificate(c: &Certificate, pi: &RepParam, pi2: &RepParam) -> Result<Certificate> {
    let m2 = c.n.dual().shift(HALF);
    let n2 = c.m.dual().shift(HALF);
    let out = verify_certificate(&m2, &n2, &pi2.dual(), &pi.dual())?;
    if out.verdict.outcome != Outcome::True {
        return Err(Error::DualVerificationFailed(format!(
            "({m2}, {n2}) for ({}, {}): {}",
            pi2.dual(),
            pi.dual(),
            out.verdict
        )));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleCase {
    pub name: String,
    pub pi: RepParam,
    pub pi2: RepParam,
    pub m: Multisegment,
    pub n: Multisegment,
}

/// Trivial representations of `G_{n+1}` and `G_n`; expected certificate
/// `({[(n+1)/2]}, ∅)`.
pub fn trivial_example(line: &Line, n: i32) -> Result<ExampleCase> {
    if n < 0 {
        return Err(Error::OutOfRange(format!("n = {n} must be nonnegative")));
    }
    let pi = RepParam::make_zsegment(&Segment::new(line.clone(), -n, n)?);
    let pi2 = if n == 0 {
        RepParam::trivial()
    } else {
        RepParam::make_zsegment(&Segment::new(line.clone(), 1 - n, n - 1)?)
    };
    Ok(ExampleCase {
        name: format!("trivial({n})"),
        pi,
        pi2,
        m: Multisegment::singleton(Segment::point(line.clone(), n + 1)),
        n: Multisegment::empty(),
    })
}

/// `(St(d), St(d2))` with the certificate predicted by the case analysis on
/// `[A,B] = nu^{1/2} d` against `d2 = [a',b']`.
pub fn rankin_selberg_example(d: &Segment, d2: &Segment) -> Result<ExampleCase> {
    if d.l_abs() != d2.l_abs() + 1 {
        return Err(Error::SizeMismatch { pi: d.l_abs(), pi2: d2.l_abs() });
    }
    let pi = RepParam::Generic(Multisegment::singleton(d.clone()));
    let pi2 = RepParam::Generic(Multisegment::singleton(d2.clone()));
    let sd = d.shift(HALF);
    let (a, b) = (sd.a(), sd.b());
    let (a2, b2) = (d2.a(), d2.b());
    let same = sd.line() == d2.line() && (a - a2).rem_euclid(STEP) == 0;
    let whole = |case: &str| (case.to_string(), Multisegment::singleton(sd.clone()), Multisegment::singleton(d2.clone()));
    let (case, m, n) = if sd.line() != d2.line() {
        whole("1")
    } else if !same {
        whole("2c")
    } else if a2 < a {
        whole("2a")
    } else if b2 < b {
        whole("2b")
    } else if a2 > b {
        whole("2c")
    } else {
        let line = d2.line();
        let m: Multisegment = Segment::try_new(line, a, a2 - STEP).into_iter().collect();
        let n: Multisegment = Segment::try_new(line, b + STEP, b2).into_iter().collect();
        ("2d".to_string(), m, n)
    };
    Ok(ExampleCase { name: format!("rankin_selberg case {case}: {d} vs {d2}"), pi, pi2, m, n })
}

/// `pi = L([-n/2, c-1], [c, n/2])`, `pi' = St([-(n-1)/2, (n-1)/2])` with the
/// certificate `({[c+1/2, (n+1)/2]}, {[c+1/2, (n-1)/2]})`. `c` is given in
/// half-units and must satisfy `-n <= c <= n`, `c = n mod 2`.
pub fn qa_example(line: &Line, n: i32, c: i32) -> Result<ExampleCase> {
    if n < 1 || c < -n || c > n || (n - c).rem_euclid(STEP) != 0 {
        return Err(Error::OutOfRange(format!("need n >= 1, -n <= c <= n, c = n mod 2 (half-units); got n = {n}, c = {c}")));
    }
    let segs: Vec<Segment> = [Segment::try_new(line, -n, c - STEP), Segment::try_new(line, c, n)].into_iter().flatten().collect();
    let pi = RepParam::from_langlands(Multisegment::new(segs))?;
    let pi2 = RepParam::Generic(Multisegment::singleton(Segment::new(line.clone(), 1 - n, n - 1)?));
    Ok(ExampleCase {
        name: format!("qa_example(n = {n}, c = {})", crate::segment::fmt_half(c)),
        pi,
        pi2,
        m: Segment::try_new(line, c + HALF, n + HALF).into_iter().collect(),
        n: Segment::try_new(line, c + HALF, n - HALF).into_iter().collect(),
    })
}
