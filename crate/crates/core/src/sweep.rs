//! Exhaustive property sweeps over a window of parameters on one line.
//!
//! Work fans out over parameters with rayon; per-parameter tallies are
//! merged in universe order, so reports do not depend on the thread count.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::branching::{dualize_certificate, find_certificates, SearchBound, HALF};
use crate::commutativity::{comm_dual_rdli, comm_ldri, comm_rdli, ldri_criterion, rdli_criterion, Outcome};
use crate::error::{Error, Result};
use crate::invariants::{eta, hd, level, mx, Cmp};
use crate::jacquet::{derivative_witness, factors, jacquet_layers};
use crate::operators::{derive, derive_along, derive_multi, integrate, Side};
use crate::rep::RepParam;
use crate::segment::{Line, Multisegment, Segment, STEP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    InverseLaws,
    DualSwitch,
    OrderingIndependence,
    DualCombinatorialEquivalence,
    EtaMonotonicity,
    MxRemoval,
    Saturation,
    LevelPreserving,
    UnionIntersection,
    DualTriple,
    RelevantDuality,
    HdFixedPoint,
    JacquetAudit,
    CriteriaSoundness,
    StrongCommutation,
}

impl Property {
    pub const ALL: [Property; 15] = [
        Property::InverseLaws,
        Property::DualSwitch,
        Property::OrderingIndependence,
        Property::DualCombinatorialEquivalence,
        Property::EtaMonotonicity,
        Property::MxRemoval,
        Property::Saturation,
        Property::LevelPreserving,
        Property::UnionIntersection,
        Property::DualTriple,
        Property::RelevantDuality,
        Property::HdFixedPoint,
        Property::JacquetAudit,
        Property::CriteriaSoundness,
        Property::StrongCommutation,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Property::InverseLaws => "inverse-laws",
            Property::DualSwitch => "dual-switch",
            Property::OrderingIndependence => "ordering-independence",
            Property::DualCombinatorialEquivalence => "dual-combinatorial-equivalence",
            Property::EtaMonotonicity => "eta-monotonicity",
            Property::MxRemoval => "mx-removal",
            Property::Saturation => "saturation",
            Property::LevelPreserving => "level-preserving",
            Property::UnionIntersection => "union-intersection",
            Property::DualTriple => "dual-triple",
            Property::RelevantDuality => "relevant-duality",
            Property::HdFixedPoint => "hd-fixed-point",
            Property::JacquetAudit => "jacquet-audit",
            Property::CriteriaSoundness => "criteria-soundness",
            Property::StrongCommutation => "strong-commutation",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Property {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.id() == s)
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("unknown property {s:?}") })
    }
}

impl Serialize for Property {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepConfig {
    /// Window `[lo, hi]` in half-units; the grid starts at `lo`.
    pub lo: i32,
    pub hi: i32,
    pub max_labs: u32,
    pub generic: bool,
    pub zsegment: bool,
    pub properties: Vec<Property>,
    /// Worker threads; 0 lets rayon decide.
    pub threads: usize,
    /// Counterexamples kept per property.
    pub max_counterexamples: usize,
    /// `l_abs` cap for the expensive pairwise properties.
    pub small_labs: u32,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            lo: 0,
            hi: 10,
            max_labs: 6,
            generic: true,
            zsegment: true,
            properties: Property::ALL.to_vec(),
            threads: 0,
            max_counterexamples: 5,
            small_labs: 3,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_labs < 1 {
            return Err(Error::OutOfRange("max l_abs must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: Option<Property>,
    pub checked: u64,
    pub unknown: u64,
    pub violations: u64,
    pub counterexamples: Vec<String>,
}

impl PropertyReport {
    fn ok(&mut self) {
        self.checked += 1;
    }

    fn unknown(&mut self) {
        self.checked += 1;
        self.unknown += 1;
    }

    fn fail(&mut self, msg: String) {
        self.checked += 1;
        self.violations += 1;
        self.counterexamples.push(msg);
    }

    fn expect(&mut self, holds: bool, msg: impl FnOnce() -> String) {
        if holds {
            self.ok()
        } else {
            self.fail(msg())
        }
    }

    fn absorb(&mut self, other: PropertyReport, cap: usize) {
        self.checked += other.checked;
        self.unknown += other.unknown;
        self.violations += other.violations;
        let room = cap.saturating_sub(self.counterexamples.len());
        self.counterexamples.extend(other.counterexamples.into_iter().take(room));
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub lo: i32,
    pub hi: i32,
    pub max_labs: u32,
    pub instances: usize,
    pub properties: Vec<PropertyReport>,
}

impl SweepReport {
    pub fn violations(&self) -> u64 {
        self.properties.iter().map(|p| p.violations).sum()
    }

    pub fn is_clean(&self) -> bool {
        self.violations() == 0
    }

    pub fn get(&self, p: Property) -> Option<&PropertyReport> {
        self.properties.iter().find(|r| r.property == Some(p))
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "window [{}, {}], max l_abs {}, {} parameters",
            crate::segment::fmt_half(self.lo),
            crate::segment::fmt_half(self.hi),
            self.max_labs,
            self.instances
        )?;
        for p in &self.properties {
            let name = p.property.map_or("?", Property::id);
            writeln!(f, "{name:<32} checked {:>9}  unknown {:>7}  violations {:>5}", p.checked, p.unknown, p.violations)?;
            for c in &p.counterexamples {
                writeln!(f, "    {c}")?;
            }
        }
        Ok(())
    }
}

/// The parameters and segments a sweep ranges over.
#[derive(Clone, Debug)]
pub struct Universe {
    pub line: Line,
    pub reps: Vec<RepParam>,
    /// Segments inside the window.
    pub window: Vec<Segment>,
    /// Segments in the window widened by one step on each side.
    pub tests: Vec<Segment>,
}

fn segments_between(line: &Line, lo: i32, hi: i32) -> Vec<Segment> {
    let mut out = Vec::new();
    let mut a = lo;
    while a <= hi {
        let mut b = a;
        while b <= hi {
            out.push(Segment::new(line.clone(), a, b).expect("a <= b on the grid"));
            b += STEP;
        }
        a += STEP;
    }
    out
}

/// Pairwise unlinked multisets of `segs` with `l_abs <= budget`.
fn unlinked_multisets(segs: &[Segment], budget: u32) -> Vec<Multisegment> {
    fn go(segs: &[Segment], from: usize, budget: u32, cur: &mut Vec<Segment>, out: &mut Vec<Multisegment>) {
        out.push(Multisegment::new(cur.clone()));
        for k in from..segs.len() {
            let s = &segs[k];
            if s.l_abs() > budget || cur.iter().any(|t| t.is_linked(s)) {
                continue;
            }
            cur.push(s.clone());
            go(segs, k, budget - s.l_abs(), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(segs, 0, budget, &mut Vec::new(), &mut out);
    out
}

pub fn universe(cfg: &SweepConfig) -> Universe {
    let line = Line::new("r");
    let window = segments_between(&line, cfg.lo, cfg.hi);
    let tests = if cfg.lo <= cfg.hi { segments_between(&line, cfg.lo - STEP, cfg.hi + STEP) } else { Vec::new() };
    let mut reps = Vec::new();
    if cfg.lo <= cfg.hi {
        if cfg.generic {
            reps.extend(unlinked_multisets(&window, cfg.max_labs).into_iter().map(RepParam::Generic));
        }
        if cfg.zsegment {
            reps.extend(
                window.iter().filter(|d| d.len() >= 2 && d.l_abs() <= cfg.max_labs).map(RepParam::make_zsegment),
            );
        }
    }
    Universe { line, reps, window, tests }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let u = universe(cfg);
    let work = || {
        cfg.properties
            .iter()
            .map(|&p| {
                let parts: Vec<PropertyReport> = u
                    .reps
                    .par_iter()
                    .map(|pi| {
                        let mut t = PropertyReport::default();
                        if let Err(e) = check(p, cfg, &u, pi, &mut t) {
                            t.fail(format!("{pi}: unexpected error: {e}"));
                        }
                        t
                    })
                    .collect();
                let mut total = PropertyReport { property: Some(p), ..Default::default() };
                for part in parts {
                    total.absorb(part, cfg.max_counterexamples);
                }
                total
            })
            .collect::<Vec<_>>()
    };
    let properties = if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::OutOfRange(e.to_string()))?
            .install(work)
    } else {
        work()
    };
    Ok(SweepReport { lo: cfg.lo, hi: cfg.hi, max_labs: cfg.max_labs, instances: u.reps.len(), properties })
}

fn check(p: Property, cfg: &SweepConfig, u: &Universe, pi: &RepParam, t: &mut PropertyReport) -> Result<()> {
    match p {
        Property::InverseLaws => inverse_laws(u, pi, t),
        Property::DualSwitch => dual_switch(u, pi, t),
        Property::OrderingIndependence => ordering_independence(u, pi, t),
        Property::DualCombinatorialEquivalence => dual_equivalence(u, pi, t),
        Property::EtaMonotonicity => eta_monotonicity(u, pi, t),
        Property::MxRemoval => mx_removal(u, pi, t),
        Property::Saturation => saturation(u, pi, t),
        Property::LevelPreserving => level_preserving(u, pi, t),
        Property::UnionIntersection if pi.l_abs() <= cfg.small_labs => union_intersection(u, pi, t),
        Property::UnionIntersection => Ok(()),
        Property::DualTriple => dual_triple(u, pi, t),
        Property::RelevantDuality if pi.l_abs() <= cfg.small_labs => relevant_duality(u, pi, t),
        Property::RelevantDuality => Ok(()),
        Property::HdFixedPoint => hd_fixed_point(pi, t),
        Property::JacquetAudit => jacquet_audit(u, pi, t),
        Property::CriteriaSoundness => criteria_soundness(u, pi, t),
        Property::StrongCommutation => strong_commutation(u, pi, t),
    }
}

/// `Ok(None)` for an unsupported integral.
fn try_integrate(pi: &RepParam, d: &Segment, side: Side) -> Result<Option<RepParam>> {
    match integrate(pi, d, side) {
        Ok(x) => Ok(Some(x)),
        Err(Error::UnsupportedDomain(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Test segments with a nonzero derivative on `pi`.
fn removable_segments<'a>(u: &'a Universe, pi: &RepParam, side: Side) -> Result<Vec<&'a Segment>> {
    let mut out = Vec::new();
    for d in &u.tests {
        if !derive(pi, d, side)?.is_zero() {
            out.push(d);
        }
    }
    Ok(out)
}

fn inverse_laws(u: &Universe, pi: &RepParam, t: &mut PropertyReport) -> Result<()> {
    for d in &u.tests {
        for side in [Side::R, Side::L] {
            let down = derive(pi, d, side)?;
            if !down.is_zero() {
                match try_integrate(&down, d, side)? {
                    Some(back) => t.expect(back == *pi, || format!("I^{side}_{d}(D^{side}_{d}({pi})) = {back}")),
                    None => t.unknown(),
                }
            }
            if let Some(up) = try_integrate(pi, d, side)? {
                let back = derive(&up, d, side)?;
                t.expect(back == *pi, || format!("D^{side}_{d}(I^{side}_{d}({pi})) = {back}"));
            }
        }
    }
    Ok(())
}

fn dual_switch(u: &Universe, pi: &RepParam, t: &mut PropertyReport) -> Result<()> {
    let pv = pi.dual();
    for d in &u.tests {
        for side in [Side::R, Side::L] {
            let a = derive(pi, d, side)?.dual();
            let b = derive(&pv, &d.dual(), side.flip())?;
            t.expect(a == b, || format!("D^{side}_{d}({pi})^v = {a} but D^{}_{}({pv}) = {b}", side.flip(), d.dual()));
            let a = try_integrate(pi, d, side)?.map(|x| x.dual());
            let b = try_integrate(&pv, &d.dual(), side.flip())?;
            match (a, b) {
                (None, None) => t.unknown(),
                (a, b) => t.expect(a == b, || {
                    format!("I^{side}_{d}({pi})^v = {a:?} but I^{}_{}({pv}) = {b:?}", side.flip(), d.dual())
                }),
            }
        }
    }
    Ok(())
}

/// Multisets of at most three window segments whose points fit inside the
/// support of `pi`; any other multiset has vanishing derivative.
fn small_submultisets(u: &Universe, pi: &RepParam) -> Result<Vec<Multisegment>> {
    let supp = pi.csupp()?;
    let fits = |m: &[Segment]| {
        let mut pts: Vec<_> = m.iter().flat_map(|s| s.points()).collect();
        pts.sort();
        let mut it = supp.iter().peekable();
        pts.iter().all(|p| {
            while it.peek().is_some_and(|q| *q < p) {
                it.next();
            }
            it.next() == Some(p)
        })
    };
    let segs: Vec<&Segment> = u.window.iter().filter(|s| fits(&[(*s).clone()])).collect();
    let mut out = Vec::new();
    let n = segs.len();
    for i in 0..n {
        out.push(vec![segs[i].clone()]);
        for j in i..n {
            out.push(vec![segs[i].clone(), segs[j].clone()]);
            for k in j..n {
                out.push(vec![segs[i].clone(), segs[j].clone(), segs[k].clone()]);
            }
        }
    }
    Ok(out.into_iter().filter(|m| fits(m)).map(Multisegment::new).collect())
}

fn ordering_independence(u: &Universe, pi: &RepParam, t: &mut PropertyReport) -> Result<()> {
    for m in small_submultisets(u, pi)? {
        let orders = m.admissible_orders();
        for side in [Side::R, Side::L] {
            let reference = derive_multi(pi, &m, side)?;
            for o in &orders {
                let o: Vec<Segment> = match side {
                    Side::R => o.clone(),
                    Side::L => o.iter().rev().cloned().collect(),
                };
                let got = derive_along(pi, &o, side)?;
                t.expect(got == reference, || {
                    let o: Vec<String> = o.iter().map(ToString::to_string).collect();
                    format!("D^{side} of {pi} along ({}) = {got}, canonical order gives {reference}", o.join(", "))
                });
            }
        }
    }
    Ok(())
}

fn dual_equivalence(u: &Universe, pi: &RepParam, t: &mut PropertyReport) -> Result<()> {
    for d1 in removable_segments(u, pi, Side::R)? {
        for d2 in &u.tests {
            let a = comm_rdli(d1, d2, pi)?;
            let b = comm_dual_rdli(d1, d2, pi)?;
            match (a.as_bool(), b.as_bool()) {
                (Some(x), Some(y)) => t.expect(x == y, || format!("({d1}, {d2}, {pi}): combinatorial {a}, dual {b}")),
                _ => t.unknown(),
            }
        }
    }
    Ok(())
}

fn eta_monotonicity(u: &Universe, pi: &RepParam, t: &mut PropertyReport) -> Result<()> {
    for side in [Side::R, Side::L] {
        let mut nonzero = Vec::new();
        for d in &u.tests {
            let v = eta(pi, d, side)?;
            if !v.is_zero() {
                nonzero.push(v);
            }
        }
        for d2 in &u.tests {
            let Some(up) = try_integrate(pi, d2, side.flip())? else {
                t.unknown();
                continue;
            };
            for before in &nonzero {
                let after = eta(&up, &before.base, side)?;
                t.expect(before.compare(&after, Cmp::Le)?, || {
                    format!("eta^{side}_{}: {before} on {pi} but {after} on I^{}_{d2} = {up}", before.base, side.flip())
                });
            }
        }
    }
    Ok(())
}

fn mx_removal(u: &Universe, pi: &RepParam, t: &mut PropertyReport) -> Result<()> {
    for d in &u.tests {
        for side in [Side::R, Side::L] {
            let q = mx(pi, d, side)?;
            let out = derive_multi(pi, &q, side)?;
            t.expect(!out.is_zero(), || format!("D^{side}_{q}({pi}) vanishes for mx along {d}"));
        }
    }
    Ok(())
}

fn saturation(u: &Universe, pi: &RepParam, t: &mut PropertyReport) -> Result<()> {
    let removable = removable_segments(u, pi, Side::R)?;
    for &d1 in &removable {
        for d2 in &u.tests {
            if !comm_rdli(d1, d2, pi)?.is_true() {
                continue;
            }
            // Subsegments sharing the right end: the containment the
            // saturation arguments use; the opposite direction fails (see the
            // `saturation_direction` test in `commutativity`).
            for &dp in removable.iter().filter(|dp| **dp != d1 && dp.b() == d1.b() && d1.contains(dp)) {
                let v = comm_rdli(dp, d2, pi)?;
                match v.outcome {
                    Outcome::True => t.ok(),
                    Outcome::Unknown => t.unknown(),
                    Outcome::False => t.fail(format!("({d1}, {d2}, {pi}) commutes but ({dp}, {d2}, {pi}) is {v}")),
                }
            }
        }
    }
    Ok(())
}

fn level_preserving(u: &Universe, pi: &RepParam, t: &mut PropertyReport) -> Result<()> {
    let lev = level(pi)?;
    let removable = removable_segments(u, pi, Side::R)?;
    for d in &u.tests {
        let Some(up) = try_integrate(pi, d, Side::L)? else { continue };
        if level(&up)? != lev {
            continue;
        }
        for &dp in &removable {
            let v = comm_rdli(dp, d, pi)?;
            t.expect(v.is_true(), || format!("lev(I^L_{d}({pi})) = lev = {lev} but ({dp}, {d}, {pi}) is {v}"));
        }
    }
    Ok(())
}

fn union_intersection(u: &Universe, pi: &RepParam, t: &mut PropertyReport) -> Result<()> {
    let removable = removable_segments(u, pi, Side::R)?;
    for d1p in &u.window {
        let Some(up1) = try_integrate(pi, d1p, Side::L)? else { continue };
        for d2p in u.window.iter().filter(|s| s.is_linked(d1p)) {
            let Some(up12) = try_integrate(&up1, d2p, Side::L)? else { continue };
            let un = d1p.union(d2p)?;
            let cap = d1p.intersection(d2p);
            let Some(up_cap) = (match &cap {
                Some(c) => try_integrate(pi, c, Side::L)?,
                None => Some(pi.clone()),
            }) else {
                continue;
            };
            let Some(up_un) = try_integrate(pi, &un, Side::L)? else { continue };
            let Some(up_un_cap) = try_integrate(&up_cap, &un, Side::L)? else { continue };
            if up_un_cap != up12 {
                continue;
            }
            for &d in &removable {
                if !comm_rdli(d, d1p, pi)?.is_true() || !comm_rdli(d, d2p, &up1)?.is_true() {
                    continue;
                }
                let mut conclude = |d2: &Segment, tau: &RepParam| -> Result<()> {
                    let v = comm_rdli(d, d2, tau)?;
                    match v.outcome {
                        Outcome::True => t.ok(),
                        Outcome::Unknown => t.unknown(),
                        Outcome::False => t.fail(format!(
                            "premises ({d}, {d1p}, {pi}) and ({d}, {d2p}, {up1}) commute but ({d}, {d2}, {tau}) is {v}"
                        )),
                    }
                    Ok(())
                };
                conclude(&un, pi)?;
                if let Some(c) = &cap {
                    conclude(c, &up_un)?;
                    conclude(c, pi)?;
                    conclude(&un, &up_cap)?;
                }
            }
        }
    }
    Ok(())
}

fn dual_triple(u: &Universe, pi: &RepParam, t: &mut PropertyReport) -> Result<()> {
    let pv = pi.dual();
    for d1 in &u.tests {
        for d2 in &u.tests {
            let a = comm_rdli(d1, d2, pi)?;
            if !a.is_decisive() {
                t.unknown();
                continue;
            }
            let b = comm_ldri(&d1.dual(), &d2.dual(), &pv)?;
            t.expect(a.outcome == b.outcome, || {
                format!("({d1}, {d2}, {pi}) is {a} but ({}, {}, {pv}) is {b}", d1.dual(), d2.dual())
            });
        }
    }
    Ok(())
}

fn relevant_duality(u: &Universe, pi: &RepParam, t: &mut PropertyReport) -> Result<()> {
    let Some(size) = pi.l_abs().checked_sub(1) else { return Ok(()) };
    let mut partners: Vec<RepParam> = Vec::new();
    for q in u.reps.iter().filter(|q| q.l_abs() == size) {
        partners.extend([q.clone(), q.shift(HALF), q.shift(-HALF)]);
    }
    partners.sort();
    partners.dedup();
    for pi2 in &partners {
        let found = find_certificates(pi, pi2, SearchBound::default())?;
        for _ in &found.unknown {
            t.unknown();
        }
        for c in &found.certificates {
            match dualize_certificate(c, pi, pi2) {
                Ok(_) => t.ok(),
                Err(e) => t.fail(format!("certificate ({}, {}) for ({pi}, {pi2}): {e}", c.m, c.n)),
            }
        }
    }
    Ok(())
}

fn hd_fixed_point(pi: &RepParam, t: &mut PropertyReport) -> Result<()> {
    let got = hd(pi)?;
    let want = match (pi, pi.as_zsegment()) {
        (RepParam::Generic(m), _) => m.clone(),
        (_, Some(d)) => Multisegment::singleton(Segment::point(d.line().clone(), d.b())),
        _ => return Ok(()),
    };
    t.expect(got == want, || format!("hd({pi}) = {got}, expected {want}"));
    Ok(())
}

fn jacquet_audit(u: &Universe, pi: &RepParam, t: &mut PropertyReport) -> Result<()> {
    let f = factors(pi)?;
    for k in 0..=pi.l_abs() {
        let layers = jacquet_layers(&f, k)?;
        for i in 0..layers.len() {
            for j in i + 1..layers.len() {
                let bad = layers[i].index.geq(&layers[j].index)?;
                t.expect(!bad, || format!("{pi}, k = {k}: layer {i} >= layer {j}"));
            }
        }
    }
    if !pi.is_generic() {
        return Ok(());
    }
    for d in &u.tests {
        let tau = derive(pi, d, Side::R)?;
        if tau.is_zero() {
            continue;
        }
        let w = derivative_witness(pi, d, &tau)?;
        t.expect(w.is_some(), || format!("no layer of {pi} witnesses D^R_{d} = {tau}"));
    }
    Ok(())
}

fn criteria_soundness(u: &Universe, pi: &RepParam, t: &mut PropertyReport) -> Result<()> {
    for side in [Side::R, Side::L] {
        for d1 in removable_segments(u, pi, side)? {
            for d2 in &u.tests {
                let fired = match side {
                    Side::R => rdli_criterion(d1, d2),
                    Side::L => ldri_criterion(d1, d2),
                };
                let Some(reason) = fired else { continue };
                let Some(up) = try_integrate(pi, d2, side.flip())? else {
                    t.unknown();
                    continue;
                };
                let (before, after) = (eta(pi, d1, side)?, eta(&up, d1, side)?);
                t.expect(before == after, || {
                    format!("{reason:?} fires for ({d1}, {d2}, {pi}) on side {side} but eta goes {before} -> {after}")
                });
            }
        }
    }
    Ok(())
}

fn strong_commutation(u: &Universe, pi: &RepParam, t: &mut PropertyReport) -> Result<()> {
    for d1 in removable_segments(u, pi, Side::R)? {
        let down = derive(pi, d1, Side::R)?;
        for d2 in &u.tests {
            if !comm_rdli(d1, d2, pi)?.is_true() {
                continue;
            }
            let (Some(up), Some(down_up)) = (try_integrate(pi, d2, Side::L)?, try_integrate(&down, d2, Side::L)?) else {
                t.unknown();
                continue;
            };
            let up_down = derive(&up, d1, Side::R)?;
            t.expect(up_down == down_up, || {
                format!("({d1}, {d2}, {pi}) commutes but D I = {up_down} and I D = {down_up}")
            });
        }
    }
    Ok(())
}
