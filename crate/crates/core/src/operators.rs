//! The segment operators `D^R`, `D^L`, `I^R`, `I^L` and their multisegment
//! compositions.
//!
//! Convention for the right derivative: `D^R_D(pi) = tau` when
//! `tau ⊠ St(D)` embeds in the Jacquet module, with `St(D)` in the second
//! block. For `St([c,y])` the second block carries the left piece, so
//! `D^R_[c,b]` removes `[c,b]` from the left of a segment starting at `c`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rep::RepParam;
use crate::segment::{Multisegment, Segment, STEP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::L => "L",
            Side::R => "R",
        })
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" | "l" | "left" => Ok(Side::L),
            "R" | "r" | "right" => Ok(Side::R),
            _ => Err(Error::Parse { pos: 0, msg: format!("expected side L or R, got {s:?}") }),
        }
    }
}

/// Single-segment derivative. Vanishing is `Ok(RepParam::Zero)`.
pub fn derive(pi: &RepParam, d: &Segment, side: Side) -> Result<RepParam> {
    match pi {
        RepParam::Zero => Err(Error::ZeroRepInput),
        RepParam::Generic(m) => Ok(derive_generic(m, d, side)),
        RepParam::Ladder(m) => Ok(derive_ladder(m, d, side)),
    }
}

fn derive_generic(m: &Multisegment, d: &Segment, side: Side) -> RepParam {
    let same = |s: &&Segment| s.line() == d.line();
    let (target, rest) = match side {
        Side::R => {
            let Some(t) = m.iter().filter(same).filter(|s| s.a() == d.a() && s.b() >= d.b()).min_by_key(|s| s.b())
            else {
                return RepParam::Zero;
            };
            (t, Segment::try_new(d.line(), d.b() + STEP, t.b()))
        }
        Side::L => {
            let Some(t) = m.iter().filter(same).filter(|s| s.b() == d.b() && s.a() <= d.a()).max_by_key(|s| s.a())
            else {
                return RepParam::Zero;
            };
            (t, Segment::try_new(d.line(), t.a(), d.a() - STEP))
        }
    };
    let mut out = m.without(target).expect("target taken from m");
    if let Some(r) = rest {
        out = out.with(r);
    }
    RepParam::Generic(out.unlink())
}

fn derive_ladder(m: &Multisegment, d: &Segment, side: Side) -> RepParam {
    let s = m.segments();
    if s.is_empty() || s[0].line() != d.line() {
        return RepParam::Zero;
    }
    let k = s.len();
    let hit = match side {
        Side::R => (0..k).find(|&i| {
            s[i].a() == d.a() && d.b() <= s[i].b() && (i + 1 == k || d.b() <= s[i + 1].a() - 2 * STEP)
        }),
        Side::L => (0..k).find(|&i| {
            s[i].b() == d.b() && s[i].a() <= d.a() && (i == 0 || d.a() >= s[i - 1].b() + 2 * STEP)
        }),
    };
    let Some(i) = hit else { return RepParam::Zero };
    let rest = match side {
        Side::R => Segment::try_new(d.line(), d.b() + STEP, s[i].b()),
        Side::L => Segment::try_new(d.line(), s[i].a(), d.a() - STEP),
    };
    let mut items: Vec<Segment> = s.to_vec();
    items.remove(i);
    items.extend(rest);
    RepParam::make_ladder(Multisegment::new(items)).expect("ladder derivative stays a ladder")
}

/// Single-segment integral: the unique `tau` with `D_d(tau) = pi` among the
/// parameters the backends can express.
pub fn integrate(pi: &RepParam, d: &Segment, side: Side) -> Result<RepParam> {
    let m = pi.multisegment().ok_or(Error::ZeroRepInput)?;
    let mut cands: Vec<RepParam> = Vec::new();
    if pi.is_generic() {
        cands.push(RepParam::Generic(m.with(d.clone()).unlink()));
    }
    if let Ok(p) = RepParam::from_langlands(m.with(d.clone())) {
        cands.push(p);
    }
    for t in m.iter().filter(|t| t.line() == d.line()) {
        let glued = match side {
            Side::R if t.a() == d.b() + STEP => Segment::try_new(d.line(), d.a(), t.b()),
            Side::L if t.b() == d.a() - STEP => Segment::try_new(d.line(), t.a(), d.b()),
            _ => None,
        };
        if let Some(g) = glued {
            let n = m.without(t).expect("t taken from m").with(g);
            if let Ok(p) = RepParam::from_langlands(n) {
                cands.push(p);
            }
        }
    }
    cands.sort();
    cands.dedup();
    let mut hits = Vec::new();
    for c in cands {
        if derive(&c, d, side)? == *pi {
            hits.push(c);
        }
    }
    match hits.len() {
        0 => Err(Error::UnsupportedDomain(format!("I^{side}_{d}({pi})"))),
        1 => Ok(hits.pop().unwrap()),
        _ => Err(Error::AmbiguousIntegral(
            hits.iter().map(ToString::to_string).collect::<Vec<_>>().join(" | "),
        )),
    }
}

/// The order used for the multisegment operator on `side`: ascending for
/// `D^R` and `I^L`, descending for `D^L` and `I^R`.
fn derive_order(m: &Multisegment, side: Side) -> Vec<Segment> {
    match side {
        Side::R => m.canonical_order(),
        Side::L => m.dual_order(),
    }
}

/// Applies `derive` along an explicit order.
pub fn derive_along(pi: &RepParam, order: &[Segment], side: Side) -> Result<RepParam> {
    let mut cur = pi.clone();
    if cur.is_zero() {
        return Err(Error::ZeroRepInput);
    }
    for d in order {
        cur = derive(&cur, d, side)?;
        if cur.is_zero() {
            break;
        }
    }
    Ok(cur)
}

/// Applies `integrate` along an explicit order.
pub fn integrate_along(pi: &RepParam, order: &[Segment], side: Side) -> Result<RepParam> {
    if pi.is_zero() {
        return Err(Error::ZeroRepInput);
    }
    let mut cur = pi.clone();
    for d in order {
        cur = integrate(&cur, d, side)?;
    }
    Ok(cur)
}

pub fn derive_multi(pi: &RepParam, m: &Multisegment, side: Side) -> Result<RepParam> {
    derive_along(pi, &derive_order(m, side), side)
}

pub fn integrate_multi(pi: &RepParam, m: &Multisegment, side: Side) -> Result<RepParam> {
    integrate_along(pi, &derive_order(m, side.flip()), side)
}
