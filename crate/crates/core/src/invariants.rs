//! Numerical invariants: `epsilon`, `eta`, `mx`, the highest derivative
//! multisegment `hd` and the level.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{derive, Side};
use crate::rep::RepParam;
use crate::segment::{Multisegment, Segment, STEP};

/// Number of times `D^side_d` can be applied before vanishing.
pub fn epsilon(pi: &RepParam, d: &Segment, side: Side) -> Result<u32> {
    if pi.is_zero() {
        return Err(Error::ZeroRepInput);
    }
    let mut cur = derive(pi, d, side)?;
    let mut k = 0;
    while !cur.is_zero() {
        k += 1;
        cur = derive(&cur, d, side)?;
    }
    Ok(k)
}

/// Closed form on `St(m)`: `#{[c,y] in m : y >= b}` for `d = [c,b]` on the
/// right, `#{[x,b] in m : x <= c}` on the left.
pub fn epsilon_generic_closed(m: &Multisegment, d: &Segment, side: Side) -> u32 {
    m.iter()
        .filter(|s| s.line() == d.line())
        .filter(|s| match side {
            Side::R => s.a() == d.a() && s.b() >= d.b(),
            Side::L => s.b() == d.b() && s.a() <= d.a(),
        })
        .count() as u32
}

/// `eta_d(pi)`: on the right, entry `k` is `epsilon_[a+k,b]`; on the left,
/// entry `k` is `epsilon^L_[a,b-k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EtaVector {
    pub base: Segment,
    pub side: Side,
    pub values: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Cmp {
    Eq,
    Le,
    Lt,
    Ge,
    Gt,
}

impl FromStr for Cmp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "=" | "==" => Cmp::Eq,
            "<=" => Cmp::Le,
            "<" => Cmp::Lt,
            ">=" => Cmp::Ge,
            ">" => Cmp::Gt,
            _ => return Err(Error::Parse { pos: 0, msg: format!("unknown comparison {s:?}") }),
        })
    }
}

impl EtaVector {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Entrywise comparison: holds iff it holds in every coordinate.
    pub fn compare(&self, other: &EtaVector, op: Cmp) -> Result<bool> {
        if self.base != other.base || self.side != other.side || self.values.len() != other.values.len() {
            return Err(Error::InvalidComparison(format!("{self} vs {other}")));
        }
        let f = |x: u32, y: u32| match op {
            Cmp::Eq => x == y,
            Cmp::Le => x <= y,
            Cmp::Lt => x < y,
            Cmp::Ge => x >= y,
            Cmp::Gt => x > y,
        };
        Ok(self.values.iter().zip(&other.values).all(|(&x, &y)| f(x, y)))
    }

    /// The segments indexed by the entries.
    pub fn segments(&self) -> Vec<Segment> {
        sub_segments(&self.base, self.side)
    }
}

impl fmt::Display for EtaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(u32::to_string).collect();
        write!(f, "({})", vals.join(","))
    }
}

fn sub_segments(d: &Segment, side: Side) -> Vec<Segment> {
    (0..d.len() as i32)
        .map(|k| match side {
            Side::R => Segment::new(d.line().clone(), d.a() + k * STEP, d.b()),
            Side::L => Segment::new(d.line().clone(), d.a(), d.b() - k * STEP),
        })
        .map(|s| s.expect("sub-segment of a valid segment"))
        .collect()
}

pub fn eta(pi: &RepParam, d: &Segment, side: Side) -> Result<EtaVector> {
    let values = sub_segments(d, side)
        .iter()
        .map(|s| epsilon(pi, s, side))
        .collect::<Result<Vec<_>>>()?;
    Ok(EtaVector { base: d.clone(), side, values })
}

/// `mx_d(pi)`: each sub-segment of `eta` with multiplicity its `epsilon`.
pub fn mx(pi: &RepParam, d: &Segment, side: Side) -> Result<Multisegment> {
    let v = eta(pi, d, side)?;
    Ok(v.segments()
        .into_iter()
        .zip(&v.values)
        .flat_map(|(s, &k)| std::iter::repeat_n(s, k as usize))
        .collect())
}

/// Highest derivative multisegment: `[p, p+c]` with multiplicity
/// `epsilon_[p,p+c] - epsilon_[p,p+c+1]`.
pub fn hd(pi: &RepParam) -> Result<Multisegment> {
    let mut pts = pi.csupp()?;
    pts.dedup();
    let mut out = Vec::new();
    for p in &pts {
        let top = pts.iter().filter(|q| q.line == p.line && q.exp >= p.exp).map(|q| q.exp).max().unwrap_or(p.exp);
        let mut b = p.exp;
        let mut cur = epsilon(pi, &Segment::point(p.line.clone(), p.exp), Side::R)?;
        while b <= top {
            let next_seg = Segment::new(p.line.clone(), p.exp, b + STEP).expect("valid");
            let next = if b + STEP <= top { epsilon(pi, &next_seg, Side::R)? } else { 0 };
            let seg = Segment::new(p.line.clone(), p.exp, b).expect("valid");
            if next > cur {
                return Err(Error::NegativeMultiplicity(seg.to_string()));
            }
            out.extend(std::iter::repeat_n(seg, (cur - next) as usize));
            cur = next;
            b += STEP;
        }
    }
    Ok(Multisegment::new(out))
}

pub fn level(pi: &RepParam) -> Result<u32> {
    Ok(hd(pi)?.l_abs())
}
