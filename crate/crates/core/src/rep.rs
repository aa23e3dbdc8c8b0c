//! Representation parameters on which the operators are exactly computable.
//!
//! * `Generic(m)`: `St(m)` for a pairwise unlinked `m` (any number of lines).
//!   `Generic(∅)` is the trivial representation of `G_0`.
//! * `Ladder(m)`: the Langlands quotient `L(m)` of a ladder on one line:
//!   `a` and `b` strictly increasing and at least one linked pair. The
//!   Zelevinsky segment representation `<[x,y]>` is the ladder of consecutive
//!   points `[x],[x+1],...,[y]`.
//! * `Zero`: a vanished derivative.
//!
//! Constructors canonicalize: a ladder without linked pairs is `Generic`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::segment::{CuspidalPoint, Line, Multisegment, Segment, STEP};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RepParam {
    Generic(Multisegment),
    Ladder(Multisegment),
    Zero,
}

/// One line, one whole-step grid, `a` and `b` strictly increasing in the
/// stored order.
pub fn is_ladder_shape(m: &Multisegment) -> bool {
    let s = m.segments();
    let Some(first) = s.first() else { return true };
    s.iter().all(|x| x.line() == first.line() && (x.a() - first.a()).rem_euclid(STEP) == 0)
        && s.windows(2).all(|w| w[0].a() < w[1].a() && w[0].b() < w[1].b())
}

impl RepParam {
    /// The trivial representation of `G_0`.
    pub fn trivial() -> Self {
        RepParam::Generic(Multisegment::empty())
    }

    pub fn make_generic(m: Multisegment) -> Result<Self> {
        if m.pairwise_unlinked() {
            Ok(RepParam::Generic(m))
        } else {
            Err(Error::NotPairwiseUnlinked(m.to_string()))
        }
    }

    /// `<[x,y]>`.
    pub fn make_zsegment(d: &Segment) -> Self {
        let pts = (d.a()..=d.b())
            .step_by(STEP as usize)
            .map(|x| Segment::point(d.line().clone(), x))
            .collect();
        RepParam::make_ladder(Multisegment::new(pts)).expect("consecutive points form a ladder")
    }

    pub fn make_ladder(m: Multisegment) -> Result<Self> {
        if !is_ladder_shape(&m) {
            return Err(Error::NotALadder(m.to_string()));
        }
        Ok(if m.pairwise_unlinked() { RepParam::Generic(m) } else { RepParam::Ladder(m) })
    }

    /// `L(m)` when it lies in one of the backends.
    pub fn from_langlands(m: Multisegment) -> Result<Self> {
        if m.pairwise_unlinked() {
            Ok(RepParam::Generic(m))
        } else if is_ladder_shape(&m) {
            Ok(RepParam::Ladder(m))
        } else {
            Err(Error::UnsupportedDomain(format!("L{m} is neither generic nor a ladder")))
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, RepParam::Zero)
    }

    pub fn is_generic(&self) -> bool {
        matches!(self, RepParam::Generic(_))
    }

    /// The Langlands multisegment (`None` for `Zero`).
    pub fn multisegment(&self) -> Option<&Multisegment> {
        match self {
            RepParam::Generic(m) | RepParam::Ladder(m) => Some(m),
            RepParam::Zero => None,
        }
    }

    /// `Some(d)` if this is `<d>` with `d` of length at least 2.
    pub fn as_zsegment(&self) -> Option<Segment> {
        let RepParam::Ladder(m) = self else { return None };
        let s = m.segments();
        let consecutive = s.iter().all(|x| x.a() == x.b())
            && s.windows(2).all(|w| w[1].a() == w[0].a() + STEP);
        if !consecutive {
            return None;
        }
        Segment::new(s[0].line().clone(), s[0].a(), s[s.len() - 1].b()).ok()
    }

    pub fn lines(&self) -> Vec<Line> {
        self.multisegment().map(Multisegment::lines).unwrap_or_default()
    }

    pub fn l_abs(&self) -> u32 {
        self.multisegment().map_or(0, Multisegment::l_abs)
    }

    pub fn dual(&self) -> Self {
        match self {
            RepParam::Generic(m) => RepParam::Generic(m.dual()),
            RepParam::Ladder(m) => RepParam::Ladder(m.dual()),
            RepParam::Zero => RepParam::Zero,
        }
    }

    /// Twist by `nu^{c/2}`.
    pub fn shift(&self, c: i32) -> Self {
        match self {
            RepParam::Generic(m) => RepParam::Generic(m.shift(c)),
            RepParam::Ladder(m) => RepParam::Ladder(m.shift(c)),
            RepParam::Zero => RepParam::Zero,
        }
    }

    /// Cuspidal support with multiplicity, sorted.
    pub fn csupp(&self) -> Result<Vec<CuspidalPoint>> {
        self.multisegment().map(Multisegment::points).ok_or(Error::ZeroRepInput)
    }
}

impl fmt::Display for RepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepParam::Generic(m) => write!(f, "St{m}"),
            RepParam::Ladder(m) => match self.as_zsegment() {
                Some(d) => write!(f, "Z<{d}>"),
                None => write!(f, "L{m}"),
            },
            RepParam::Zero => f.write_str("Zero"),
        }
    }
}

impl Serialize for RepParam {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> Line {
        Line::new("r")
    }

    fn s(a: i32, b: i32) -> Segment {
        Segment::new(r(), 2 * a, 2 * b).unwrap()
    }

    fn ms(v: &[(i32, i32)]) -> Multisegment {
        v.iter().map(|&(a, b)| s(a, b)).collect()
    }

    #[test]
    fn constructors() {
        assert!(RepParam::make_generic(ms(&[(0, 2), (1, 2)])).unwrap().is_generic());
        assert!(matches!(
            RepParam::make_generic(ms(&[(0, 1), (1, 2)])),
            Err(Error::NotPairwiseUnlinked(_))
        ));
        let z = RepParam::make_zsegment(&s(-1, 0));
        assert_eq!(z.to_string(), "Z<[-1,0]@r>");
        assert_eq!(z.as_zsegment(), Some(s(-1, 0)));
        assert_eq!(RepParam::make_zsegment(&s(3, 3)), RepParam::Generic(ms(&[(3, 3)])));
        assert!(RepParam::make_ladder(ms(&[(0, 2), (1, 1)])).is_err());
        assert!(matches!(
            RepParam::from_langlands(ms(&[(0, 0), (0, 0), (1, 1)])),
            Err(Error::UnsupportedDomain(_))
        ));
        let l = RepParam::make_ladder(ms(&[(-1, -1), (0, 1)])).unwrap();
        assert_eq!(l.to_string(), "L{[-1,-1]@r,[0,1]@r}");
    }

    #[test]
    fn duals() {
        let lv = Line::with_dual("L", "Lv", 1).unwrap();
        let g = RepParam::Generic(Multisegment::singleton(Segment::new(lv.clone(), 0, 2).unwrap()));
        let d = g.dual();
        assert_eq!(d.to_string(), "St{[-1,0]@Lv}");
        assert_eq!(d.dual(), g);
        let z = RepParam::make_zsegment(&s(0, 2));
        assert_eq!(z.dual(), RepParam::make_zsegment(&s(-2, 0)));
        assert_eq!(z.dual().dual(), z);
    }

    #[test]
    fn supports() {
        let pts = |p: &RepParam| p.csupp().unwrap().iter().map(|x| x.exp / 2).collect::<Vec<_>>();
        assert_eq!(pts(&RepParam::Generic(ms(&[(0, 1)]))), vec![0, 1]);
        assert_eq!(pts(&RepParam::Generic(ms(&[(0, 2), (1, 2)]))), vec![0, 1, 1, 2, 2]);
        assert_eq!(pts(&RepParam::make_zsegment(&s(0, 2))), vec![0, 1, 2]);
        assert_eq!(RepParam::Zero.csupp(), Err(Error::ZeroRepInput));
        let p = RepParam::make_zsegment(&s(0, 2));
        let dual_pts: Vec<_> = p.csupp().unwrap().iter().map(CuspidalPoint::dual).rev().collect();
        assert_eq!(p.dual().csupp().unwrap(), dual_pts);
    }

    #[test]
    fn shifts() {
        let p = RepParam::make_ladder(ms(&[(-1, -1), (0, 1)])).unwrap();
        assert_eq!(p.shift(1).to_string(), "L{[-1/2,-1/2]@r,[1/2,3/2]@r}");
        assert_eq!(p.shift(1).shift(-1), p);
    }
}
