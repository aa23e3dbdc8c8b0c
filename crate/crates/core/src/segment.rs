//! Cuspidal lines, segments and multisegments.
//!
//! Exponents are stored in half-units: the integer `k` stands for the
//! exponent `k/2`, so `nu^{1/2}` is a shift by `+1` and one whole step along
//! a line is `STEP = 2`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// One whole step `nu^1` in half-units.
pub const STEP: i32 = 2;

/// Formats a half-unit integer: `4 -> "2"`, `3 -> "3/2"`, `-1 -> "-1/2"`.
pub fn fmt_half(k: i32) -> String {
    if k % 2 == 0 {
        (k / 2).to_string()
    } else {
        format!("{k}/2")
    }
}

/// A cuspidal line: an opaque label, the label of its contragredient line and
/// the weight `n(rho)` entering `l_abs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    id: Arc<str>,
    dual: Arc<str>,
    weight: u32,
}

impl Line {
    /// Self-dual line of weight 1.
    pub fn new(id: &str) -> Self {
        let id: Arc<str> = Arc::from(id);
        Line { dual: id.clone(), id, weight: 1 }
    }

    pub fn with_dual(id: &str, dual: &str, weight: u32) -> Result<Self> {
        if weight == 0 {
            return Err(Error::InvalidWeight);
        }
        Ok(Line { id: Arc::from(id), dual: Arc::from(dual), weight })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dual_id(&self) -> &str {
        &self.dual
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn dual(&self) -> Line {
        Line { id: self.dual.clone(), dual: self.id.clone(), weight: self.weight }
    }

    pub fn is_self_dual(&self) -> bool {
        self.id == self.dual
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

/// `nu^{exp/2} rho` for the line `rho`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CuspidalPoint {
    pub line: Line,
    pub exp: i32,
}

impl CuspidalPoint {
    pub fn dual(&self) -> Self {
        CuspidalPoint { line: self.line.dual(), exp: -self.exp }
    }
}

impl fmt::Display for CuspidalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", fmt_half(self.exp), self.line)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SegmentRelation {
    Linked,
    Nested,
    DisjointUnlinked,
    Equal,
    DifferentLine,
}

/// The segment `[a,b]` on a line, endpoints in half-units, `b - a` a
/// nonnegative multiple of `STEP`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    line: Line,
    a: i32,
    b: i32,
}

impl Segment {
    pub fn new(line: Line, a: i32, b: i32) -> Result<Self> {
        if b < a || (b - a) % STEP != 0 {
            return Err(Error::InvalidSegment { a, b });
        }
        Ok(Segment { line, a, b })
    }

    /// The one-point segment `[x,x]`.
    pub fn point(line: Line, x: i32) -> Self {
        Segment { line, a: x, b: x }
    }

    /// `[a,b]` if it is non-empty on the whole-step grid of `a`, else `None`.
    pub fn try_new(line: &Line, a: i32, b: i32) -> Option<Self> {
        Segment::new(line.clone(), a, b).ok()
    }

    pub fn line(&self) -> &Line {
        &self.line
    }

    pub fn a(&self) -> i32 {
        self.a
    }

    pub fn b(&self) -> i32 {
        self.b
    }

    /// Number of cuspidal points.
    pub fn len(&self) -> u32 {
        ((self.b - self.a) / STEP + 1) as u32
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn l_abs(&self) -> u32 {
        self.len() * self.line.weight
    }

    pub fn contains_point(&self, line: &Line, x: i32) -> bool {
        self.line == *line && self.a <= x && x <= self.b && (x - self.a) % STEP == 0
    }

    pub fn contains(&self, other: &Segment) -> bool {
        self.line == other.line
            && self.a <= other.a
            && other.b <= self.b
            && (other.a - self.a) % STEP == 0
    }

    pub fn points(&self) -> impl Iterator<Item = CuspidalPoint> + '_ {
        (self.a..=self.b)
            .step_by(STEP as usize)
            .map(move |exp| CuspidalPoint { line: self.line.clone(), exp })
    }

    fn same_grid(&self, other: &Segment) -> bool {
        self.line == other.line && (self.a - other.a).rem_euclid(STEP) == 0
    }

    pub fn relation(&self, other: &Segment) -> SegmentRelation {
        if self.line != other.line {
            return SegmentRelation::DifferentLine;
        }
        if self == other {
            return SegmentRelation::Equal;
        }
        if !self.same_grid(other) {
            return SegmentRelation::DisjointUnlinked;
        }
        if self.contains(other) || other.contains(self) {
            return SegmentRelation::Nested;
        }
        if self.a.max(other.a) <= self.b.min(other.b) + STEP {
            SegmentRelation::Linked
        } else {
            SegmentRelation::DisjointUnlinked
        }
    }

    pub fn is_linked(&self, other: &Segment) -> bool {
        self.relation(other) == SegmentRelation::Linked
    }

    /// `self > other`: linked, and `a(self)` is to the right of `a(other)`.
    pub fn precedes_gt(&self, other: &Segment) -> bool {
        self.is_linked(other) && self.a > other.a
    }

    pub fn union(&self, other: &Segment) -> Result<Segment> {
        use SegmentRelation::*;
        match self.relation(other) {
            Linked | Nested | Equal => Ok(Segment {
                line: self.line.clone(),
                a: self.a.min(other.a),
                b: self.b.max(other.b),
            }),
            _ => Err(Error::NotASegment(self.to_string(), other.to_string())),
        }
    }

    pub fn intersection(&self, other: &Segment) -> Option<Segment> {
        if !self.same_grid(other) {
            return None;
        }
        let a = self.a.max(other.a);
        let b = self.b.min(other.b);
        (a <= b).then(|| Segment { line: self.line.clone(), a, b })
    }

    /// `self` is saturated with respect to `base`: same line, `a' <= a`, `b' = b`.
    pub fn saturated_wrt(&self, base: &Segment) -> bool {
        self.same_grid(base) && self.a <= base.a && self.b == base.b
    }

    pub fn dual(&self) -> Segment {
        Segment { line: self.line.dual(), a: -self.b, b: -self.a }
    }

    pub fn shift(&self, c: i32) -> Segment {
        Segment { line: self.line.clone(), a: self.a + c, b: self.b + c }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]@{}", fmt_half(self.a), fmt_half(self.b), self.line)
    }
}

impl Serialize for Segment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A multiset of segments kept sorted by `(line, a, b)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multisegment {
    items: Vec<Segment>,
}

impl Multisegment {
    pub fn new(mut items: Vec<Segment>) -> Self {
        items.sort();
        Multisegment { items }
    }

    pub fn empty() -> Self {
        Multisegment::default()
    }

    pub fn singleton(seg: Segment) -> Self {
        Multisegment { items: vec![seg] }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.items
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Segment> {
        self.items.iter()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn into_vec(self) -> Vec<Segment> {
        self.items
    }

    pub fn with(&self, seg: Segment) -> Self {
        let mut items = self.items.clone();
        let pos = items.binary_search(&seg).unwrap_or_else(|p| p);
        items.insert(pos, seg);
        Multisegment { items }
    }

    /// Removes one copy of `seg`, if present.
    pub fn without(&self, seg: &Segment) -> Option<Self> {
        let pos = self.items.iter().position(|s| s == seg)?;
        let mut items = self.items.clone();
        items.remove(pos);
        Some(Multisegment { items })
    }

    pub fn count(&self, seg: &Segment) -> usize {
        self.items.iter().filter(|s| *s == seg).count()
    }

    /// Sum of the two multisets.
    pub fn sum(&self, other: &Multisegment) -> Self {
        let mut items = self.items.clone();
        items.extend(other.items.iter().cloned());
        Multisegment::new(items)
    }

    pub fn l_abs(&self) -> u32 {
        self.items.iter().map(Segment::l_abs).sum()
    }

    pub fn dual(&self) -> Self {
        Multisegment::new(self.items.iter().map(Segment::dual).collect())
    }

    pub fn shift(&self, c: i32) -> Self {
        Multisegment { items: self.items.iter().map(|s| s.shift(c)).collect() }
    }

    pub fn lines(&self) -> Vec<Line> {
        let mut out: Vec<Line> = self.items.iter().map(|s| s.line.clone()).collect();
        out.dedup();
        out
    }

    /// All cuspidal points with multiplicity, sorted.
    pub fn points(&self) -> Vec<CuspidalPoint> {
        let mut out: Vec<CuspidalPoint> = self.items.iter().flat_map(|s| s.points()).collect();
        out.sort();
        out
    }

    pub fn pairwise_unlinked(&self) -> bool {
        self.first_linked_pair().is_none()
    }

    fn first_linked_pair(&self) -> Option<(usize, usize)> {
        for i in 0..self.items.len() {
            for j in i + 1..self.items.len() {
                if self.items[i].is_linked(&self.items[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Repeatedly replaces a linked pair by its union and intersection until the
    /// multisegment is pairwise unlinked.
    pub fn unlink(&self) -> Self {
        let mut cur = self.clone();
        while let Some((i, j)) = cur.first_linked_pair() {
            cur = cur.unlink_pair(i, j);
        }
        cur
    }

    /// One elementary move on the linked pair at positions `i`, `j`.
    pub fn unlink_pair(&self, i: usize, j: usize) -> Self {
        let (x, y) = (&self.items[i], &self.items[j]);
        let u = x.union(y).expect("linked pair has a union");
        let n = x.intersection(y);
        let mut items: Vec<Segment> = self
            .items
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i && *k != j)
            .map(|(_, s)| s.clone())
            .collect();
        items.push(u);
        items.extend(n);
        Multisegment::new(items)
    }

    /// Linked pairs as index pairs.
    pub fn linked_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.items.len() {
            for j in i + 1..self.items.len() {
                if self.items[i].is_linked(&self.items[j]) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The stored order, which is admissible: `i < j` never has `D_i > D_j`.
    pub fn canonical_order(&self) -> Vec<Segment> {
        self.items.clone()
    }

    /// The reversed order, admissible for the opposite relation
    /// (`i < j` never has `D_j > D_i`).
    pub fn dual_order(&self) -> Vec<Segment> {
        self.items.iter().rev().cloned().collect()
    }

    /// Every distinct ordering `D_1, ..., D_r` with `i < j => not D_i > D_j`.
    pub fn admissible_orders(&self) -> Vec<Vec<Segment>> {
        let mut counts: BTreeMap<Segment, usize> = BTreeMap::new();
        for s in &self.items {
            *counts.entry(s.clone()).or_default() += 1;
        }
        let distinct: Vec<Segment> = counts.keys().cloned().collect();
        let mut remaining: Vec<usize> = counts.values().copied().collect();
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(self.items.len());
        extend_orders(&distinct, &mut remaining, &mut prefix, self.items.len(), &mut out);
        out
    }
}

fn extend_orders(
    distinct: &[Segment],
    remaining: &mut [usize],
    prefix: &mut Vec<Segment>,
    total: usize,
    out: &mut Vec<Vec<Segment>>,
) {
    if prefix.len() == total {
        out.push(prefix.clone());
        return;
    }
    for k in 0..distinct.len() {
        if remaining[k] == 0 {
            continue;
        }
        // Placing distinct[k] now puts it before every remaining segment.
        let blocked = distinct
            .iter()
            .zip(remaining.iter())
            .any(|(s, &c)| c > 0 && distinct[k].precedes_gt(s));
        if blocked {
            continue;
        }
        remaining[k] -= 1;
        prefix.push(distinct[k].clone());
        extend_orders(distinct, remaining, prefix, total, out);
        prefix.pop();
        remaining[k] += 1;
    }
}

/// `i < j => not order[i] > order[j]`.
pub fn is_admissible(order: &[Segment]) -> bool {
    (0..order.len()).all(|i| (i + 1..order.len()).all(|j| !order[i].precedes_gt(&order[j])))
}

impl FromIterator<Segment> for Multisegment {
    fn from_iter<I: IntoIterator<Item = Segment>>(iter: I) -> Self {
        Multisegment::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Multisegment {
    type Item = &'a Segment;
    type IntoIter = std::slice::Iter<'a, Segment>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

impl fmt::Display for Multisegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for Multisegment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r() -> Line {
        Line::new("r")
    }

    // whole-unit endpoints
    fn s(a: i32, b: i32) -> Segment {
        Segment::new(r(), 2 * a, 2 * b).unwrap()
    }

    #[test]
    fn relations() {
        assert_eq!(s(0, 1).relation(&s(2, 3)), SegmentRelation::Linked);
        assert_eq!(s(1, 1).relation(&s(0, 2)), SegmentRelation::Nested);
        assert_eq!(s(0, 1).relation(&s(4, 5)), SegmentRelation::DisjointUnlinked);
        assert_eq!(s(0, 1).relation(&s(0, 1)), SegmentRelation::Equal);
        let other = Segment::new(Line::new("q"), 0, 2).unwrap();
        assert_eq!(s(0, 1).relation(&other), SegmentRelation::DifferentLine);
        // different grids on one line never interact
        let half = Segment::new(r(), 1, 3).unwrap();
        assert_eq!(s(0, 1).relation(&half), SegmentRelation::DisjointUnlinked);
    }

    #[test]
    fn invalid_segments() {
        assert!(Segment::new(r(), 2, 0).is_err());
        assert!(Segment::new(r(), 0, 1).is_err());
        assert!(Line::with_dual("x", "y", 0).is_err());
    }

    #[test]
    fn union_intersection() {
        assert_eq!(s(0, 1).union(&s(1, 2)).unwrap(), s(0, 2));
        assert_eq!(s(0, 2).intersection(&s(1, 3)), Some(s(1, 2)));
        assert!(s(0, 0).union(&s(2, 2)).is_err());
        assert_eq!(s(0, 0).intersection(&s(1, 1)), None);
    }

    #[test]
    fn precedes() {
        assert!(s(1, 2).precedes_gt(&s(0, 1)));
        assert!(!s(0, 1).precedes_gt(&s(1, 2)));
        assert!(!s(1, 1).precedes_gt(&s(0, 2)));
    }

    #[test]
    fn saturation() {
        let base = s(0, 2);
        assert!(Segment::new(r(), -2, 4).unwrap().saturated_wrt(&base));
        assert!(!s(0, 1).saturated_wrt(&base));
        assert!(base.saturated_wrt(&base));
    }

    #[test]
    fn duals_and_lengths() {
        let l = Line::with_dual("L", "Lv", 2).unwrap();
        let d = Segment::new(l.clone(), 0, 4).unwrap();
        let dd = d.dual();
        assert_eq!((dd.a(), dd.b(), dd.line().id()), (-4, 0, "Lv"));
        assert_eq!(dd.dual(), d);
        assert_eq!(d.l_abs(), 6);
        assert_eq!(s(0, 2).l_abs(), 3);
        assert_eq!(Segment::point(l, 0).l_abs(), 2);
        assert_eq!(Multisegment::empty().l_abs(), 0);
        let m = Multisegment::new(vec![s(1, 1), s(0, 2)]);
        assert_eq!(m.dual(), Multisegment::new(vec![s(-1, -1), s(-2, 0)]));
        assert_eq!(s(0, 2).shift(1).to_string(), "[1/2,5/2]@r");
    }

    #[test]
    fn unlinkedness() {
        assert!(Multisegment::new(vec![s(0, 2), s(1, 2)]).pairwise_unlinked());
        assert!(!Multisegment::new(vec![s(0, 1), s(1, 2)]).pairwise_unlinked());
        assert!(Multisegment::empty().pairwise_unlinked());
    }

    #[test]
    fn orders() {
        let m = Multisegment::new(vec![s(0, 1), s(1, 2)]);
        assert_eq!(m.admissible_orders(), vec![vec![s(0, 1), s(1, 2)]]);
        let u = Multisegment::new(vec![s(0, 2), s(1, 1), s(5, 5)]);
        assert_eq!(u.admissible_orders().len(), 6);
        assert_eq!(Multisegment::empty().admissible_orders(), vec![Vec::<Segment>::new()]);
        let twice = Multisegment::new(vec![s(0, 0), s(0, 0)]);
        assert_eq!(twice.admissible_orders().len(), 1);
    }

    fn arb_seg() -> impl Strategy<Value = Segment> {
        (-3i32..4, 0i32..3).prop_map(|(a, len)| s(a, a + len))
    }

    fn arb_multi() -> impl Strategy<Value = Multisegment> {
        proptest::collection::vec(arb_seg(), 0..5).prop_map(Multisegment::new)
    }

    proptest! {
        #[test]
        fn union_intersection_lengths(x in arb_seg(), y in arb_seg()) {
            if let Ok(u) = x.union(&y) {
                let n = x.intersection(&y).map_or(0, |n| n.l_abs());
                prop_assert_eq!(x.l_abs() + y.l_abs(), u.l_abs() + n);
            }
        }

        #[test]
        fn precedes_is_asymmetric(x in arb_seg(), y in arb_seg()) {
            prop_assert!(!x.precedes_gt(&x));
            prop_assert!(!(x.precedes_gt(&y) && y.precedes_gt(&x)));
        }

        #[test]
        fn dual_reverses_precedes(x in arb_seg(), y in arb_seg()) {
            prop_assert_eq!(x.precedes_gt(&y), y.dual().precedes_gt(&x.dual()));
        }

        #[test]
        fn relation_symmetric(x in arb_seg(), y in arb_seg()) {
            prop_assert_eq!(x.relation(&y), y.relation(&x));
        }

        #[test]
        fn orders_admissible_and_nonempty(m in arb_multi()) {
            let orders = m.admissible_orders();
            prop_assert!(!orders.is_empty());
            prop_assert!(is_admissible(&m.canonical_order()));
            let d = m.dual_order();
            for i in 0..d.len() {
                for j in i + 1..d.len() {
                    prop_assert!(!d[j].precedes_gt(&d[i]));
                }
            }
            for o in &orders {
                prop_assert!(is_admissible(o));
                prop_assert_eq!(Multisegment::new(o.clone()), m.clone());
            }
        }

        #[test]
        fn unlink_is_order_independent(m in arb_multi(), picks in proptest::collection::vec(0usize..16, 0..12)) {
            // follow an arbitrary sequence of elementary moves, then finish
            let mut cur = m.clone();
            for p in picks {
                let pairs = cur.linked_pairs();
                if pairs.is_empty() { break; }
                let (i, j) = pairs[p % pairs.len()];
                cur = cur.unlink_pair(i, j);
            }
            let out = cur.unlink();
            prop_assert!(out.pairwise_unlinked());
            prop_assert_eq!(out.points(), m.points());
            prop_assert_eq!(out, m.unlink());
        }
    }
}
