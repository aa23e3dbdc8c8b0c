//! Layers of the geometric-lemma filtration for a product of segment
//! representations restricted to a maximal block parabolic, and the order on
//! the double cosets indexing them.
//!
//! A double coset for the compositions `(l_1, ..., l_r)` and `(q_1, ..., q_c)`
//! is a nonnegative integer matrix with those row and column sums. Bruhat
//! order: `M <= M'` iff every north-west partial sum of `M` is at least the
//! corresponding one of `M'`. The identity coset is the unique minimum.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rep::RepParam;
use crate::segment::{CuspidalPoint, Segment, STEP};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LayerIndex {
    rows: Vec<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrbitOrder {
    Less,
    Greater,
    Equal,
    Incomparable,
}

impl LayerIndex {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(Error::ShapeMismatch("ragged layer index".into()));
        }
        Ok(LayerIndex { rows })
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn row_sums(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u32> {
        (0..self.n_cols()).map(|j| self.rows.iter().map(|r| r[j]).sum()).collect()
    }

    /// The identity coset: rows fill the columns in order.
    pub fn trivial(row_sums: &[u32], col_sums: &[u32]) -> Result<Self> {
        if row_sums.iter().sum::<u32>() != col_sums.iter().sum::<u32>() {
            return Err(Error::ShapeMismatch("row and column totals differ".into()));
        }
        let mut left = col_sums.to_vec();
        let mut j = 0;
        let mut rows = Vec::with_capacity(row_sums.len());
        for &l in row_sums {
            let mut row = vec![0; col_sums.len()];
            let mut need = l;
            while need > 0 {
                while left[j] == 0 {
                    j += 1;
                }
                let t = need.min(left[j]);
                row[j] += t;
                left[j] -= t;
                need -= t;
            }
            rows.push(row);
        }
        Ok(LayerIndex { rows })
    }

    /// Every matrix with the given margins, sorted by length and then
    /// lexicographically. The list is a linear extension of the Bruhat order.
    pub fn enumerate(row_sums: &[u32], col_sums: &[u32]) -> Vec<LayerIndex> {
        let mut out = Vec::new();
        if row_sums.iter().sum::<u32>() != col_sums.iter().sum::<u32>() {
            return out;
        }
        let mut rows = Vec::new();
        fill_rows(row_sums, &mut col_sums.to_vec(), &mut rows, &mut out);
        sort_by_length(&mut out);
        out
    }

    fn partial_sums(&self) -> Vec<Vec<u32>> {
        let (r, c) = (self.n_rows(), self.n_cols());
        let mut s = vec![vec![0u32; c + 1]; r + 1];
        for i in 0..r {
            for j in 0..c {
                s[i + 1][j + 1] = self.rows[i][j] + s[i][j + 1] + s[i + 1][j] - s[i][j];
            }
        }
        s
    }

    /// Length of the minimal double coset representative.
    pub fn length(&self) -> u32 {
        let mut total = 0;
        for i in 0..self.n_rows() {
            for i2 in i + 1..self.n_rows() {
                for j in 0..self.n_cols() {
                    for j2 in 0..j {
                        total += self.rows[i][j] * self.rows[i2][j2];
                    }
                }
            }
        }
        total
    }

    pub fn is_trivial(&self) -> bool {
        self.length() == 0
    }

    pub fn compare(&self, other: &LayerIndex) -> Result<OrbitOrder> {
        if self.row_sums() != other.row_sums() || self.col_sums() != other.col_sums() {
            return Err(Error::ShapeMismatch(format!("{self} vs {other}")));
        }
        let (p, q) = (self.partial_sums(), other.partial_sums());
        let mut le = true;
        let mut ge = true;
        for (a, b) in p.iter().flatten().zip(q.iter().flatten()) {
            le &= a >= b;
            ge &= a <= b;
        }
        Ok(match (le, ge) {
            (true, true) => OrbitOrder::Equal,
            (true, false) => OrbitOrder::Less,
            (false, true) => OrbitOrder::Greater,
            (false, false) => OrbitOrder::Incomparable,
        })
    }

    /// `self >= other` in the Bruhat order.
    pub fn geq(&self, other: &LayerIndex) -> Result<bool> {
        Ok(matches!(self.compare(other)?, OrbitOrder::Greater | OrbitOrder::Equal))
    }
}

fn fill_rows(row_sums: &[u32], left: &mut Vec<u32>, rows: &mut Vec<Vec<u32>>, out: &mut Vec<LayerIndex>) {
    let i = rows.len();
    if i == row_sums.len() {
        if left.iter().all(|&x| x == 0) {
            out.push(LayerIndex { rows: rows.clone() });
        }
        return;
    }
    let mut row = vec![0; left.len()];
    fill_cells(row_sums, left, rows, out, &mut row, 0, row_sums[i]);
}

fn fill_cells(
    row_sums: &[u32],
    left: &mut Vec<u32>,
    rows: &mut Vec<Vec<u32>>,
    out: &mut Vec<LayerIndex>,
    row: &mut Vec<u32>,
    j: usize,
    need: u32,
) {
    if j == left.len() {
        if need == 0 {
            rows.push(row.clone());
            fill_rows(row_sums, left, rows, out);
            rows.pop();
        }
        return;
    }
    for t in 0..=need.min(left[j]) {
        row[j] = t;
        left[j] -= t;
        fill_cells(row_sums, left, rows, out, row, j + 1, need - t);
        left[j] += t;
    }
    row[j] = 0;
}

fn sort_by_length(v: &mut [LayerIndex]) {
    v.sort_by(|x, y| x.length().cmp(&y.length()).then_with(|| y.rows.cmp(&x.rows)));
}

impl fmt::Display for LayerIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// Refines each column `j` of `outer` by `inner[j]`, whose rows are the
/// nonzero entries of column `j` in factor order.
pub fn compose_orbits(outer: &LayerIndex, inner: &[LayerIndex]) -> Result<LayerIndex> {
    if inner.len() != outer.n_cols() {
        return Err(Error::ShapeMismatch(format!("{} inner indices for {} columns", inner.len(), outer.n_cols())));
    }
    let width: usize = inner.iter().map(LayerIndex::n_cols).sum();
    let mut rows = vec![vec![0u32; width]; outer.n_rows()];
    let mut offset = 0;
    for (j, u) in inner.iter().enumerate() {
        let feeding: Vec<usize> = (0..outer.n_rows()).filter(|&i| outer.rows[i][j] > 0).collect();
        let sums = u.row_sums();
        if sums.len() != feeding.len() || feeding.iter().zip(&sums).any(|(&i, &s)| outer.rows[i][j] != s) {
            return Err(Error::ShapeMismatch(format!("inner index {u} does not refine column {j} of {outer}")));
        }
        for (k, &i) in feeding.iter().enumerate() {
            for q in 0..u.n_cols() {
                rows[i][offset + q] = u.rows[k][q];
            }
        }
        offset += u.n_cols();
    }
    Ok(LayerIndex { rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Tag {
    St,
    Z,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Piece {
    pub tag: Tag,
    pub seg: Segment,
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tag {
            Tag::St => write!(f, "St{}", self.seg),
            Tag::Z => write!(f, "Z{}", self.seg),
        }
    }
}

/// A layer `first ⊠ second`, each block a formal product of pieces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacquetLayer {
    pub index: LayerIndex,
    pub first: Vec<Piece>,
    pub second: Vec<Piece>,
}

fn block_points(v: &[Piece]) -> Vec<CuspidalPoint> {
    let mut out: Vec<CuspidalPoint> = v.iter().flat_map(|p| p.seg.points()).collect();
    out.sort();
    out
}

impl JacquetLayer {
    pub fn first_support(&self) -> Vec<CuspidalPoint> {
        block_points(&self.first)
    }

    pub fn second_support(&self) -> Vec<CuspidalPoint> {
        block_points(&self.second)
    }
}

impl fmt::Display for JacquetLayer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Piece]| {
            if v.is_empty() {
                "1".to_string()
            } else {
                v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" x ")
            }
        };
        write!(f, "{} ⊠ {}", join(&self.first), join(&self.second))
    }
}

/// The factors of a parameter that is a product of segment representations.
pub fn factors(pi: &RepParam) -> Result<Vec<Piece>> {
    if let Some(d) = pi.as_zsegment() {
        return Ok(vec![Piece { tag: Tag::Z, seg: d }]);
    }
    match pi {
        RepParam::Generic(m) => Ok(m.iter().map(|s| Piece { tag: Tag::St, seg: s.clone() }).collect()),
        RepParam::Zero => Err(Error::ZeroRepInput),
        RepParam::Ladder(_) => Err(Error::UnsupportedDomain(format!("{pi} is not a product of segment representations"))),
    }
}

/// Splits one factor, sending `t` points to the second block.
fn split(p: &Piece, t: i32) -> (Option<Piece>, Option<Piece>) {
    let (a, b, l) = (p.seg.a(), p.seg.b(), p.seg.line());
    let piece = |s: Option<Segment>| s.map(|seg| Piece { tag: p.tag, seg });
    match p.tag {
        Tag::St => (
            piece(Segment::try_new(l, a + t * STEP, b)),
            piece(Segment::try_new(l, a, a + (t - 1) * STEP)),
        ),
        Tag::Z => (
            piece(Segment::try_new(l, a, b - t * STEP)),
            piece(Segment::try_new(l, b - (t - 1) * STEP, b)),
        ),
    }
}

fn layer_for(factors: &[Piece], index: LayerIndex) -> JacquetLayer {
    let mut first = Vec::new();
    let mut second = Vec::new();
    for (p, row) in factors.iter().zip(index.rows()) {
        let t = (row[1] / p.seg.line().weight()) as i32;
        let (x, y) = split(p, t);
        first.extend(x);
        second.extend(y);
    }
    JacquetLayer { index, first, second }
}

/// All layers for the restriction to the block `(n - k, k)`, `k` in `l_abs`
/// units, trivial layer first.
pub fn jacquet_layers(factors: &[Piece], k: u32) -> Result<Vec<JacquetLayer>> {
    let sizes: Vec<u32> = factors.iter().map(|p| p.seg.l_abs()).collect();
    let total: u32 = sizes.iter().sum();
    if k > total {
        return Err(Error::BadSize(format!("k = {k} exceeds total size {total}")));
    }
    let mut idx = Vec::new();
    let mut x = vec![0u32; factors.len()];
    splits(factors, 0, k, &mut x, &mut idx);
    let mut idx: Vec<LayerIndex> = idx
        .into_iter()
        .map(|x| LayerIndex { rows: sizes.iter().zip(&x).map(|(&l, &t)| vec![l - t, t]).collect() })
        .collect();
    sort_by_length(&mut idx);
    Ok(idx.into_iter().map(|i| layer_for(factors, i)).collect())
}

fn splits(factors: &[Piece], i: usize, need: u32, x: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if i == factors.len() {
        if need == 0 {
            out.push(x.clone());
        }
        return;
    }
    let w = factors[i].seg.line().weight();
    let mut t = 0;
    while t <= factors[i].seg.l_abs() && t <= need {
        x[i] = t;
        splits(factors, i + 1, need - t, x, out);
        t += w;
    }
    x[i] = 0;
}

/// The layer where only the last factor is split.
pub fn top_layer(factors: &[Piece], k: u32) -> Result<JacquetLayer> {
    let Some(last) = factors.last() else {
        return if k == 0 { Ok(layer_for(factors, LayerIndex { rows: vec![] })) } else { Err(Error::BadSize("no factors".into())) };
    };
    if k > last.seg.l_abs() || !k.is_multiple_of(last.seg.line().weight()) {
        return Err(Error::BadSize(format!("k = {k} does not split the last factor {last}")));
    }
    let n = factors.len();
    let rows = factors
        .iter()
        .enumerate()
        .map(|(i, p)| if i + 1 == n { vec![p.seg.l_abs() - k, k] } else { vec![p.seg.l_abs(), 0] })
        .collect();
    Ok(layer_for(factors, LayerIndex { rows }))
}

/// A layer whose blocks have the cuspidal supports of `tau` and `St(d)`.
pub fn derivative_witness(pi: &RepParam, d: &Segment, tau: &RepParam) -> Result<Option<JacquetLayer>> {
    let f = factors(pi)?;
    let want_first = tau.csupp()?;
    let mut want_second: Vec<CuspidalPoint> = d.points().collect();
    want_second.sort();
    Ok(jacquet_layers(&f, d.l_abs())?
        .into_iter()
        .find(|l| l.second_support() == want_second && l.first_support() == want_first))
}
