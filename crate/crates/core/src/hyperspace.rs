//! Compact subsets of the real line as finite unions of closed intervals.
//!
//! Spectra, limit sets and gap structure all live here. Every operation is
//! exact on the endpoint representation; nothing samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::Poly2;

/// Sorted union of disjoint closed intervals `[lo, hi]` with `hi_k < lo_{k+1}`.
///
/// Degenerate intervals `[c, c]` are allowed and represent isolated points.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSet")]
pub struct CompactSet {
    intervals: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
struct RawSet {
    intervals: Vec<[f64; 2]>,
}

impl TryFrom<RawSet> for CompactSet {
    type Error = Error;
    fn try_from(raw: RawSet) -> Result<Self> {
        CompactSet::from_intervals(raw.intervals)
    }
}

/// Bounded component `(a, b)` of the complement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub a: f64,
    pub b: f64,
}

impl Gap {
    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn overlaps(&self, other: &Gap) -> bool {
        self.a < other.b && other.a < self.b
    }
}

/// Basic Vietoris neighbourhood: sets that miss `miss` and hit every open interval in `hits`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HitAndMissNbhd {
    pub miss: CompactSet,
    pub hits: Vec<(f64, f64)>,
}

impl HitAndMissNbhd {
    pub fn new(miss: CompactSet, hits: Vec<(f64, f64)>) -> Result<Self> {
        if let Some(&(lo, hi)) = hits.iter().find(|(lo, hi)| !(lo < hi)) {
            return Err(Error::InvalidIntervals(format!("hit interval ({lo}, {hi}) is empty")));
        }
        Ok(Self { miss, hits })
    }
}

impl CompactSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::from_intervals(vec![[lo, hi]])
    }

    /// Validates an already-normalized interval list.
    pub fn from_intervals(intervals: Vec<[f64; 2]>) -> Result<Self> {
        for (k, iv) in intervals.iter().enumerate() {
            if !(iv[0].is_finite() && iv[1].is_finite()) || iv[0] > iv[1] {
                return Err(Error::InvalidIntervals(format!("interval {k} = [{}, {}]", iv[0], iv[1])));
            }
            if k > 0 && !(intervals[k - 1][1] < iv[0]) {
                return Err(Error::InvalidIntervals(format!("intervals {} and {k} are not separated", k - 1)));
            }
        }
        Ok(Self { intervals })
    }

    /// Union of arbitrary closed intervals; overlapping or touching pieces are fused.
    pub fn normalized(mut pieces: Vec<[f64; 2]>) -> Result<Self> {
        for iv in &pieces {
            if !(iv[0].is_finite() && iv[1].is_finite()) || iv[0] > iv[1] {
                return Err(Error::InvalidIntervals(format!("[{}, {}]", iv[0], iv[1])));
            }
        }
        pieces.sort_by(|x, y| x[0].total_cmp(&y[0]).then(x[1].total_cmp(&y[1])));
        let mut out: Vec<[f64; 2]> = Vec::with_capacity(pieces.len());
        for iv in pieces {
            match out.last_mut() {
                Some(last) if iv[0] <= last[1] => last[1] = last[1].max(iv[1]),
                _ => out.push(iv),
            }
        }
        Ok(Self { intervals: out })
    }

    /// Clusters a sorted point cloud: spacing `<= merge_tol` joins, larger spacing splits.
    ///
    /// An empty cloud gives the empty set (check [`CompactSet::is_empty`]).
    pub fn from_points(points: &[f64], merge_tol: f64) -> Result<Self> {
        if !(merge_tol > 0.0) {
            return Err(Error::InvalidParameter(format!("merge_tol must be > 0, got {merge_tol}")));
        }
        let mut out: Vec<[f64; 2]> = Vec::new();
        for (k, &x) in points.iter().enumerate() {
            if !x.is_finite() || (k > 0 && x < points[k - 1]) {
                return Err(Error::UnsortedPoints { index: k });
            }
            match out.last_mut() {
                Some(last) if x - last[1] <= merge_tol => last[1] = x,
                _ => out.push([x, x]),
            }
        }
        Ok(Self { intervals: out })
    }

    pub fn intervals(&self) -> &[[f64; 2]] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// `(inf F, sup F)`.
    pub fn edges(&self) -> Result<(f64, f64)> {
        match (self.intervals.first(), self.intervals.last()) {
            (Some(f), Some(l)) => Ok((f[0], l[1])),
            _ => Err(Error::EmptySet),
        }
    }

    /// Bounded components of the complement, in increasing order.
    pub fn gaps(&self) -> Result<Vec<Gap>> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(self.intervals.windows(2).map(|w| Gap { a: w[0][1], b: w[1][0] }).collect())
    }

    pub fn contains(&self, x: f64) -> bool {
        let k = self.intervals.partition_point(|iv| iv[1] < x);
        k < self.intervals.len() && self.intervals[k][0] <= x
    }

    /// True iff the open interval `(lo, hi)` lies inside the set.
    pub fn covers_open(&self, lo: f64, hi: f64) -> bool {
        let k = self.intervals.partition_point(|iv| iv[1] <= lo);
        k < self.intervals.len() && self.intervals[k][0] <= lo && self.intervals[k][1] >= hi
    }

    /// True iff the set meets the open interval `(lo, hi)`.
    pub fn hits_open(&self, lo: f64, hi: f64) -> bool {
        let k = self.intervals.partition_point(|iv| iv[1] <= lo);
        k < self.intervals.len() && self.intervals[k][0] < hi
    }

    pub fn intersects(&self, other: &CompactSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.len() && j < other.len() {
            let (x, y) = (self.intervals[i], other.intervals[j]);
            if x[0] <= y[1] && y[0] <= x[1] {
                return true;
            }
            if x[1] < y[1] {
                i += 1;
            } else {
                j += 1;
            }
        }
        false
    }

    pub fn dist_point(&self, x: f64) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        let k = self.intervals.partition_point(|iv| iv[1] < x);
        let mut d = f64::INFINITY;
        if k < self.len() {
            d = (self.intervals[k][0] - x).max(0.0);
        }
        if k > 0 {
            d = d.min(x - self.intervals[k - 1][1]);
        }
        Ok(d)
    }

    /// Exact Hausdorff distance.
    pub fn hausdorff(&self, other: &CompactSet) -> Result<f64> {
        if self.is_empty() || other.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(excess(self, other).max(excess(other, self)))
    }

    pub fn in_nbhd(&self, nbhd: &HitAndMissNbhd) -> bool {
        !self.intersects(&nbhd.miss) && nbhd.hits.iter().all(|&(lo, hi)| self.hits_open(lo, hi))
    }

    /// Exact image `p(F)`.
    pub fn poly_image(&self, p: &Poly2) -> Result<CompactSet> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        let pieces = self.intervals.iter().map(|iv| {
            let (lo, hi) = p.range_on(iv[0], iv[1]);
            [lo, hi]
        });
        Self::normalized(pieces.collect())
    }

    /// `max |p|` over the set, i.e. `‖p(A)‖` when the set is `σ(A)`.
    pub fn abs_max(&self, p: &Poly2) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(self.intervals.iter().map(|iv| p.abs_max_on(iv[0], iv[1])).fold(0.0, f64::max))
    }

    pub fn union(&self, other: &CompactSet) -> CompactSet {
        let mut pieces = self.intervals.clone();
        pieces.extend_from_slice(&other.intervals);
        Self::normalized(pieces).expect("members are valid")
    }

    /// Closes every gap of width `<= tol`.
    pub fn close_gaps(&self, tol: f64) -> CompactSet {
        let mut out: Vec<[f64; 2]> = Vec::with_capacity(self.len());
        for &iv in &self.intervals {
            match out.last_mut() {
                Some(last) if iv[0] - last[1] <= tol => last[1] = last[1].max(iv[1]),
                _ => out.push(iv),
            }
        }
        Self { intervals: out }
    }

    pub fn shifted(&self, delta: f64) -> CompactSet {
        Self { intervals: self.intervals.iter().map(|iv| [iv[0] + delta, iv[1] + delta]).collect() }
    }

    pub fn scaled(&self, factor: f64) -> CompactSet {
        let pieces = self.intervals.iter().map(|iv| {
            let (a, b) = (iv[0] * factor, iv[1] * factor);
            [a.min(b), a.max(b)]
        });
        Self::normalized(pieces.collect()).expect("finite scaling")
    }

    /// One `lo,hi` row per interval.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("lo,hi\n");
        for iv in &self.intervals {
            s.push_str(&format!("{},{}\n", iv[0], iv[1]));
        }
        s
    }

    /// Parses `lo,hi` rows; a header line and `#` comments are skipped.
    pub fn from_csv(text: &str) -> Result<CompactSet> {
        let mut rows = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') || line.starts_with("lo") {
                continue;
            }
            let mut it = line.split(',').map(|f| f.trim().parse::<f64>());
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(lo)), Some(Ok(hi)), None) => rows.push([lo, hi]),
                _ => return Err(Error::InvalidIntervals(format!("bad CSV row `{line}`"))),
            }
        }
        Self::from_intervals(rows)
    }
}

/// `sup_{x∈A} dist(x, B)`.
///
/// `dist(·, B)` is piecewise linear on each interval of `A`, so its maximum sits
/// at an endpoint of `A` or at the midpoint of a gap of `B` that `A` contains.
/// Candidates are produced in increasing order and `B` is walked once.
fn excess(a: &CompactSet, b: &CompactSet) -> f64 {
    let bi = &b.intervals;
    let mut j = 0; // first interval of B with hi >= x
    let mut g = 0; // next gap of B to consider
    let mut best: f64 = 0.0;
    let mut visit = |x: f64, j: &mut usize| {
        while *j < bi.len() && bi[*j][1] < x {
            *j += 1;
        }
        let mut d = f64::INFINITY;
        if *j < bi.len() {
            d = (bi[*j][0] - x).max(0.0);
        }
        if *j > 0 {
            d = d.min(x - bi[*j - 1][1]);
        }
        best = best.max(d);
    };
    for iv in &a.intervals {
        visit(iv[0], &mut j);
        while g + 1 < bi.len() && 0.5 * (bi[g][1] + bi[g + 1][0]) <= iv[1] {
            let mid = 0.5 * (bi[g][1] + bi[g + 1][0]);
            if mid >= iv[0] {
                visit(mid, &mut j);
            }
            g += 1;
        }
        visit(iv[1], &mut j);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(iv: &[[f64; 2]]) -> CompactSet {
        CompactSet::from_intervals(iv.to_vec()).unwrap()
    }

    #[test]
    fn from_points_spacing_rule() {
        let f = CompactSet::from_points(&[0.0, 0.1, 0.2, 5.0, 5.1], 0.5).unwrap();
        assert_eq!(f.intervals(), &[[0.0, 0.2], [5.0, 5.1]]);
        assert_eq!(CompactSet::from_points(&[3.0], 1e-9).unwrap().intervals(), &[[3.0, 3.0]]);
        assert!(CompactSet::from_points(&[], 0.1).unwrap().is_empty());
        assert!(matches!(CompactSet::from_points(&[1.0, 0.0], 0.1), Err(Error::UnsortedPoints { index: 1 })));
        assert!(CompactSet::from_points(&[1.0], 0.0).is_err());
    }

    #[test]
    fn gaps_and_edges() {
        let f = set(&[[0.0, 1.0], [2.0, 3.0]]);
        assert_eq!(f.gaps().unwrap(), vec![Gap { a: 1.0, b: 2.0 }]);
        assert_eq!(f.edges().unwrap(), (0.0, 3.0));
        assert!(set(&[[-2.0, 2.0]]).gaps().unwrap().is_empty());
        assert!(matches!(CompactSet::empty().gaps(), Err(Error::EmptySet)));
        assert!(CompactSet::empty().edges().is_err());
    }

    #[test]
    fn hausdorff_small_cases() {
        let f = set(&[[0.0, 1.0]]);
        let g = set(&[[2.0, 3.0]]);
        assert_eq!(f.hausdorff(&g).unwrap(), 2.0);
        assert_eq!(f.hausdorff(&f).unwrap(), 0.0);
        // the gap midpoint of the second set is the farthest point of the first
        let h = set(&[[0.0, 1.0], [3.0, 4.0]]);
        let k = set(&[[0.0, 4.0]]);
        assert_eq!(k.hausdorff(&h).unwrap(), 1.0);
        assert!(f.hausdorff(&CompactSet::empty()).is_err());
    }

    #[test]
    fn dist_point_cases() {
        assert_eq!(set(&[[0.0, 1.0]]).dist_point(0.5).unwrap(), 0.0);
        assert_eq!(set(&[[0.0, 1.0], [2.0, 3.0]]).dist_point(1.5).unwrap(), 0.5);
        assert_eq!(set(&[[0.0, 1.0]]).dist_point(-2.0).unwrap(), 2.0);
        assert_eq!(set(&[[0.0, 1.0]]).dist_point(4.0).unwrap(), 3.0);
    }

    #[test]
    fn hit_and_miss() {
        let f = set(&[[0.0, 1.0]]);
        let n = HitAndMissNbhd::new(set(&[[2.0, 3.0]]), vec![(0.4, 0.6)]).unwrap();
        assert!(f.in_nbhd(&n));
        let n = HitAndMissNbhd::new(set(&[[0.5, 0.6]]), vec![]).unwrap();
        assert!(!f.in_nbhd(&n));
        // touching an open hit interval at its boundary is not a hit
        let n = HitAndMissNbhd::new(CompactSet::empty(), vec![(1.0, 2.0)]).unwrap();
        assert!(!f.in_nbhd(&n));
        assert!(HitAndMissNbhd::new(CompactSet::empty(), vec![(1.0, 1.0)]).is_err());
    }

    #[test]
    fn poly_images() {
        let sq = Poly2::new(0.0, 0.0, 1.0);
        assert_eq!(set(&[[-1.0, 1.0]]).poly_image(&sq).unwrap().intervals(), &[[0.0, 1.0]]);
        let id = Poly2::new(0.0, 1.0, 0.0);
        assert_eq!(set(&[[0.0, 1.0]]).poly_image(&id).unwrap().intervals(), &[[0.0, 1.0]]);
        // folding merges the images of symmetric pieces
        let f = set(&[[-2.0, -1.0], [1.0, 2.0]]);
        assert_eq!(f.poly_image(&sq).unwrap().intervals(), &[[1.0, 4.0]]);
    }

    #[test]
    fn csv_round_trip() {
        let f = set(&[[-1.5, 0.25], [1.0, 1.0]]);
        let back = CompactSet::from_csv(&f.to_csv()).unwrap();
        assert_eq!(back, f);
        assert!(CompactSet::from_csv("lo,hi\n1,2,3\n").is_err());
    }

    #[test]
    fn json_shape_and_validation() {
        let f = set(&[[0.0, 1.0], [2.0, 3.0]]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"intervals":[[0.0,1.0],[2.0,3.0]]}"#);
        assert!(serde_json::from_str::<CompactSet>(r#"{"intervals":[[0,2],[1,3]]}"#).is_err());
    }

    #[test]
    fn close_gaps_and_covers() {
        let f = set(&[[0.0, 1.0], [1.0 + 1e-13, 2.0], [3.0, 4.0]]);
        let g = f.close_gaps(1e-10);
        assert_eq!(g.len(), 2);
        assert!(g.covers_open(0.5, 1.5));
        assert!(!g.covers_open(1.5, 3.5));
        assert!(g.contains(3.0) && !g.contains(2.5));
    }
}
