use serde::Serialize;

use super::tips::detect_gap_tips;
use super::tracking::{track_gaps, GapTrack, TrackOptions, TrackSample};
use super::{ser_f64, SpectrumTrace};
use crate::error::Result;
use crate::hyperspace::Gap;
use crate::models::Param;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeViolation {
    /// `"G1"`, `"G2"` or `"G3"`.
    pub check: &'static str,
    pub index: usize,
    pub t: Param,
    pub detail: String,
    #[serde(serialize_with = "ser_f64")]
    pub value: f64,
    #[serde(serialize_with = "ser_f64")]
    pub bound: f64,
}

/// Sampled surrogates of the three edge-continuity conditions. Report only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeContinuityReport {
    pub eps: f64,
    /// `(C, α)` of the modulus `ω(d) = C d^α` used by G1, if any; otherwise `ω ≡ eps`.
    pub modulus: Option<(f64, f64)>,
    pub g1_checked: usize,
    pub g2_checked: usize,
    pub g3_checked: usize,
    pub violations: Vec<EdgeViolation>,
}

impl EdgeContinuityReport {
    pub fn count(&self, check: &str) -> usize {
        self.violations.iter().filter(|v| v.check == check).count()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// G1: extreme edges move by at most `ω(d)` between adjacent grid points.
/// G2: every gap wider than `2 eps` has a partner in each neighbouring spectrum
/// with both edges within `eps`.
/// G3: where a track stops, its edges extrapolated linearly in `d(t, t_limit)`
/// land (within `eps`) on a gap of the limit spectrum or on a detected tip.
pub fn check_edge_continuity(trace: &SpectrumTrace, eps: f64, modulus: Option<(f64, f64)>) -> Result<EdgeContinuityReport> {
    let spectra = trace.spectra();
    let grid = trace.grid();
    let n = trace.len();
    let mut violations = Vec::new();
    let mut rep = EdgeContinuityReport { eps, modulus, g1_checked: 0, g2_checked: 0, g3_checked: 0, violations: Vec::new() };

    let edges = spectra.iter().map(|s| s.edges()).collect::<Result<Vec<_>>>()?;
    for i in 0..n.saturating_sub(1) {
        let ld = grid.log_dist(i, i + 1);
        let bound = match modulus {
            Some((c, a)) => c * (a * ld).exp(),
            None => eps,
        };
        for (name, x, y) in [("min", edges[i].0, edges[i + 1].0), ("max", edges[i].1, edges[i + 1].1)] {
            rep.g1_checked += 1;
            let jump = (x - y).abs();
            if jump > bound {
                violations.push(EdgeViolation {
                    check: "G1",
                    index: i + 1,
                    t: trace.param(i + 1),
                    detail: format!("{name} jumps from {x} to {y}"),
                    value: jump,
                    bound,
                });
            }
        }
    }

    let gaps = spectra.iter().map(|s| s.gaps()).collect::<Result<Vec<_>>>()?;
    for i in 0..n {
        for g in gaps[i].iter().filter(|g| g.width() > 2.0 * eps) {
            for j in [i.wrapping_sub(1), i + 1] {
                if j >= n {
                    continue;
                }
                rep.g2_checked += 1;
                let err = gaps[j]
                    .iter()
                    .map(|h| (g.a - h.a).abs().max((g.b - h.b).abs()))
                    .fold(f64::INFINITY, f64::min);
                if !(err < eps) {
                    violations.push(EdgeViolation {
                        check: "G2",
                        index: i,
                        t: trace.param(i),
                        detail: format!("gap ({}, {}) has no partner at {}", g.a, g.b, trace.param(j)),
                        value: err,
                        bound: eps,
                    });
                }
            }
        }
    }

    let tracks = track_gaps(trace, &TrackOptions::default())?;
    let tips = detect_gap_tips(&tracks, trace, eps);
    for tr in &tracks {
        for (limit, near, far) in track_limits(tr, n) {
            rep.g3_checked += 1;
            let (a, b) = extrapolate_edges(trace, limit, near, far);
            let on_gap = gaps[limit].iter().any(|h| (h.a - a).abs() < eps && (h.b - b).abs() < eps);
            let (lo, hi) = (a.min(b) - eps, a.max(b) + eps);
            let on_tip = tips.iter().any(|tp| tp.index == limit && tp.c >= lo && tp.c <= hi);
            if !(on_gap || on_tip) {
                violations.push(EdgeViolation {
                    check: "G3",
                    index: limit,
                    t: trace.param(limit),
                    detail: format!("edges extrapolate to ({a}, {b}), neither a gap nor a tip"),
                    value: b - a,
                    bound: eps,
                });
            }
        }
    }
    rep.violations = violations;
    Ok(rep)
}

/// `(limit index, nearest sample, next sample)` at each end of a track that stops inside the grid.
fn track_limits(tr: &GapTrack, n: usize) -> Vec<(usize, TrackSample, TrackSample)> {
    let s = &tr.samples;
    let k = s.len();
    let mut out = Vec::new();
    if k >= 2 && s[k - 1].index + 1 < n {
        out.push((s[k - 1].index + 1, s[k - 1], s[k - 2]));
    }
    if k >= 2 && s[0].index > 0 {
        out.push((s[0].index - 1, s[0], s[1]));
    }
    out
}

fn extrapolate_edges(trace: &SpectrumTrace, limit: usize, near: TrackSample, far: TrackSample) -> (f64, f64) {
    let g = trace.grid();
    let (d1, d2) = (g.dist(near.index, limit), g.dist(far.index, limit));
    let lin = |x1: f64, x2: f64| if d2 > d1 { x1 - (x2 - x1) * d1 / (d2 - d1) } else { x1 };
    let Gap { a: a1, b: b1 } = near.gap;
    let Gap { a: a2, b: b2 } = far.gap;
    (lin(a1, a2), lin(b1, b2))
}
