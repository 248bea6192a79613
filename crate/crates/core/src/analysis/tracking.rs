use serde::Serialize;

use super::SpectrumTrace;
use crate::error::{Error, Result};
use crate::hyperspace::{CompactSet, Gap};
use crate::models::Param;

/// Matching parameters; `None` picks the data-driven default.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrackOptions {
    /// Gaps whose centers are closer than this may be matched even without overlap.
    /// Default: half the smallest distance between adjacent gap centers in the first
    /// spectrum with at least two gaps.
    pub match_radius: Option<f64>,
    /// A gap narrower than this counts as closed. Default: `10 · merge_tol`.
    pub width_tol: Option<f64>,
    /// Matched widths must satisfy `max ≤ width_ratio · min + width_tol`.
    pub width_ratio: f64,
}

impl Default for TrackOptions {
    fn default() -> Self {
        Self { match_radius: None, width_tol: None, width_ratio: 4.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrackSample {
    pub index: usize,
    pub t: Param,
    pub gap: Gap,
}

/// A gap closing (or opening) at grid point `index`, onto spectral value `c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Closure {
    pub index: usize,
    pub t: Param,
    pub c: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TrackStatus {
    /// Neither closing nor closed where the track ends.
    Open,
    /// Still shrinking at the end of the grid.
    Closing,
    ClosedAt(Closure),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapTrack {
    pub samples: Vec<TrackSample>,
    pub status: TrackStatus,
    /// Where the gap opened, if it was born from a point of the previous spectrum.
    pub opened_at: Option<Closure>,
}

impl GapTrack {
    pub fn first_index(&self) -> usize {
        self.samples[0].index
    }

    pub fn last_index(&self) -> usize {
        self.samples[self.samples.len() - 1].index
    }

    pub fn last(&self) -> &TrackSample {
        &self.samples[self.samples.len() - 1]
    }

    pub fn widths(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.gap.width()).collect()
    }

    pub fn closure(&self) -> Option<Closure> {
        match self.status {
            TrackStatus::ClosedAt(c) => Some(c),
            _ => None,
        }
    }
}

/// Spectral value where a gap shrinking from `far` to `near` reaches zero width,
/// by linear extrapolation of the center against the width. `None` unless shrinking.
pub(crate) fn extrapolate_tip(far: &Gap, near: &Gap) -> Option<f64> {
    let (w1, w2) = (far.width(), near.width());
    if !(w2 < w1) {
        return None;
    }
    Some(near.center() + (near.center() - far.center()) * w2 / (w1 - w2))
}

/// A track end counts as closing only if the widths shrink over this many samples.
const SHRINK_RUN: usize = 3;

fn shrinking<'a>(samples: impl Iterator<Item = &'a TrackSample>) -> bool {
    let w: Vec<f64> = samples.map(|s| s.gap.width()).collect();
    w.windows(2).all(|p| p[1] < p[0])
}

fn default_radius(gaps: &[Vec<Gap>], spectra: &[CompactSet]) -> Result<f64> {
    if let Some(g) = gaps.iter().find(|g| g.len() >= 2) {
        let sep = g.windows(2).map(|w| w[1].center() - w[0].center()).fold(f64::INFINITY, f64::min);
        return Ok(0.5 * sep);
    }
    let (lo, hi) = spectra[0].edges()?;
    Ok(0.5 * (hi - lo))
}

/// Links the gaps of adjacent spectra into tracks.
///
/// Candidates must overlap or have centers closer than the match radius, and have
/// compatible widths. Assignment is greedy by center distance (ties go to the lower
/// center). Tracks are not continued past a gap narrower than the width tolerance.
pub fn track_gaps(trace: &SpectrumTrace, opts: &TrackOptions) -> Result<Vec<GapTrack>> {
    let spectra = trace.spectra();
    let gaps = spectra.iter().map(|s| s.gaps()).collect::<Result<Vec<_>>>()?;
    let radius = match opts.match_radius {
        Some(r) => r,
        None => default_radius(&gaps, spectra)?,
    };
    let width_tol = opts.width_tol.unwrap_or(10.0 * trace.merge_tol());
    if !(radius >= 0.0) || !(width_tol > 0.0) || !(opts.width_ratio >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tracking needs radius >= 0, width_tol > 0, width_ratio >= 1; got {radius}, {width_tol}, {}",
            opts.width_ratio
        )));
    }
    let sample = |i: usize, g: Gap| TrackSample { index: i, t: trace.param(i), gap: g };
    let mut tracks: Vec<Vec<TrackSample>> = gaps[0].iter().map(|&g| vec![sample(0, g)]).collect();
    // indices into `tracks` that may be extended from the current spectrum
    let mut active: Vec<usize> = (0..tracks.len()).filter(|&k| gaps[0][k].width() >= width_tol).collect();

    for i in 0..spectra.len() - 1 {
        let next = &gaps[i + 1];
        let mut cands: Vec<(f64, f64, usize, usize)> = Vec::new();
        for &k in &active {
            let g = tracks[k].last().map(|s| s.gap).unwrap_or(Gap { a: 0.0, b: 0.0 });
            let mut n_cand = 0;
            for (h_idx, h) in next.iter().enumerate() {
                let dc = (g.center() - h.center()).abs();
                let near = g.overlaps(h) || dc < radius;
                let (wmin, wmax) = (g.width().min(h.width()), g.width().max(h.width()));
                if near && wmax <= opts.width_ratio * wmin + width_tol {
                    cands.push((dc, g.center(), k, h_idx));
                    n_cand += 1;
                }
            }
            if n_cand > 1 {
                log::debug!("gap ({}, {}) at {} has {n_cand} candidates at {}", g.a, g.b, trace.param(i), trace.param(i + 1));
            }
        }
        cands.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.3.cmp(&y.3)));
        let mut used_track = vec![false; tracks.len()];
        let mut used_gap = vec![false; next.len()];
        for &(_, _, k, h) in &cands {
            if !used_track[k] && !used_gap[h] {
                used_track[k] = true;
                used_gap[h] = true;
                tracks[k].push(sample(i + 1, next[h]));
            }
        }
        for (h, &g) in next.iter().enumerate() {
            if !used_gap[h] {
                tracks.push(vec![sample(i + 1, g)]);
            }
        }
        active = (0..tracks.len())
            .filter(|&k| {
                let last = tracks[k].last().expect("tracks are non-empty");
                last.index == i + 1 && last.gap.width() >= width_tol
            })
            .collect();
    }

    let n = spectra.len();
    Ok(tracks
        .into_iter()
        .map(|samples| {
            let status = end_status(&samples, trace, width_tol, n);
            let opened_at = start_closure(&samples, trace, width_tol);
            GapTrack { samples, status, opened_at }
        })
        .collect())
}

fn end_status(samples: &[TrackSample], trace: &SpectrumTrace, width_tol: f64, n: usize) -> TrackStatus {
    let last = samples[samples.len() - 1];
    if last.gap.width() < width_tol {
        return TrackStatus::ClosedAt(Closure { index: last.index, t: last.t, c: last.gap.center() });
    }
    let k = samples.len();
    let tip = match k {
        1 => Some(last.gap.center()),
        _ if !shrinking(samples[k.saturating_sub(SHRINK_RUN)..].iter()) => None,
        _ => extrapolate_tip(&samples[k - 2].gap, &last.gap),
    };
    if last.index + 1 == n {
        return if samples.len() >= 2 && tip.is_some() { TrackStatus::Closing } else { TrackStatus::Open };
    }
    match tip {
        Some(c) if trace.spectra()[last.index + 1].contains(c) => {
            TrackStatus::ClosedAt(Closure { index: last.index + 1, t: trace.param(last.index + 1), c })
        }
        _ => TrackStatus::Open,
    }
}

fn start_closure(samples: &[TrackSample], trace: &SpectrumTrace, width_tol: f64) -> Option<Closure> {
    let first = samples[0];
    if first.gap.width() < width_tol {
        return Some(Closure { index: first.index, t: first.t, c: first.gap.center() });
    }
    if first.index == 0 {
        return None;
    }
    let tip = match samples.len() {
        1 => Some(first.gap.center()),
        k if !shrinking(samples[..k.min(SHRINK_RUN)].iter().rev()) => None,
        _ => extrapolate_tip(&samples[1].gap, &first.gap),
    }?;
    let prev = first.index - 1;
    trace.spectra()[prev].contains(tip).then(|| Closure { index: prev, t: trace.param(prev), c: tip })
}
