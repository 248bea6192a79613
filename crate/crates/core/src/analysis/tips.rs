use serde::Serialize;

use super::tracking::{extrapolate_tip, GapTrack};
use super::SpectrumTrace;
use crate::models::Param;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TipKind {
    /// A tracked gap closes onto `c`.
    Closure,
    /// A tracked gap opens out of `c`.
    Opening,
    /// Ever narrower gaps, born later and later, pile up at `c` in the last spectrum.
    Accumulation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapTip {
    pub c: f64,
    pub index: usize,
    pub t: Param,
    /// `(c − δ, c + δ)` lies in the spectrum at `t`.
    pub isolated: bool,
    pub kind: TipKind,
    /// Indices of the tracks that produce the tip.
    pub tracks: Vec<usize>,
}

const MIN_FAMILY: usize = 3;

/// Gap tips from closing and opening tracks, plus accumulation points of
/// gap families that survive to the end of the grid.
///
/// Tips at the same grid point closer than `delta` are reported once.
pub fn detect_gap_tips(tracks: &[GapTrack], trace: &SpectrumTrace, delta: f64) -> Vec<GapTip> {
    let mut raw: Vec<GapTip> = Vec::new();
    for (k, tr) in tracks.iter().enumerate() {
        if let Some(cl) = tr.closure() {
            raw.push(GapTip { c: cl.c, index: cl.index, t: cl.t, isolated: false, kind: TipKind::Closure, tracks: vec![k] });
        }
        if let Some(cl) = tr.opened_at {
            raw.push(GapTip { c: cl.c, index: cl.index, t: cl.t, isolated: false, kind: TipKind::Opening, tracks: vec![k] });
        }
    }
    if let Some(tip) = accumulation(tracks, trace) {
        raw.push(tip);
    }
    for tip in &mut raw {
        tip.isolated = trace.spectra()[tip.index].covers_open(tip.c - delta, tip.c + delta);
    }
    raw.sort_by(|x, y| x.index.cmp(&y.index).then(x.c.total_cmp(&y.c)));
    let mut out: Vec<GapTip> = Vec::new();
    for tip in raw {
        match out.iter_mut().find(|o| o.index == tip.index && (o.c - tip.c).abs() < delta) {
            Some(o) => o.tracks.extend(tip.tracks),
            None => out.push(tip),
        }
    }
    for tip in &mut out {
        tip.tracks.sort_unstable();
        tip.tracks.dedup();
    }
    out
}

/// Longest run, ending at the latest-born track, of tracks that persist to the
/// last grid point, born at strictly increasing indices with strictly shrinking widths.
fn accumulation(tracks: &[GapTrack], trace: &SpectrumTrace) -> Option<GapTip> {
    let end = trace.len() - 1;
    let mut alive: Vec<usize> = (0..tracks.len()).filter(|&k| tracks[k].last_index() == end).collect();
    alive.sort_by(|&x, &y| tracks[x].first_index().cmp(&tracks[y].first_index()).then(x.cmp(&y)));
    let mut family: Vec<usize> = Vec::new();
    for &k in alive.iter().rev() {
        match family.last() {
            None => family.push(k),
            Some(&j) => {
                let (a, b) = (&tracks[k], &tracks[j]);
                if a.first_index() < b.first_index() && a.last().gap.width() > b.last().gap.width() {
                    family.push(k);
                } else {
                    break;
                }
            }
        }
    }
    if family.len() < MIN_FAMILY {
        return None;
    }
    family.reverse();
    let n = family.len();
    let c = extrapolate_tip(&tracks[family[n - 2]].last().gap, &tracks[family[n - 1]].last().gap)?;
    Some(GapTip { c, index: end, t: trace.param(end), isolated: false, kind: TipKind::Accumulation, tracks: family })
}
