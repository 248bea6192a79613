use rayon::prelude::*;
use serde::Serialize;

use super::holder::{exact_spectra, hausdorff_pairs, phi_table, sup_differences, HolderEstimate, NOISE_FLOOR};
use super::tips::{GapTip, TipKind};
use super::tracking::{GapTrack, TrackSample};
use super::{ser_f64, SpectrumTrace};
use crate::error::{Error, Result};
use crate::hyperspace::CompactSet;
use crate::models::{ball_probes, edge_probes, sample_p2, OperatorField, Param, DEFAULT_PER_AXIS};
use crate::operators::Poly2;

/// Multiplicative slack on every bound: `lhs ≤ rhs · (1 + SLACK)`.
pub const SLACK: f64 = 1e-6;

/// Hölder data feeding the bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundConstants {
    /// Estimate of `C_{4m²+2}`.
    #[serde(serialize_with = "ser_f64")]
    pub c_main: f64,
    /// Estimate of `C_{1+m}`.
    #[serde(serialize_with = "ser_f64")]
    pub c_edge: f64,
    #[serde(serialize_with = "ser_f64")]
    pub alpha: f64,
}

/// Constants together with the fit that chose `α`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConstantEstimate {
    pub constants: BoundConstants,
    pub fit: HolderEstimate,
    pub m: f64,
    pub n_main_polys: usize,
    pub n_edge_polys: usize,
}

/// Ball probes `4m² − (z − λ)²` centred at every interval endpoint, every gap
/// midpoint and both gap third-points of every spectrum in the trace.
///
/// These are the polynomials the bound proofs evaluate, so adding them to the
/// sample makes the sampled constants sharp for the quantities being checked.
pub fn spectral_probes(trace: &SpectrumTrace, m: f64) -> Result<Vec<Poly2>> {
    let mut centers = Vec::new();
    for s in trace.spectra() {
        for iv in s.intervals() {
            centers.extend_from_slice(iv);
        }
        for g in s.gaps()? {
            let w = g.width();
            centers.extend([g.center(), g.a + w / 3.0, g.b - w / 3.0]);
        }
    }
    centers.sort_by(f64::total_cmp);
    centers.dedup();
    Ok(ball_probes(m, &centers))
}

/// Sup-based constants at the regression exponent of the main family.
///
/// The main family is the deterministic `𝒫₂(4m²+2)` sample plus the spectral
/// probes; the edge family is the `𝒫₂(1+m)` sample plus `m ∓ z`. Spectra come
/// from the field's operators when given, otherwise from the trace itself.
pub fn estimate_constants(trace: &SpectrumTrace, field: Option<&OperatorField>) -> Result<ConstantEstimate> {
    let m = trace.m();
    let spectra: Vec<CompactSet> = match field {
        Some(f) => exact_spectra(f, trace.grid())?,
        None => trace.spectra().to_vec(),
    };
    let mut main = sample_p2(4.0 * m * m + 2.0, DEFAULT_PER_AXIS)?;
    main.extend(spectral_probes(trace, m)?);
    let mut edge = sample_p2(1.0 + m, DEFAULT_PER_AXIS)?;
    edge.extend(edge_probes(m));

    let main_pairs = sup_differences(trace.grid(), &phi_table(&spectra, &main)?);
    let edge_pairs = sup_differences(trace.grid(), &phi_table(&spectra, &edge)?);
    let fit = HolderEstimate::fit(&main_pairs)?;
    let constants = if fit.is_degenerate() {
        BoundConstants { c_main: 0.0, c_edge: HolderEstimate::sup_constant_at(&edge_pairs, 1.0).max(0.0), alpha: f64::INFINITY }
    } else {
        BoundConstants {
            c_main: fit.sup_constant,
            c_edge: HolderEstimate::sup_constant_at(&edge_pairs, fit.alpha),
            alpha: fit.alpha,
        }
    };
    Ok(ConstantEstimate { constants, fit, m, n_main_polys: main.len(), n_edge_polys: edge.len() })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundViolation {
    /// `"i"`, `"ii"`, `"iii"` or `"iv"`.
    pub check: &'static str,
    pub s: Param,
    pub t: Param,
    #[serde(serialize_with = "ser_f64")]
    pub lhs: f64,
    #[serde(serialize_with = "ser_f64")]
    pub rhs: f64,
    pub detail: String,
}

/// Summary of one inequality over all the places it applies.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub check: &'static str,
    pub statement: &'static str,
    pub n_checked: usize,
    pub n_violations: usize,
    /// `min ln(rhs / lhs)` over checked cases with `lhs` above the noise floor.
    #[serde(serialize_with = "ser_f64")]
    pub min_log_margin: f64,
}

/// Width law near one gap tip.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosureReport {
    pub index: usize,
    pub t: Param,
    #[serde(serialize_with = "ser_f64")]
    pub c: f64,
    pub kind: TipKind,
    pub n_samples: usize,
    /// Samples whose gap midpoint lies in the spectrum at the tip, where the
    /// width bound applies.
    pub n_applicable: usize,
    /// Fit of `width ≈ K d(t, t_tip)^β`; `None` with fewer than four samples.
    pub width_fit: Option<HolderEstimate>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub constants: BoundConstants,
    pub checks: Vec<BoundCheck>,
    pub closures: Vec<ClosureReport>,
    pub violations: Vec<BoundViolation>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Checker {
    check: BoundCheck,
    violations: Vec<BoundViolation>,
}

impl Checker {
    fn new(check: &'static str, statement: &'static str) -> Self {
        Self {
            check: BoundCheck { check, statement, n_checked: 0, n_violations: 0, min_log_margin: f64::INFINITY },
            violations: Vec::new(),
        }
    }

    /// Compares `lhs ≤ rhs (1 + SLACK)` in log space, `ln rhs` given; `lhs` at or
    /// below `floor` is unresolved and always passes.
    fn record(&mut self, lhs: f64, log_rhs: f64, floor: f64, s: Param, t: Param, detail: impl FnOnce() -> String) {
        self.check.n_checked += 1;
        if lhs <= floor {
            return;
        }
        let margin = log_rhs - lhs.ln();
        self.check.min_log_margin = self.check.min_log_margin.min(margin);
        if margin < -SLACK.ln_1p() {
            self.check.n_violations += 1;
            self.violations.push(BoundViolation { check: self.check.check, s, t, lhs, rhs: log_rhs.exp(), detail: detail() });
        }
    }
}

/// `ln(k · C^p · d^q)` from `ln d`, with `C = 0` giving `−∞`.
fn log_rhs(k: f64, c: f64, p: f64, q: f64, log_d: f64) -> f64 {
    if c <= 0.0 {
        return f64::NEG_INFINITY;
    }
    k.ln() + p * c.ln() + if q.is_infinite() { f64::NEG_INFINITY } else { q * log_d }
}

/// Checks, with constants `C = c_main`, `C' = c_edge`:
/// (i) `d_H(σ_s, σ_t) ≤ √C d^{α/2}` for all pairs;
/// (ii) `|Δ min|, |Δ max| ≤ C' d^α` for all pairs;
/// (iii) along each track, between adjacent samples where both edges moved by less
/// than a sixth of the width `w`, edge increments `≤ 3C d^α / w`;
/// (iv) at each tip, `w_t ≤ 2√C d(t, t_tip)^{α/2}` wherever the gap midpoint at `t`
/// lies in the spectrum at the tip.
pub fn verify_bounds(trace: &SpectrumTrace, tracks: &[GapTrack], tips: &[GapTip], k: &BoundConstants) -> Result<BoundReport> {
    if !(k.c_main >= 0.0 && k.c_edge >= 0.0 && k.alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("bad bound constants {k:?}")));
    }
    let grid = trace.grid();
    let spectra = trace.spectra();
    let root_floor = NOISE_FLOOR.sqrt();

    let mut c1 = Checker::new("i", "d_H(s,t) <= sqrt(C_main) d^(alpha/2)");
    for (idx, (ld, dh)) in hausdorff_pairs(trace)?.into_iter().enumerate() {
        let (i, j) = pair_index(idx, trace.len());
        c1.record(dh, log_rhs(1.0, k.c_main, 0.5, 0.5 * k.alpha, ld), root_floor, trace.param(i), trace.param(j), || {
            format!("d = {:e}", ld.exp())
        });
    }

    let mut c2 = Checker::new("ii", "|d min|, |d max| <= C_edge d^alpha");
    let edges = spectra.iter().map(|s| s.edges()).collect::<Result<Vec<_>>>()?;
    let n = trace.len();
    let rows: Vec<(usize, usize, f64, f64)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let edges = &edges;
            (i + 1..n).map(move |j| (i, j, grid.log_dist(i, j), (edges[i].0 - edges[j].0).abs().max((edges[i].1 - edges[j].1).abs())))
        })
        .collect();
    for (i, j, ld, jump) in rows {
        c2.record(jump, log_rhs(1.0, k.c_edge, 1.0, k.alpha, ld), NOISE_FLOOR, trace.param(i), trace.param(j), || {
            format!("d = {:e}", ld.exp())
        });
    }

    let mut c3 = Checker::new("iii", "edge increment <= 3 C_main d^alpha / width");
    for tr in tracks {
        for w in tr.samples.windows(2) {
            let (g0, g1) = (w[0].gap, w[1].gap);
            let width = g0.width();
            let (da, db) = ((g1.a - g0.a).abs(), (g1.b - g0.b).abs());
            if da >= width / 6.0 || db >= width / 6.0 {
                continue;
            }
            let ld = grid.log_dist(w[0].index, w[1].index);
            c3.record(da.max(db), log_rhs(3.0 / width, k.c_main, 1.0, k.alpha, ld), NOISE_FLOOR, w[0].t, w[1].t, || {
                format!("gap ({}, {}) -> ({}, {})", g0.a, g0.b, g1.a, g1.b)
            });
        }
    }

    let mut c4 = Checker::new("iv", "width(t) <= 2 sqrt(C_main) d(t, t_tip)^(alpha/2)");
    let mut closures = Vec::new();
    for tip in tips {
        let at_tip = &spectra[tip.index];
        let samples: Vec<_> = tip_samples(tip, tracks);
        let mut n_applicable = 0;
        let mut fit_pairs = Vec::new();
        for s in &samples {
            let ld = grid.log_dist(s.index, tip.index);
            fit_pairs.push((ld, s.gap.width()));
            if !at_tip.contains(s.gap.center()) {
                continue;
            }
            n_applicable += 1;
            c4.record(s.gap.width(), log_rhs(2.0, k.c_main, 0.5, 0.5 * k.alpha, ld), root_floor, s.t, tip.t, || {
                format!("gap ({}, {}) near tip c = {}", s.gap.a, s.gap.b, tip.c)
            });
        }
        let width_fit = if fit_pairs.len() >= 4 { HolderEstimate::fit(&fit_pairs).ok() } else { None };
        closures.push(ClosureReport {
            index: tip.index,
            t: tip.t,
            c: tip.c,
            kind: tip.kind,
            n_samples: samples.len(),
            n_applicable,
            width_fit,
        });
    }

    let mut checks = Vec::new();
    let mut violations = Vec::new();
    for c in [c1, c2, c3, c4] {
        checks.push(c.check);
        violations.extend(c.violations);
    }
    Ok(BoundReport { constants: *k, checks, closures, violations })
}

/// `(i, j)` of the `idx`-th pair `i < j` in row-major order.
fn pair_index(idx: usize, n: usize) -> (usize, usize) {
    let mut rest = idx;
    for i in 0..n {
        let row = n - 1 - i;
        if rest < row {
            return (i, i + 1 + rest);
        }
        rest -= row;
    }
    unreachable!("pair index {idx} out of range for {n} points")
}

/// Samples that approach a tip: for closures and openings, every sample of the
/// contributing tracks; for accumulations, each family member at its birth.
fn tip_samples(tip: &GapTip, tracks: &[GapTrack]) -> Vec<TrackSample> {
    match tip.kind {
        TipKind::Accumulation => tip.tracks.iter().map(|&k| tracks[k].samples[0]).collect(),
        TipKind::Closure | TipKind::Opening => tip
            .tracks
            .iter()
            .flat_map(|&k| tracks[k].samples.iter().copied())
            .filter(|s| s.index != tip.index)
            .collect(),
    }
}
