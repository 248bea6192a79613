use rayon::prelude::*;
use serde::Serialize;

use super::{ser_f64, SpectrumTrace};
use crate::error::{Error, Result};
use crate::hyperspace::CompactSet;
use crate::models::{at_param, OperatorField, ParameterSpace};
use crate::operators::Poly2;

/// Differences below this are treated as zero in every fit.
pub const NOISE_FLOOR: f64 = 1e-12;

const MIN_POINTS: usize = 4;

/// Power-law fit `value ≈ C d^α` over pairs.
///
/// `constant` is the regression intercept; `sup_constant` is the smallest `C`
/// that makes `value ≤ C d^α` hold on every retained pair at the fitted `α`.
/// A degenerate fit (no difference above the noise floor) has `α = ∞` and `C = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HolderEstimate {
    #[serde(serialize_with = "ser_f64")]
    pub alpha: f64,
    #[serde(serialize_with = "ser_f64")]
    pub constant: f64,
    #[serde(serialize_with = "ser_f64")]
    pub sup_constant: f64,
    #[serde(serialize_with = "ser_f64")]
    pub r_squared: f64,
    pub n_points: usize,
    /// `(min d, max d)` over the retained pairs, as logarithms.
    pub log_scale_range: (f64, f64),
}

impl HolderEstimate {
    pub fn degenerate() -> Self {
        Self {
            alpha: f64::INFINITY,
            constant: 0.0,
            sup_constant: 0.0,
            r_squared: f64::NAN,
            n_points: 0,
            log_scale_range: (f64::NAN, f64::NAN),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.alpha.is_infinite()
    }

    /// Least squares on `(ln d, ln value)`; values below [`NOISE_FLOOR`] and
    /// pairs with `d = 0` are discarded.
    pub fn fit(pairs: &[(f64, f64)]) -> Result<Self> {
        let pts: Vec<(f64, f64)> = pairs
            .iter()
            .filter(|(ld, v)| ld.is_finite() && *v >= NOISE_FLOOR && v.is_finite())
            .map(|&(ld, v)| (ld, v.ln()))
            .collect();
        if pts.is_empty() {
            return Ok(Self::degenerate());
        }
        if pts.len() < MIN_POINTS {
            return Err(Error::InsufficientData(format!("{} pairs above the noise floor, need {MIN_POINTS}", pts.len())));
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
        if sxx <= 0.0 {
            return Err(Error::InsufficientData("all pairs at the same distance".into()));
        }
        let alpha = sxy / sxx;
        let intercept = my - alpha * mx;
        let ss_res: f64 = pts.iter().map(|p| (p.1 - intercept - alpha * p.0).powi(2)).sum();
        let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
        let sup_log = pts.iter().map(|p| p.1 - alpha * p.0).fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)));
        Ok(Self {
            alpha,
            constant: intercept.exp(),
            sup_constant: sup_log.exp(),
            r_squared,
            n_points: pts.len(),
            log_scale_range: (lo, hi),
        })
    }

    /// Smallest `C` with `value ≤ C d^α` on the retained pairs, at a given `α`.
    pub fn sup_constant_at(pairs: &[(f64, f64)], alpha: f64) -> f64 {
        let best = pairs
            .iter()
            .filter(|(ld, v)| ld.is_finite() && *v >= NOISE_FLOOR)
            .map(|&(ld, v)| v.ln() - alpha * ld)
            .fold(f64::NEG_INFINITY, f64::max);
        best.exp()
    }
}

/// `Φ_p(t) = ‖p(A_t)‖` for every grid point (rows) and polynomial (columns).
pub fn phi_table(spectra: &[CompactSet], polys: &[Poly2]) -> Result<Vec<Vec<f64>>> {
    spectra.par_iter().map(|s| polys.iter().map(|p| s.abs_max(p)).collect::<Result<Vec<f64>>>()).collect()
}

/// `(ln d(s,t), max_p |Φ_p(s) − Φ_p(t)|)` for all pairs `s < t`.
pub(crate) fn sup_differences(grid: &ParameterSpace, phi: &[Vec<f64>]) -> Vec<(f64, f64)> {
    let n = grid.len();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            (i + 1..n).map(move |j| {
                let d = phi[i].iter().zip(&phi[j]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                (grid.log_dist(i, j), d)
            })
        })
        .collect()
}

fn check_inputs(n: usize, polys: &[Poly2], big_m: f64) -> Result<()> {
    if n < MIN_POINTS {
        return Err(Error::InsufficientData(format!("{n} grid points, need {MIN_POINTS}")));
    }
    if polys.is_empty() {
        return Err(Error::InsufficientData("no polynomials".into()));
    }
    if let Some(p) = polys.iter().find(|p| p.norm1() > big_m * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter(format!("{p:?} has ‖p‖₁ = {} > M = {big_m}", p.norm1())));
    }
    Ok(())
}

/// Hölder fit of `t ↦ Φ_p(t)` over the grid, uniformly over `polys ⊂ 𝒫₂(M)`.
pub fn p2_modulus(field: &OperatorField, grid: &ParameterSpace, big_m: f64, polys: &[Poly2]) -> Result<HolderEstimate> {
    check_inputs(grid.len(), polys, big_m)?;
    let spectra = exact_spectra(field, grid)?;
    let phi = phi_table(&spectra, polys)?;
    HolderEstimate::fit(&sup_differences(grid, &phi))
}

/// Unmerged spectra of the field's operators (each eigenvalue kept as a point).
pub(crate) fn exact_spectra(field: &OperatorField, grid: &ParameterSpace) -> Result<Vec<CompactSet>> {
    grid.points()
        .par_iter()
        .map(|t| field.at(t).and_then(|a| a.exact_spectrum()).map_err(|e| at_param(t, e)))
        .collect()
}

/// Same as [`p2_modulus`] for a trace of sets (no operators), via `max |p(F_t)|`.
pub fn p2_modulus_sets(trace: &SpectrumTrace, big_m: f64, polys: &[Poly2]) -> Result<HolderEstimate> {
    check_inputs(trace.len(), polys, big_m)?;
    let phi = phi_table(trace.spectra(), polys)?;
    HolderEstimate::fit(&sup_differences(trace.grid(), &phi))
}

/// Hölder fit of `t ↦ σ(A_t)` in the Hausdorff metric.
pub fn spectrum_modulus(trace: &SpectrumTrace) -> Result<HolderEstimate> {
    if trace.len() < MIN_POINTS {
        return Err(Error::InsufficientData(format!("{} trace entries, need {MIN_POINTS}", trace.len())));
    }
    HolderEstimate::fit(&hausdorff_pairs(trace)?)
}

/// `(ln d(s,t), d_H(F_s, F_t))` for all pairs `s < t`, in index order.
pub(crate) fn hausdorff_pairs(trace: &SpectrumTrace) -> Result<Vec<(f64, f64)>> {
    let n = trace.len();
    let s = trace.spectra();
    let g = trace.grid();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| (i + 1..n).map(move |j| Ok((g.log_dist(i, j), s[i].hausdorff(&s[j])?))))
        .collect()
}
