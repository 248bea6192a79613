//! Sweeps, Hölder fits, gap tracking, gap tips and the bound checks.

mod bounds;
mod edges;
mod holder;
mod tips;
mod tracking;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

pub use bounds::{
    estimate_constants, spectral_probes, verify_bounds, BoundCheck, BoundConstants, BoundReport, BoundViolation, ClosureReport,
    ConstantEstimate, SLACK,
};
pub use edges::{check_edge_continuity, EdgeContinuityReport, EdgeViolation};
pub use holder::{p2_modulus, p2_modulus_sets, phi_table, spectrum_modulus, HolderEstimate, NOISE_FLOOR};
pub use tips::{detect_gap_tips, GapTip, TipKind};
pub use tracking::{track_gaps, Closure, GapTrack, TrackOptions, TrackSample, TrackStatus};

use crate::error::{Error, Result};
use crate::hyperspace::CompactSet;
use crate::models::{at_param, CounterexampleFamily, OperatorField, Param, ParameterSpace};

/// Spectra along an ordered parameter grid.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumTrace {
    grid: ParameterSpace,
    spectra: Vec<CompactSet>,
    m: f64,
    merge_tol: f64,
}

impl SpectrumTrace {
    pub fn new(grid: ParameterSpace, spectra: Vec<CompactSet>, m: f64, merge_tol: f64) -> Result<Self> {
        if grid.len() != spectra.len() {
            return Err(Error::InsufficientData(format!("{} grid points but {} spectra", grid.len(), spectra.len())));
        }
        if grid.is_empty() {
            return Err(Error::InsufficientData("empty trace".into()));
        }
        for (t, s) in grid.points().iter().zip(&spectra) {
            let (lo, hi) = s.edges().map_err(|e| at_param(t, e))?;
            if lo < -m || hi > m {
                return Err(Error::InvalidParameter(format!("spectrum at {t} leaves [-{m}, {m}]")));
            }
        }
        Ok(Self { grid, spectra, m, merge_tol })
    }

    /// The counterexample sets as a trace over `ℕ ∪ {∞}`.
    pub fn from_family(fam: &CounterexampleFamily, merge_tol: f64) -> Result<Self> {
        Self::new(fam.grid.clone(), fam.sets.clone(), fam.config.m, merge_tol)
    }

    pub fn grid(&self) -> &ParameterSpace {
        &self.grid
    }

    pub fn spectra(&self) -> &[CompactSet] {
        &self.spectra
    }

    pub fn param(&self, i: usize) -> Param {
        self.grid.points()[i]
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn merge_tol(&self) -> f64 {
        self.merge_tol
    }

    pub fn len(&self) -> usize {
        self.spectra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spectra.is_empty()
    }

    /// Copy with spectrum `index` translated by `shift` (fault injection).
    pub fn with_shifted(&self, index: usize, shift: f64) -> Result<Self> {
        if index >= self.len() {
            return Err(Error::InvalidParameter(format!("fault index {index} outside trace of length {}", self.len())));
        }
        let mut out = self.clone();
        out.spectra[index] = out.spectra[index].shifted(shift);
        out.m = out.m.max(self.m + shift.abs());
        Ok(out)
    }

    /// Plot-ready rows `t,interval_index,lo,hi`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,interval_index,lo,hi\n");
        for (t, f) in self.grid.points().iter().zip(&self.spectra) {
            for (k, iv) in f.intervals().iter().enumerate() {
                s.push_str(&format!("{t},{k},{},{}\n", iv[0], iv[1]));
            }
        }
        s
    }
}

/// Spectra of `field` at every grid point. Evaluation is parallel; the result
/// is in grid order, and the first failing point (in grid order) is reported.
pub fn sweep(field: &OperatorField, grid: &ParameterSpace, merge_tol: f64) -> Result<SpectrumTrace> {
    if grid.is_empty() {
        return Err(Error::InsufficientData("empty parameter grid".into()));
    }
    if !(merge_tol > 0.0) {
        return Err(Error::InvalidParameter(format!("merge_tol must be > 0, got {merge_tol}")));
    }
    let results: Vec<Result<(CompactSet, f64)>> = grid
        .points()
        .par_iter()
        .map(|t| {
            let op = field.at(t).map_err(|e| at_param(t, e))?;
            let s = op.spectrum(merge_tol).map_err(|e| at_param(t, e))?;
            let norm = op.op_norm().map_err(|e| at_param(t, e))?;
            Ok((s, norm))
        })
        .collect();
    let mut spectra = Vec::with_capacity(grid.len());
    let mut m: f64 = 0.0;
    for r in results {
        let (s, norm) = r?;
        m = m.max(norm);
        spectra.push(s);
    }
    SpectrumTrace::new(grid.clone(), spectra, m + 1.0, merge_tol)
}

/// Serializes non-finite floats as the strings `"inf"`, `"-inf"`, `"nan"`.
pub(crate) fn ser_f64<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if x.is_nan() {
        s.serialize_str("nan")
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}
