//! Nested sets `F_0 = [0, m] ⊇ F_1 ⊇ ...` whose gaps accumulate at `c` and close
//! more slowly than any isolated gap tip allows.
//!
//! Gap `n` has width `w_n = C e^{−(α/2) κ^{n−1}}`, and `d(n, ∞) = e^{−κ^n}`, so that
//! `2 d_H(F_n, F_∞) = w_{n+1} = C d(n, ∞)^{α/2}` while `w_n = C d(n, ∞)^{α/(2κ)}`.
//! Widths fall super-exponentially, so the exact widths and distances are kept
//! in the log domain and only gaps resolvable in double precision are cut out
//! of the materialized sets.

use serde::Serialize;

use super::params::{Param, ParameterSpace};
use crate::error::{Error, Result};
use crate::hyperspace::CompactSet;

/// Gaps narrower than this fraction of `c` are not materialized.
pub const RESOLUTION: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CounterexampleConfig {
    pub c: f64,
    pub m: f64,
    pub kappa: f64,
    pub alpha: f64,
    /// The constant `C` of the width law.
    pub big_c: f64,
    pub n: u32,
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        Self { c: 2.0, m: 3.0, kappa: 2.0, alpha: 1.0, big_c: 1.0, n: 12 }
    }
}

/// One removed gap `(a_n, b_n)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PlacedGap {
    pub n: u32,
    pub a: f64,
    pub b: f64,
    /// `ln w_n`, exact.
    pub log_width: f64,
    /// Whether the gap survives in the double-precision sets.
    pub resolved: bool,
    /// Whether the default center `c − 2 w_n` had to be moved to keep the order.
    pub clamped: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleFamily {
    pub config: CounterexampleConfig,
    pub gaps: Vec<PlacedGap>,
    /// `F_0, ..., F_N, F_∞` in grid order.
    pub sets: Vec<CompactSet>,
    pub grid: ParameterSpace,
}

impl CounterexampleConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.c > 0.0
            && self.m > self.c
            && self.kappa > 1.0
            && self.alpha > 0.0
            && self.big_c > 0.0
            && [self.c, self.m, self.kappa, self.alpha, self.big_c].iter().all(|x| x.is_finite());
        if !ok || self.n == 0 {
            return Err(Error::InvalidParameter(format!(
                "counterexample needs 0 < c < m, kappa > 1, alpha > 0, C > 0, N >= 1; got {self:?}"
            )));
        }
        Ok(())
    }

    /// `ln w_n = ln C − (α/2) κ^{n−1}`.
    pub fn log_width(&self, n: u32) -> f64 {
        self.big_c.ln() - 0.5 * self.alpha * self.kappa.powi(n as i32 - 1)
    }

    /// `ln d(n, ∞) = −κ^n`.
    pub fn log_dist_to_limit(&self, n: u32) -> f64 {
        -self.kappa.powi(n as i32)
    }
}

/// Builds `F_0, ..., F_N` and `F_∞` over `ℕ ∪ {∞}` with the ultrametric `e^{−κ^{min}}`.
///
/// Gap centers default to `c − 2 w_n`; when that would collide with the previous
/// gap the new gap is placed a quarter of the free room past it.
pub fn counterexample_family(cfg: &CounterexampleConfig) -> Result<CounterexampleFamily> {
    cfg.validate()?;
    let mut gaps: Vec<PlacedGap> = Vec::new();
    let mut prev_b = 0.0;
    for n in 1..=cfg.n {
        let log_w = cfg.log_width(n);
        let w = log_w.exp();
        let room = cfg.c - prev_b;
        if w >= room {
            return Err(Error::Infeasible { n: n as usize, reason: format!("width {w:e} does not fit in ({prev_b}, {})", cfg.c) });
        }
        let (mut a, mut clamped) = (cfg.c - 2.5 * w, false);
        if a <= prev_b {
            if n == 1 {
                return Err(Error::Infeasible { n: 1, reason: format!("a_1 = {a} is not positive; increase c") });
            }
            a = prev_b + 0.25 * (room - w);
            clamped = true;
        }
        let b = a + w;
        let resolved = w >= RESOLUTION * cfg.c && b > a && b < cfg.c && a > prev_b;
        gaps.push(PlacedGap { n, a, b, log_width: log_w, resolved, clamped });
        if resolved {
            prev_b = b;
        }
    }
    let grid = ParameterSpace::naturals_with_infinity(cfg.n, cfg.kappa)?;
    let sets = grid
        .points()
        .iter()
        .map(|t| {
            let upto = match t {
                Param::Index(k) => *k,
                _ => cfg.n,
            };
            carve(cfg.m, gaps.iter().filter(|g| g.resolved && g.n <= upto))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CounterexampleFamily { config: *cfg, gaps, sets, grid })
}

fn carve<'a>(m: f64, gaps: impl Iterator<Item = &'a PlacedGap>) -> Result<CompactSet> {
    let mut pieces = Vec::new();
    let mut lo = 0.0;
    for g in gaps {
        pieces.push([lo, g.a]);
        lo = g.b;
    }
    pieces.push([lo, m]);
    CompactSet::from_intervals(pieces)
}

impl CounterexampleFamily {
    /// Exact `ln d_H(F_n, F_∞) = ln(w_{n+1}/2)` for `n < N`.
    pub fn log_hausdorff_to_limit(&self, n: u32) -> Option<f64> {
        (n < self.config.n).then(|| self.config.log_width(n + 1) - std::f64::consts::LN_2)
    }

    pub fn resolved_count(&self) -> usize {
        self.gaps.iter().filter(|g| g.resolved).count()
    }
}
