use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Guaranteed absolute accuracy of bisection. Iteration actually continues to
/// (near) machine precision, so this is an upper bound, not the stopping rule.
pub const BISECTION_TOL: f64 = 1e-12;

const RESOLUTION_FLOOR: f64 = 1e-30;

/// Real symmetric tridiagonal matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTridiag")]
pub struct SymTridiag {
    diag: Vec<f64>,
    off: Vec<f64>,
}

#[derive(Deserialize)]
struct RawTridiag {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl TryFrom<RawTridiag> for SymTridiag {
    type Error = Error;
    fn try_from(raw: RawTridiag) -> Result<Self> {
        SymTridiag::new(raw.diag, raw.off)
    }
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidOperator("tridiagonal matrix needs n >= 1".into()));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::InvalidOperator(format!(
                "off-diagonal has {} entries, expected {}",
                off.len(),
                diag.len() - 1
            )));
        }
        if diag.iter().chain(&off).any(|x| !x.is_finite()) {
            return Err(Error::InvalidOperator("non-finite tridiagonal entry".into()));
        }
        Ok(Self { diag, off })
    }

    /// Free discrete Laplacian on `n` sites with open ends.
    pub fn free(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n], vec![1.0; n.saturating_sub(1)])
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence sign count).
    pub fn sturm_count(&self, x: f64) -> usize {
        let emax2 = self.off.iter().fold(1.0_f64, |m, e| m.max(e * e));
        let pivmin = f64::MIN_POSITIVE * emax2;
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.n() {
            q = self.diag[i] - x - if i > 0 { self.off[i - 1] * self.off[i - 1] / q } else { 0.0 };
            // zero pivots are nudged upward so that an eigenvalue exactly at x is not counted
            if q.abs() < pivmin {
                q = pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// All eigenvalues, ascending, by bisection on the Sturm count.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.n();
        let (glo, ghi) = self.gershgorin();
        let pad = BISECTION_TOL + f64::EPSILON * glo.abs().max(ghi.abs());
        let (glo, ghi) = (glo - pad, ghi + pad);
        let mut out = Vec::with_capacity(n);
        let mut lo_k = glo;
        for k in 0..n {
            let (mut lo, mut hi) = (lo_k, ghi);
            // bisect to the last representable bracket; lo ends on the eigenvalue from below
            while hi - lo > RESOLUTION_FLOOR && hi - lo > f64::EPSILON * lo.abs().max(hi.abs()) {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if self.sturm_count(mid) <= k {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let lam = lo;
            out.push(lam);
            // eigenvalue k+1 is at least eigenvalue k
            lo_k = lo;
        }
        out
    }
}
