use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Diagonal unitary `diag(e^{iφ_k})`, phases stored in `[0, 2π)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitaryDiag {
    phases: Vec<f64>,
}

impl UnitaryDiag {
    pub fn new(phases: &[f64]) -> Result<Self> {
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidOperator("non-finite phase".into()));
        }
        Ok(Self { phases: phases.iter().map(|p| canonical(*p)).collect() })
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// `‖1 + e^{−iθ} U‖`.
    pub fn shifted_norm(&self, theta: f64) -> f64 {
        self.phases
            .iter()
            .map(|&p| (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, p - theta)).norm())
            .fold(0.0, f64::max)
    }

    /// Smallest chordal distance from `e^{iθ}` to the spectrum.
    pub fn chordal_dist(&self, theta: f64) -> f64 {
        let z = Complex64::from_polar(1.0, theta);
        self.phases.iter().map(|&p| (Complex64::from_polar(1.0, p) - z).norm()).fold(f64::INFINITY, f64::min)
    }
}

fn canonical(p: f64) -> f64 {
    let r = p.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Arc probe: `‖1 + e^{−iθ}U‖ ≤ √(4 − r²)` iff the open chordal ball `B_r(e^{iθ})` misses `σ(U)`.
pub fn probe_unitary_arc(u: &UnitaryDiag, theta: f64, r: f64) -> Result<bool> {
    if !(r > 0.0 && r < 2.0) {
        return Err(Error::Precondition(format!("arc radius must lie in (0, 2), got {r}")));
    }
    Ok(u.shifted_norm(theta) <= (4.0 - r * r).sqrt())
}
