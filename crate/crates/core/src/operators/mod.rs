//! Finite and periodic self-adjoint operators, their spectra, and the norm probes.
//!
//! Everything that needs a matrix function (`‖p(A)‖`, resolvent norms) is
//! evaluated on the spectrum, never by forming `A²` or inverting.

mod dense;
mod periodic;
mod poly;
mod tridiag;
mod unitary;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use dense::DenseHermitian;
pub use periodic::{PeriodicJacobi, EDGE_TOL};
pub use poly::Poly2;
pub use tridiag::{SymTridiag, BISECTION_TOL};
pub use unitary::{probe_unitary_arc, UnitaryDiag};

use crate::error::{Error, Result};
use crate::hyperspace::CompactSet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum Operator {
    DenseHermitian(DenseHermitian),
    SymTridiag(SymTridiag),
    PeriodicJacobi(PeriodicJacobi),
    /// Orthogonal direct sum; its spectrum is the union of the summands' spectra.
    DirectSum { parts: Vec<Operator> },
}

impl From<DenseHermitian> for Operator {
    fn from(a: DenseHermitian) -> Self {
        Operator::DenseHermitian(a)
    }
}

impl From<SymTridiag> for Operator {
    fn from(a: SymTridiag) -> Self {
        Operator::SymTridiag(a)
    }
}

impl From<PeriodicJacobi> for Operator {
    fn from(a: PeriodicJacobi) -> Self {
        Operator::PeriodicJacobi(a)
    }
}

impl Operator {
    pub fn direct_sum(parts: Vec<Operator>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidOperator("direct sum of nothing".into()));
        }
        Ok(Operator::DirectSum { parts })
    }

    /// Real diagonal matrix as a tridiagonal operator.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Ok(SymTridiag::new(values.to_vec(), vec![0.0; values.len().saturating_sub(1)])?.into())
    }

    fn is_banded(&self) -> bool {
        match self {
            Operator::PeriodicJacobi(_) => true,
            Operator::DirectSum { parts } => parts.iter().all(Operator::is_banded),
            _ => false,
        }
    }

    /// Spectrum as a set. Eigenvalue clouds are clustered with `merge_tol`;
    /// periodic band unions are exact and ignore it.
    pub fn spectrum(&self, merge_tol: f64) -> Result<CompactSet> {
        match self {
            Operator::PeriodicJacobi(p) => p.band_edges(),
            Operator::DenseHermitian(a) => CompactSet::from_points(&a.eigenvalues(), merge_tol),
            Operator::SymTridiag(a) => CompactSet::from_points(&a.eigenvalues(), merge_tol),
            Operator::DirectSum { parts } => {
                let tol = if self.is_banded() { EDGE_TOL } else { merge_tol };
                let mut acc = CompactSet::empty();
                for part in parts {
                    acc = acc.union(&part.spectrum(merge_tol)?);
                }
                Ok(acc.close_gaps(tol))
            }
        }
    }

    /// Spectrum with every distinct eigenvalue kept as its own point.
    pub fn exact_spectrum(&self) -> Result<CompactSet> {
        match self {
            Operator::PeriodicJacobi(p) => p.band_edges(),
            Operator::DenseHermitian(a) => CompactSet::from_points(&a.eigenvalues(), f64::MIN_POSITIVE),
            Operator::SymTridiag(a) => CompactSet::from_points(&a.eigenvalues(), f64::MIN_POSITIVE),
            Operator::DirectSum { parts } => {
                let mut acc = CompactSet::empty();
                for part in parts {
                    acc = acc.union(&part.exact_spectrum()?);
                }
                Ok(if self.is_banded() { acc.close_gaps(EDGE_TOL) } else { acc })
            }
        }
    }

    pub fn op_norm(&self) -> Result<f64> {
        let (lo, hi) = self.exact_spectrum()?.edges()?;
        Ok(lo.abs().max(hi.abs()))
    }

    /// `‖p(A)‖ = max |p(σ(A))|`.
    pub fn poly_norm(&self, p: &Poly2) -> Result<f64> {
        self.exact_spectrum()?.abs_max(p)
    }

    /// Ball probe at `x`: `‖m² − (A−x)²‖ ≤ m² − r²` iff `B_r(x) ∩ σ(A) = ∅`.
    pub fn probe_ball(&self, x: f64, r: f64, m: f64) -> Result<bool> {
        probe_ball_on(&self.exact_spectrum()?, x, r, m)
    }

    /// `‖(z − A)⁻¹‖ = 1 / dist(z, σ(A))`.
    pub fn resolvent_norm(&self, z: Complex64) -> Result<f64> {
        let sigma = self.exact_spectrum()?;
        let dx = sigma.dist_point(z.re)?;
        let d = dx.hypot(z.im);
        if d == 0.0 {
            return Err(Error::ResolventUnbounded { re: z.re, im: z.im });
        }
        Ok(1.0 / d)
    }

    /// Spectrum of the open-boundary truncation of a periodic operator, with
    /// edge states removed: eigenvalues that the ball probe of radius
    /// `filter_radius` places inside a gap of the exact bands are dropped.
    pub fn filtered_truncation_spectrum(
        periodic: &PeriodicJacobi,
        cells: usize,
        merge_tol: f64,
        filter_radius: f64,
    ) -> Result<CompactSet> {
        let bands = periodic.band_edges()?;
        let eig = periodic.truncation(cells)?.eigenvalues();
        let (lo, hi) = bands.edges()?;
        let reach = eig.iter().fold(lo.abs().max(hi.abs()), |m, e| m.max(e.abs()));
        let m = 2.0 * reach + filter_radius + 1.0;
        let mut kept = Vec::with_capacity(eig.len());
        for e in eig {
            if !probe_ball_on(&bands, e, filter_radius, m)? {
                kept.push(e);
            }
        }
        CompactSet::from_points(&kept, merge_tol)
    }
}

/// The probe evaluated on a known spectrum.
pub fn probe_ball_on(sigma: &CompactSet, x: f64, r: f64, m: f64) -> Result<bool> {
    let (lo, hi) = sigma.edges()?;
    let reach = (lo - x).abs().max((hi - x).abs());
    if !(r > 0.0) {
        return Err(Error::Precondition(format!("radius must be positive, got {r}")));
    }
    if !(m > reach) {
        return Err(Error::Precondition(format!("m = {m} does not exceed ‖A − x‖ = {reach}")));
    }
    if !(m > r) {
        return Err(Error::Precondition(format!("m = {m} does not exceed r = {r}")));
    }
    let p = Poly2::ball_probe(m, x);
    Ok(sigma.abs_max(&p)? <= m * m - r * r)
}

/// Resolvent norm when `Re z` sits in the upper half of a gap `(a, b)`
/// (or the lower half, by symmetry): `((b − x)² + y²)^{−1/2}`.
pub fn resolvent_in_gap(a: f64, b: f64, z: Complex64) -> Result<f64> {
    let x = z.re;
    if !(a < x && x < b) {
        return Err(Error::Precondition(format!("{x} is not inside the gap ({a}, {b})")));
    }
    let edge = if x > 0.5 * (a + b) { b } else { a };
    Ok(1.0 / (edge - x).hypot(z.im))
}
