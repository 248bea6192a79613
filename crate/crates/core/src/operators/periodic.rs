//! Period-q Jacobi operators `(Hψ)(n) = ψ(n+1) + ψ(n−1) + V(n mod q) ψ(n)` on ℓ²(ℤ).
//!
//! Band edges are the eigenvalues of the two Bloch matrices with phase 0 and π
//! (the roots of Δ(E) = ±2). Sorting all 2q of them and pairing neighbours gives
//! the q bands `[E_{2j}, E_{2j+1}]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dense::DenseHermitian;
use super::tridiag::SymTridiag;
use crate::error::{Error, Result};
use crate::hyperspace::CompactSet;

/// Gaps narrower than this between computed bands are treated as closed.
pub const EDGE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPeriodic")]
pub struct PeriodicJacobi {
    potential: Vec<f64>,
}

#[derive(Deserialize)]
struct RawPeriodic {
    potential: Vec<f64>,
}

impl TryFrom<RawPeriodic> for PeriodicJacobi {
    type Error = Error;
    fn try_from(raw: RawPeriodic) -> Result<Self> {
        PeriodicJacobi::new(raw.potential)
    }
}

impl PeriodicJacobi {
    pub fn new(potential: Vec<f64>) -> Result<Self> {
        if potential.is_empty() {
            return Err(Error::InvalidOperator("periodic operator needs period q >= 1".into()));
        }
        if potential.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidOperator("non-finite potential value".into()));
        }
        Ok(Self { potential })
    }

    pub fn q(&self) -> usize {
        self.potential.len()
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    /// Δ(E): trace of the period transfer matrix.
    pub fn discriminant(&self, e: f64) -> f64 {
        // columns of the running product applied to (1,0) and (0,1)
        let (mut a, mut b, mut c, mut d) = (1.0, 0.0, 0.0, 1.0);
        for &v in &self.potential {
            let (na, nb) = ((e - v) * a - c, (e - v) * b - d);
            c = a;
            d = b;
            a = na;
            b = nb;
        }
        a + d
    }

    /// Bloch matrix at quasimomentum `k`: the q-site cell with `ψ(n+q) = e^{ik} ψ(n)`.
    pub fn bloch_matrix(&self, k: f64) -> DenseHermitian {
        let q = self.q();
        let mut m = vec![Complex64::new(0.0, 0.0); q * q];
        for i in 0..q {
            m[i * q + i] = Complex64::new(self.potential[i], 0.0);
        }
        let ph = Complex64::from_polar(1.0, k);
        if q == 1 {
            m[0] += ph + ph.conj();
        } else {
            for i in 0..q - 1 {
                m[i * q + i + 1] += 1.0;
                m[(i + 1) * q + i] += 1.0;
            }
            m[q - 1] += ph.conj();
            m[(q - 1) * q] += ph;
        }
        DenseHermitian::new(q, m).expect("Bloch matrices are Hermitian")
    }

    /// Eigenvalues of the real Bloch matrix with corner sign `s = ±1` (phase 0 or π).
    fn edge_eigenvalues(&self, s: f64) -> Vec<f64> {
        let v = &self.potential;
        let q = v.len();
        match q {
            1 => vec![v[0] + 2.0 * s],
            2 => {
                let off = 1.0 + s;
                let (m, h) = (0.5 * (v[0] + v[1]), 0.5 * (v[0] - v[1]));
                let r = h.hypot(off);
                vec![m - r, m + r]
            }
            _ => {
                let mut m = vec![0.0; q * q];
                for i in 0..q {
                    m[i * q + i] = v[i];
                    if i + 1 < q {
                        m[i * q + i + 1] = 1.0;
                        m[(i + 1) * q + i] = 1.0;
                    }
                }
                m[q - 1] = s;
                m[(q - 1) * q] = s;
                DenseHermitian::from_real(q, &m).expect("symmetric").eigenvalues()
            }
        }
    }

    /// Exact band union `Δ⁻¹([−2, 2])`.
    pub fn band_edges(&self) -> Result<CompactSet> {
        let q = self.q();
        let mut tagged: Vec<(f64, bool)> = self.edge_eigenvalues(1.0).into_iter().map(|e| (e, true)).collect();
        tagged.extend(self.edge_eigenvalues(-1.0).into_iter().map(|e| (e, false)));
        tagged.sort_by(|x, y| x.0.total_cmp(&y.0));
        // interlacing: the two inner edges between consecutive bands share a phase unless
        // they coincide; phases of bands thinner than the tolerance are not resolvable
        let width = |j: usize| tagged[2 * j + 1].0 - tagged[2 * j].0;
        for j in 0..q.saturating_sub(1) {
            let (x, y) = (tagged[2 * j + 1], tagged[2 * j + 2]);
            if x.1 != y.1 && y.0 - x.0 > EDGE_TOL && width(j) > EDGE_TOL && width(j + 1) > EDGE_TOL {
                return Err(Error::BandCount { found: j + 1, expected: q });
            }
        }
        let bands = (0..q).map(|j| [tagged[2 * j].0, tagged[2 * j + 1].0]).collect();
        Ok(CompactSet::normalized(bands)?.close_gaps(EDGE_TOL))
    }

    /// Open-boundary truncation over `cells` periods.
    pub fn truncation(&self, cells: usize) -> Result<SymTridiag> {
        let n = cells * self.q();
        let diag = (0..n).map(|i| self.potential[i % self.q()]).collect();
        SymTridiag::new(diag, vec![1.0; n.saturating_sub(1)])
    }
}
