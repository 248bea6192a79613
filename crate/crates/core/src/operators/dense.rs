use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::tridiag::SymTridiag;
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;

/// Dense complex Hermitian matrix, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDense", into = "RawDense")]
pub struct DenseHermitian {
    n: usize,
    data: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct RawDense {
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl TryFrom<RawDense> for DenseHermitian {
    type Error = Error;
    fn try_from(raw: RawDense) -> Result<Self> {
        if raw.re.len() != raw.im.len() {
            return Err(Error::InvalidOperator("re and im arrays differ in length".into()));
        }
        let data = raw.re.iter().zip(&raw.im).map(|(&r, &i)| Complex64::new(r, i)).collect();
        DenseHermitian::new(raw.n, data)
    }
}

impl From<DenseHermitian> for RawDense {
    fn from(a: DenseHermitian) -> Self {
        RawDense { n: a.n, re: a.data.iter().map(|z| z.re).collect(), im: a.data.iter().map(|z| z.im).collect() }
    }
}

impl DenseHermitian {
    /// Rejects matrices that differ from their conjugate transpose by more than 1e-12.
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::InvalidOperator(format!("expected {n}x{n} entries, got {}", data.len())));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidOperator("non-finite matrix entry".into()));
        }
        for i in 0..n {
            for j in i..n {
                let dev = (data[i * n + j] - data[j * n + i].conj()).norm();
                if dev > HERMITIAN_TOL {
                    return Err(Error::NotHermitian { row: i, col: j, deviation: dev });
                }
            }
        }
        Ok(Self { n, data })
    }

    pub fn from_real(n: usize, data: &[f64]) -> Result<Self> {
        Self::new(n, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, &v) in values.iter().enumerate() {
            data[i * n + i] = Complex64::new(v, 0.0);
        }
        Self::new(n, data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Unitarily similar real tridiagonal matrix.
    pub fn tridiagonalize(&self) -> SymTridiag {
        let (diag, off) = householder(self.n, self.data.clone());
        SymTridiag::new(diag, off).expect("reduction of a valid Hermitian matrix")
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.tridiagonalize().eigenvalues()
    }
}

/// Householder reduction to Hermitian tridiagonal form.
///
/// The complex off-diagonal is replaced by its modulus, which is a further
/// diagonal unitary similarity.
fn householder(n: usize, mut a: Vec<Complex64>) -> (Vec<f64>, Vec<f64>) {
    let zero = Complex64::new(0.0, 0.0);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];
    for k in 0..n.saturating_sub(1) {
        let norm = (k + 1..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            off.push(0.0);
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        // v = x − alpha e1, normalized
        for i in k + 1..n {
            v[i] = a[i * n + k];
        }
        v[k + 1] -= alpha;
        let vn = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            off.push(norm);
            continue;
        }
        for vi in &mut v[k + 1..n] {
            *vi /= vn;
        }
        // trailing block update: A ← A − 2(v w* + w v*), w = p − (v*p) v, p = A v
        for i in k + 1..n {
            let mut s = zero;
            for j in k + 1..n {
                s += a[i * n + j] * v[j];
            }
            p[i] = s;
        }
        let kappa: Complex64 = (k + 1..n).map(|i| v[i].conj() * p[i]).sum();
        for i in k + 1..n {
            p[i] -= kappa * v[i];
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i * n + j] -= 2.0 * (v[i] * p[j].conj() + p[i] * v[j].conj());
            }
        }
        off.push(alpha.norm());
    }
    let diag = (0..n).map(|i| a[i * n + i].re).collect();
    (diag, off)
}
