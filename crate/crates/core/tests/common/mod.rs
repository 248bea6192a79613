//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use specfield::operators::DenseHermitian;
use specfield::CompactSet;

pub type CMat = DMatrix<Complex64>;

pub fn to_nalgebra(a: &DenseHermitian) -> CMat {
    let n = a.n();
    CMat::from_fn(n, n, |i, j| a.get(i, j))
}

/// Eigenvalues by nalgebra's Hermitian solver, ascending.
pub fn eig(a: &DenseHermitian) -> Vec<f64> {
    let mut e: Vec<f64> = to_nalgebra(a).symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Random Hermitian matrix with entries of modulus at most `scale`.
pub fn random_hermitian(rng: &mut impl Rng, n: usize, scale: f64) -> DenseHermitian {
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        data[i * n + i] = Complex64::new(rng.gen_range(-scale..scale), 0.0);
        for j in i + 1..n {
            let z = Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
            data[i * n + j] = z;
            data[j * n + i] = z.conj();
        }
    }
    DenseHermitian::new(n, data).unwrap()
}

/// Largest singular value.
pub fn spectral_norm(m: &CMat) -> f64 {
    m.singular_values().max()
}

/// Smallest singular value.
pub fn smallest_singular(m: &CMat) -> f64 {
    m.singular_values().min()
}

pub fn point_set_dist(x: f64, points: &[f64]) -> f64 {
    points.iter().map(|e| (e - x).abs()).fold(f64::INFINITY, f64::min)
}

/// Random union of up to `max_pieces` intervals with endpoints on the grid `k / 2^bits`
/// inside `[lo, hi]`. Degenerate (point) pieces occur.
pub fn random_dyadic_set(rng: &mut impl Rng, max_pieces: usize, lo: f64, hi: f64, bits: i32) -> CompactSet {
    let scale = 2f64.powi(bits);
    let (klo, khi) = ((lo * scale) as i64, (hi * scale) as i64);
    let k = rng.gen_range(1..=max_pieces);
    let pieces = (0..k)
        .map(|_| {
            let a = rng.gen_range(klo..=khi);
            let b = rng.gen_range(a..=(a + (khi - klo) / 4).min(khi));
            [a as f64 / scale, b as f64 / scale]
        })
        .collect();
    CompactSet::normalized(pieces).unwrap()
}

/// Distance from `x` to a union of intervals, one interval at a time.
pub fn interval_dist(x: f64, set: &CompactSet) -> f64 {
    set.intervals().iter().map(|iv| (iv[0] - x).max(x - iv[1]).max(0.0)).fold(f64::INFINITY, f64::min)
}

/// Points of `set` on the grid of step `h` (plus every endpoint).
pub fn sample_set(set: &CompactSet, h: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    for iv in set.intervals() {
        let steps = ((iv[1] - iv[0]) / h).floor() as usize;
        pts.extend((0..=steps).map(|k| iv[0] + k as f64 * h));
        pts.push(iv[1]);
    }
    pts
}

/// Brute-force Hausdorff distance from dense samples of both sets.
pub fn brute_hausdorff(a: &CompactSet, b: &CompactSet, h: f64) -> f64 {
    let one = |x: &CompactSet, y: &CompactSet| sample_set(x, h).iter().map(|&p| interval_dist(p, y)).fold(0.0, f64::max);
    one(a, b).max(one(b, a))
}
