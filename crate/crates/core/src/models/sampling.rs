use crate::error::{Error, Result};
use crate::operators::Poly2;

/// Default points per coefficient axis; 5³ = 125 polynomials.
pub const DEFAULT_PER_AXIS: usize = 5;

/// Deterministic sample of `𝒫₂(M) = {p : ‖p‖₁ ≤ M}`.
///
/// Each coefficient runs over `per_axis` equispaced values in `[−1, 1]` (all
/// sign patterns); the coefficient vector `c` is mapped to `M c / max(1, ‖c‖₁)`,
/// so the inner part of the cube fills the ball and the rest lands on its boundary.
pub fn sample_p2(big_m: f64, per_axis: usize) -> Result<Vec<Poly2>> {
    if !(big_m > 0.0) || per_axis < 2 {
        return Err(Error::InvalidParameter(format!("need M > 0 and per_axis >= 2, got {big_m}, {per_axis}")));
    }
    let axis: Vec<f64> = (0..per_axis).map(|i| -1.0 + 2.0 * i as f64 / (per_axis - 1) as f64).collect();
    let mut out = Vec::with_capacity(per_axis.pow(3));
    for &c0 in &axis {
        for &c1 in &axis {
            for &c2 in &axis {
                let s = big_m / (c0.abs() + c1.abs() + c2.abs()).max(1.0);
                out.push(Poly2::new(c0 * s, c1 * s, c2 * s));
            }
        }
    }
    Ok(out)
}

/// Probes `4m² − (z − λ)²`; all lie in `𝒫₂(4m² + 2)` when `|λ| ≤ 2m`.
pub fn ball_probes(m: f64, centers: &[f64]) -> Vec<Poly2> {
    centers.iter().map(|&x| Poly2::ball_probe(2.0 * m, x)).collect()
}

/// `m − z` and `m + z`, whose norms are `m − min σ` and `m + max σ`; both in `𝒫₂(1 + m)`.
pub fn edge_probes(m: f64) -> [Poly2; 2] {
    [Poly2::new(m, -1.0, 0.0), Poly2::new(m, 1.0, 0.0)]
}
