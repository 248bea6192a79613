//! The central almost Mathieu gap closing at `t = 1/2`, `c = 0`.
//!
//! Sweeps the phase-union spectrum over `1/2 ± 1/(2q)`, tracks gaps, reports the
//! tips and fits the width law of every track that closes onto `c ≈ 0`.

use specfield::analysis::{detect_gap_tips, sweep, track_gaps, HolderEstimate, TrackOptions};
use specfield::models::{OperatorField, ParameterSpace, Rational};

fn main() -> specfield::Result<()> {
    let half = Rational::new(1, 2)?;
    let grid = ParameterSpace::symmetric_approach(half, 8, 64)?;
    let trace = sweep(&OperatorField::almost_mathieu_hull(1.0), &grid, 1e-9)?;
    let tracks = track_gaps(&trace, &TrackOptions::default())?;
    let tips = detect_gap_tips(&tracks, &trace, 1e-3);
    println!("{} grid points, {} tracks, {} tips", trace.len(), tracks.len(), tips.len());
    for tip in tips.iter().filter(|t| t.c.abs() < 0.05) {
        println!("tip at t = {}, c = {:+.3e}, isolated = {}, {:?}, tracks {:?}", tip.t, tip.c, tip.isolated, tip.kind, tip.tracks);
        let pairs: Vec<(f64, f64)> = tip
            .tracks
            .iter()
            .flat_map(|&k| tracks[k].samples.iter())
            .map(|s| (grid.log_dist(s.index, tip.index), s.gap.width()))
            .collect();
        let fit = HolderEstimate::fit(&pairs)?;
        println!("  width ≈ {:.3} · |t − 1/2|^{:.3}  (r² = {:.4}, {} samples)", fit.constant, fit.alpha, fit.r_squared, fit.n_points);
    }
    Ok(())
}
