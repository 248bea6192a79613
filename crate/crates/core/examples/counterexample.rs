//! Nested compact sets whose gaps close like `d^{α/(2κ)}` while the sets converge
//! like `d^{α/2}`: the gap-width exponent is strictly worse than the Hausdorff one.

use specfield::analysis::{detect_gap_tips, track_gaps, SpectrumTrace, TrackOptions};
use specfield::models::{counterexample_family, CounterexampleConfig};

fn main() -> specfield::Result<()> {
    let cfg = CounterexampleConfig::default();
    let fam = counterexample_family(&cfg)?;
    println!("c = {}, kappa = {}, alpha = {}, {} levels", cfg.c, cfg.kappa, cfg.alpha, cfg.n);
    for n in 1..=6 {
        let (ld, lw) = (fam.config.log_dist_to_limit(n), fam.config.log_width(n));
        let lh = fam.log_hausdorff_to_limit(n).unwrap_or(f64::NAN);
        println!("n = {n}: ln d = {ld:>7.2}, ln width = {lw:>7.3} (ratio {:.3}), ln d_H = {lh:>7.3} (ratio {:.3})", lw / ld, lh / ld);
    }
    let trace = SpectrumTrace::from_family(&fam, 1e-14)?;
    let tracks = track_gaps(&trace, &TrackOptions::default())?;
    for tip in detect_gap_tips(&tracks, &trace, 1e-3) {
        println!("tip at c = {}, t = {}, {:?}, isolated = {}", tip.c, tip.t, tip.kind, tip.isolated);
    }
    Ok(())
}
