//! Gaps opening out of `[−2, 2]` as the period-doubling coupling `λ = 2^{−k}` grows.

use specfield::analysis::{sweep, track_gaps, HolderEstimate, TrackOptions};
use specfield::models::{OperatorField, ParameterSpace, SubstitutionWord};

fn main() -> specfield::Result<()> {
    let grid = ParameterSpace::dyadic(1, 12, true)?;
    let trace = sweep(&OperatorField::substitution(SubstitutionWord::PeriodDoubling, 4), &grid, 1e-9)?;
    for tr in track_gaps(&trace, &TrackOptions::default())? {
        let Some(open) = tr.opened_at else { continue };
        let pairs: Vec<(f64, f64)> = tr.samples.iter().map(|s| (grid.log_dist(s.index, open.index), s.gap.width())).collect();
        match HolderEstimate::fit(&pairs) {
            Ok(f) => println!("gap opening at E = {:+.4}: width ~ λ^{:.3} (r² = {:.4})", open.c, f.alpha, f.r_squared),
            Err(e) => println!("gap opening at E = {:+.4}: {e}", open.c),
        }
    }
    Ok(())
}
