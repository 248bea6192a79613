//! Estimates the Hölder constants of a field from sampled degree-2 polynomials and
//! checks every bound of the continuity theory on the sweep.

use specfield::analysis::{detect_gap_tips, estimate_constants, sweep, track_gaps, verify_bounds, TrackOptions};
use specfield::models::{OperatorField, ParameterSpace, Rational};

fn main() -> specfield::Result<()> {
    let field = OperatorField::almost_mathieu_hull(1.0);
    let grid = ParameterSpace::symmetric_approach(Rational::new(1, 2)?, 8, 64)?;
    let trace = sweep(&field, &grid, 1e-9)?;
    let est = estimate_constants(&trace, Some(&field))?;
    println!(
        "m = {}, {} + {} polynomials, alpha = {:.3} (r² = {:.3}), C_main = {:.4e}, C_edge = {:.4e}",
        est.m, est.n_main_polys, est.n_edge_polys, est.constants.alpha, est.fit.r_squared, est.constants.c_main, est.constants.c_edge
    );
    let tracks = track_gaps(&trace, &TrackOptions::default())?;
    let tips = detect_gap_tips(&tracks, &trace, 1e-3);
    let report = verify_bounds(&trace, &tracks, &tips, &est.constants)?;
    for c in &report.checks {
        println!("({:>3}) {:<48} checked {:>6}, violations {}, min log-margin {:.3e}", c.check, c.statement, c.n_checked, c.n_violations, c.min_log_margin);
    }
    for cl in report.closures.iter().filter(|c| c.c.abs() < 0.05) {
        if let Some(f) = cl.width_fit {
            println!("tip t = {}, c = {:+.2e}: {} applicable, width exponent {:.3}", cl.t, cl.c, cl.n_applicable, f.alpha);
        }
    }
    Ok(())
}
