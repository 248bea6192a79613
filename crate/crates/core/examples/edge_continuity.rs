//! Sampled edge-continuity diagnostics on a fine coupling sweep, and what a fault looks like.

use specfield::analysis::{check_edge_continuity, sweep};
use specfield::models::{OperatorField, Param, ParameterSpace, SubstitutionWord};

fn main() -> specfield::Result<()> {
    let grid = ParameterSpace::euclidean((0..=20).map(|k| Param::Real(0.5 + 0.005 * k as f64)).collect())?;
    let trace = sweep(&OperatorField::substitution(SubstitutionWord::PeriodDoubling, 3), &grid, 1e-9)?;
    let eps = 0.02;
    for (label, tr) in [("clean", trace.clone()), ("shifted at index 10", trace.with_shifted(10, 0.2)?)] {
        let r = check_edge_continuity(&tr, eps, None)?;
        println!(
            "{label}: G1 {}/{}, G2 {}/{}, G3 {}/{} violations",
            r.count("G1"), r.g1_checked, r.count("G2"), r.g2_checked, r.count("G3"), r.g3_checked
        );
        for v in r.violations.iter().take(3) {
            println!("  {} at t = {}: {}", v.check, v.t, v.detail);
        }
    }
    Ok(())
}
