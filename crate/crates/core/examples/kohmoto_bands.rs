//! Band structure of the Kohmoto model across a Farey grid, with gaps tracked between rationals.

use specfield::analysis::{sweep, track_gaps, TrackOptions};
use specfield::models::{OperatorField, ParameterSpace};

fn main() -> specfield::Result<()> {
    let grid = ParameterSpace::farey(0.3, 0.5, 10)?;
    let trace = sweep(&OperatorField::kohmoto(1.5, 0.0), &grid, 1e-9)?;
    for (t, s) in grid.points().iter().zip(trace.spectra()) {
        let measure: f64 = s.intervals().iter().map(|iv| iv[1] - iv[0]).sum();
        println!("t = {t:<5} {:>2} bands, total width {measure:.4}", s.len());
    }
    let tracks = track_gaps(&trace, &TrackOptions::default())?;
    let long = tracks.iter().filter(|t| t.samples.len() == trace.len()).count();
    println!("{} gap tracks, {long} open across the whole grid", tracks.len());
    Ok(())
}
