//! `‖(z − A)⁻¹‖ = 1 / dist(z, σ(A))`, and its closed form inside a spectral gap.

use num_complex::Complex64;
use specfield::operators::{resolvent_in_gap, Operator, PeriodicJacobi};

fn main() -> specfield::Result<()> {
    // potential (1, −1): bands ±[1, √5], gap (−1, 1)
    let op: Operator = PeriodicJacobi::new(vec![1.0, -1.0])?.into();
    println!("spectrum: {:?}", op.spectrum(1e-12)?.intervals());
    for z in [Complex64::new(0.3, 0.1), Complex64::new(-0.8, 0.5), Complex64::new(0.0, 1.0)] {
        println!(
            "z = {z}: ‖R(z)‖ = {:.12}, gap formula = {:.12}",
            op.resolvent_norm(z)?,
            resolvent_in_gap(-1.0, 1.0, z)?
        );
    }
    Ok(())
}
