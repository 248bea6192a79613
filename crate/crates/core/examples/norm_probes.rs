//! Gap detection from norms alone: `‖m² − (A − x)²‖ ≤ m² − r²` exactly when
//! `(x − r, x + r)` misses the spectrum, and the unitary analogue on the circle.

use specfield::models::{almost_mathieu, Rational};
use specfield::operators::{probe_unitary_arc, Operator, UnitaryDiag};

fn main() -> specfield::Result<()> {
    let op: Operator = almost_mathieu(1.0, 0.0, Rational::new(1, 3)?)?.into();
    let sigma = op.spectrum(1e-9)?;
    println!("spectrum: {:?}", sigma.intervals());
    let m = op.op_norm()? + 4.0;
    for x in [-2.0, -1.0, 0.0, 0.5, 1.0, 2.5] {
        let r = 0.2;
        println!(
            "x = {x:+.2}, r = {r}: probe says gap = {:<5}  (distance to spectrum {:.4})",
            op.probe_ball(x, r, m)?,
            sigma.dist_point(x)?
        );
    }
    let u = UnitaryDiag::new(&[0.0, 2.0, 4.0])?;
    for theta in [1.0, 2.1, 5.2] {
        println!(
            "theta = {theta}: arc of chordal radius 0.5 misses σ(U): {} (distance {:.4})",
            probe_unitary_arc(&u, theta, 0.5)?,
            u.chordal_dist(theta)
        );
    }
    Ok(())
}
