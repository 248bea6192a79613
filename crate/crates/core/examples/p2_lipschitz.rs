//! Uniform Hölder exponent of `t ↦ ‖p(H_t)‖` over sampled degree-2 polynomials,
//! for almost Mathieu operators on a rational grid around `1/5`.

use specfield::analysis::p2_modulus;
use specfield::models::{field_bound, sample_p2, OperatorField, ParameterSpace, DEFAULT_PER_AXIS};

fn main() -> specfield::Result<()> {
    let field = OperatorField::almost_mathieu_hull(1.0);
    let grid = ParameterSpace::farey(0.18, 0.22, 40)?;
    let m = field_bound(&field, &grid)?;
    let big_m = 4.0 * m * m + 2.0;
    let polys = sample_p2(big_m, DEFAULT_PER_AXIS)?;
    let est = p2_modulus(&field, &grid, big_m, &polys)?;
    println!("{} rationals in [0.18, 0.22], m = {m:.4}, M = {big_m:.2}, {} polynomials", grid.len(), polys.len());
    println!(
        "alpha = {:.4}, C (regression) = {:.4}, C (sup) = {:.4}, r² = {:.4}, {} pairs",
        est.alpha, est.constant, est.sup_constant, est.r_squared, est.n_points
    );
    Ok(())
}
