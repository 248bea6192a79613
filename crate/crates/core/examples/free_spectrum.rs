//! The free Laplacian and its zero-coupling disguises all have spectrum `[−2, 2]`.

use specfield::models::{almost_mathieu, kohmoto, substitution_field, Rational, SubstitutionWord};
use specfield::operators::{Operator, PeriodicJacobi};

fn main() -> specfield::Result<()> {
    let t = Rational::new(3, 8)?;
    let ops: Vec<(&str, PeriodicJacobi)> = vec![
        ("free", PeriodicJacobi::new(vec![0.0])?),
        ("almost Mathieu, mu = 0", almost_mathieu(0.0, 0.0, t)?),
        ("Kohmoto, lambda = 0", kohmoto(0.0, 0.0, t)?),
        ("Fibonacci, lambda = 0", substitution_field(0.0, SubstitutionWord::Fibonacci, 6)?),
    ];
    for (name, op) in ops {
        let q = op.q();
        let s = Operator::from(op).spectrum(1e-9)?;
        println!("{name:<24} period {q:>2}: {:?}", s.intervals());
    }
    Ok(())
}
