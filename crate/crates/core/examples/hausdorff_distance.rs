//! Interval-union algebra: Hausdorff distance, gaps, polynomial images and CSV round trips.

use specfield::{CompactSet, Poly2};

fn main() -> specfield::Result<()> {
    let a = CompactSet::from_intervals(vec![[-2.0, -0.5], [0.5, 2.0]])?;
    let b = CompactSet::from_intervals(vec![[-2.0, 2.0]])?;
    println!("A = {:?}", a.intervals());
    println!("B = {:?}", b.intervals());
    println!("d_H(A, B) = {} (half the gap)", a.hausdorff(&b)?);
    println!("gaps of A: {:?}", a.gaps()?);
    let p = Poly2::new(0.0, 0.0, 1.0);
    println!("A² = {:?}, max |z²| on A = {}", a.poly_image(&p)?.intervals(), a.abs_max(&p)?);
    let csv = a.to_csv();
    print!("{csv}");
    assert_eq!(CompactSet::from_csv(&csv)?, a);
    Ok(())
}
