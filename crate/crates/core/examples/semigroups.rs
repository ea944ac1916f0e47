//! Instructions induced by one transformation never generate every
//! singular transformation.

use mlcomp::verify::{generated_monoid, theorem1_check};
use mlcomp::Transformation;

fn main() -> mlcomp::Result<()> {
    let report = theorem1_check(2, 2)?;
    println!("{report}");
    let swap = Transformation::transposition(2, 2, 1, 2)?;
    let shift = Transformation::from_images(2, 2, vec![1, 2, 3, 0])?;
    let closure = generated_monoid(&[swap, shift], 1000)?;
    println!("<swap, 4-cycle> has {} elements", closure.elements.len());
    Ok(())
}
