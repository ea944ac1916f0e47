//! Compiles every transformation of A^2 over a binary alphabet and reports
//! the program lengths.

use mlcomp::compiler::{total_weight, Compiler};
use mlcomp::Transformation;

fn main() -> mlcomp::Result<()> {
    let compiler = Compiler::new(2, 2)?;
    let mut longest = 0;
    let mut total = 0;
    for s in 0..256u128 {
        let g = Transformation::from_enumeration_index(2, 2, s);
        let report = compiler.transformation_program(&g)?;
        assert!(report.verify(&g));
        longest = longest.max(report.length);
        total += report.length;
    }
    println!("256 targets, longest {longest}, mean {:.2}", total as f64 / 256.0);

    let set = compiler.generating_set();
    println!("generating set ({} members):", set.members().len());
    for m in set.members() {
        println!("  {}", m.name);
    }
    for q in 2..=5 {
        for n in 1..=4 {
            let closed = (q as usize - 1) * n * (q as usize).pow(n as u32 - 1);
            assert_eq!(total_weight(q, n), closed);
        }
    }
    println!("weight sums agree with (q-1) n q^(n-1) for q <= 5, n <= 4");
    Ok(())
}
