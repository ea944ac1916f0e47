//! A quasi-parallel machine: parallel steps only, plus one update of the
//! last register.

use mlcomp::machines::{emit_qp, quasi_parallel};
use mlcomp::verify::{parallel_impossibility, verify_sequential, Mode};
use mlcomp::Transformation;

fn main() -> mlcomp::Result<()> {
    let catalog = vec![
        Transformation::constant(2, 2, 1)?,
        Transformation::constant(2, 2, 2)?,
        Transformation::from_enumeration_index(2, 2, 108),
        Transformation::identity(2, 2),
    ];
    let machine = quasi_parallel(2, 2, catalog)?;
    let emitted = emit_qp(&machine, 2)?;
    println!(
        "m = {}, {} steps, last register updated {} time(s)",
        machine.m(),
        emitted.schedule.len(),
        emitted.schedule.last_count()
    );
    println!("{}", verify_sequential(&machine, &emitted, Mode::exhaustive())?);

    let report = parallel_impossibility(2, 2, 2)?;
    println!(
        "maps of A^2 simulating two constants in parallel: {} of {}",
        report.failure_count, report.checked
    );
    Ok(())
}
