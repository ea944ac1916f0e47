//! The machine that walks all of Tran(A^n) with one output update per
//! transformation.

use mlcomp::machines::{complete_min_time, emit_enumeration};
use mlcomp::verify::{verify_sequential, Mode};

fn main() -> mlcomp::Result<()> {
    let machine = complete_min_time(2, 2)?;
    for (k, v) in machine.params() {
        println!("{k} = {v}");
    }
    let emitted = emit_enumeration(&machine, 2)?;
    println!(
        "m = {}, two passes in {} steps, {} boundaries",
        machine.m(),
        emitted.schedule.len(),
        emitted.schedule.boundaries().len()
    );
    let report = verify_sequential(&machine, &emitted, Mode::exhaustive())?;
    println!("{report}");
    Ok(())
}
