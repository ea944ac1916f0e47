//! The machine that runs through catalogued sequences of transformations,
//! consecutive entries differing in every coordinate function.

use mlcomp::machines::{all_diff_catalog, all_diff_ordering, complete_max_time, emit_max};
use mlcomp::verify::{verify_sequential, Mode};

fn main() -> mlcomp::Result<()> {
    for row in all_diff_ordering(4, 2)? {
        println!("{row:?}");
    }
    let catalog = all_diff_catalog(2, 2, 2)?;
    let machine = complete_max_time(2, 2, catalog)?;
    let emitted = emit_max(&machine, &[0, 1])?;
    println!("m = {}, {} steps", machine.m(), emitted.schedule.len());
    let report = verify_sequential(&machine, &emitted, Mode::sampled(2000))?;
    println!("{report}");
    Ok(())
}
