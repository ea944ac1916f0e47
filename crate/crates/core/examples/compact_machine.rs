//! The compact universal machine simulating one target sequentially.

use mlcomp::formats::{print_descriptor, MachineDescriptor};
use mlcomp::machines::{compact_universal, emit_compact};
use mlcomp::sim::run_schedule;
use mlcomp::verify::{verify_sequential, Mode};
use mlcomp::Transformation;

fn main() -> mlcomp::Result<()> {
    let machine = compact_universal(2, 2)?;
    print!("{}", print_descriptor(&MachineDescriptor::of(&machine, None)));
    let g = Transformation::from_enumeration_index(2, 2, 201);
    let emitted = emit_compact(&machine, &g)?;
    println!("target images {:?}, schedule length {}", g.images(), emitted.schedule.len());
    println!("blocks per generator: {:?}", emitted.blocks);

    let mut x = vec![1, 0, 1, 1];
    run_schedule(&machine, &emitted.schedule, &mut x)?;
    println!("from input state 1: outputs {:?}", &x[..2]);

    let report = verify_sequential(&machine, &emitted, Mode::exhaustive())?;
    println!("{report}");
    Ok(())
}
