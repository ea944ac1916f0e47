//! A complete universal machine running a sequence of targets, each one
//! checked at its boundary.

use mlcomp::machines::{complete_compact, emit_complete};
use mlcomp::verify::{verify_sequential, Mode};
use mlcomp::Transformation;

fn main() -> mlcomp::Result<()> {
    let machine = complete_compact(2, 2)?;
    let targets: Vec<Transformation> = [3u128, 250, 0, 27, 114]
        .iter()
        .map(|&s| Transformation::from_enumeration_index(2, 2, s))
        .collect();
    let emitted = emit_complete(&machine, &targets)?;
    println!("m = {}, {} steps, blocks {:?}", machine.m(), emitted.schedule.len(), emitted.blocks);
    let report = verify_sequential(&machine, &emitted, Mode::exhaustive())?;
    println!("{report}");
    Ok(())
}
