//! The elementary machine, run on a sparse state.

use mlcomp::machines::{elementary_universal, emit_elementary};
use mlcomp::sim::{run_schedule, SparseState};
use mlcomp::Transformation;

fn main() -> mlcomp::Result<()> {
    let machine = elementary_universal(2, 2)?;
    let g = Transformation::from_enumeration_index(2, 2, 77);
    let emitted = emit_elementary(&machine, &[g.clone()])?;
    println!("m = {}, {} steps", machine.m(), emitted.schedule.len());
    let mut x = SparseState::new(machine.m(), 0);
    mlcomp::sim::Registers::set(&mut x, 0, 1);
    run_schedule(&machine, &emitted.schedule, &mut x)?;
    let dense = x.to_dense();
    println!(
        "input state 1 -> outputs {:?} (expected image {}), {} registers off default",
        &dense[..2],
        g.image(1),
        x.override_count()
    );
    Ok(())
}
