//! The fast universal machine: every target in the same number of steps.

use mlcomp::machines::{emit_fast, fast_universal};
use mlcomp::verify::{verify_sequential, Mode};
use mlcomp::Transformation;

fn main() -> mlcomp::Result<()> {
    let machine = fast_universal(2, 2)?;
    println!("m = {}", machine.m());
    for g in machine.layout() {
        println!("  {} {:?}", g.name, g.registers);
    }
    for s in [0u128, 27, 228, 255] {
        let g = Transformation::from_enumeration_index(2, 2, s);
        let emitted = emit_fast(&machine, &g)?;
        let report = verify_sequential(&machine, &emitted, Mode::sampled(2000))?;
        println!(
            "target {s:>3}: {} steps, {}",
            emitted.schedule.len(),
            if report.passed() { "pass" } else { "FAIL" }
        );
    }
    Ok(())
}
