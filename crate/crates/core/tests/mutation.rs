//! Broken schedules and wrong targets must be caught, and the library
//! verifier and the test-side runner must agree on every mutant.

mod common;

use mlcomp::machines::{
    compact_universal, complete_compact, emit_compact, emit_complete, emit_qp, quasi_parallel,
    Emitted, UniversalMachine,
};
use mlcomp::verify::{verify_sequential, Mode};
use mlcomp::Transformation;

/// Every single-step deletion and adjacent swap; returns the number of
/// mutants caught.
fn mutants(machine: &UniversalMachine, e: &Emitted) -> (usize, usize) {
    let len = e.schedule.len();
    let mut variants: Vec<_> = (0..len).map(|i| e.schedule.without_step(i)).collect();
    variants.extend((0..len.saturating_sub(1)).map(|i| e.schedule.with_swap(i)));
    let mut caught = 0;
    for schedule in &variants {
        if *schedule == e.schedule {
            continue;
        }
        let mutant = Emitted {
            schedule: schedule.clone(),
            targets: e.targets.clone(),
            blocks: Vec::new(),
        };
        let report = verify_sequential(machine, &mutant, Mode::exhaustive()).unwrap();
        assert_eq!(report.failure_count, common::exhaustive_failures(machine, &mutant));
        if !report.passed() {
            assert!(!report.failures.is_empty());
            caught += 1;
        }
    }
    (caught, variants.len())
}

#[test]
fn compact_mutants() {
    let machine = compact_universal(2, 2).unwrap();
    let g = Transformation::transposition(2, 2, 0, 3).unwrap();
    let e = emit_compact(&machine, &g).unwrap();
    let (caught, total) = mutants(&machine, &e);
    assert!(caught > 0 && caught * 2 >= total, "{caught}/{total}");
    // Dropping the final output update always breaks the result.
    let last = e.schedule.len() - 1;
    let broken = Emitted {
        schedule: e.schedule.without_step(last),
        ..e.clone()
    };
    assert!(!verify_sequential(&machine, &broken, Mode::exhaustive()).unwrap().passed());
}

#[test]
fn complete_mutants() {
    let machine = complete_compact(2, 2).unwrap();
    let targets: Vec<Transformation> = [27u128, 228, 3]
        .iter()
        .map(|&s| Transformation::from_enumeration_index(2, 2, s))
        .collect();
    let e = emit_complete(&machine, &targets).unwrap();
    let (caught, total) = mutants(&machine, &e);
    assert!(caught * 2 >= total, "{caught}/{total}");
}

#[test]
fn quasi_parallel_mutants() {
    let catalog = vec![
        Transformation::constant(2, 2, 1).unwrap(),
        Transformation::from_enumeration_index(2, 2, 141),
        Transformation::identity(2, 2),
    ];
    let machine = quasi_parallel(2, 2, catalog).unwrap();
    let e = emit_qp(&machine, 1).unwrap();
    let (caught, _) = mutants(&machine, &e);
    assert!(caught > 0);
}

#[test]
fn wrong_target_is_reported() {
    let machine = compact_universal(2, 2).unwrap();
    let g = Transformation::from_enumeration_index(2, 2, 180);
    let mut e = emit_compact(&machine, &g).unwrap();
    e.targets[0] = Transformation::from_enumeration_index(2, 2, 181);
    let report = verify_sequential(&machine, &e, Mode::exhaustive()).unwrap();
    assert!(!report.passed());
    assert_eq!(report.failure_count, common::exhaustive_failures(&machine, &e));
    let f = &report.failures[0];
    assert_ne!(f.expected, f.found);
}
