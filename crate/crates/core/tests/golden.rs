//! Golden files: parsing then printing reproduces them byte for byte, and
//! the library still produces the same text.

mod common;

use std::path::{Path, PathBuf};

use mlcomp::algebra::swap_program;
use mlcomp::formats::{
    parse_descriptor, parse_program, parse_schedule, parse_transformation, parse_transformations,
    print_descriptor, print_program, print_schedule, print_transformation, MachineDescriptor,
};
use mlcomp::machines::{compact_universal, emit_compact, Step};
use mlcomp::Error;

fn golden(name: &str) -> (PathBuf, String) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{name}: {e}"));
    (path, text)
}

#[test]
fn swap_programs_round_trip() {
    for (name, q) in [("swap_q2.prog", 2), ("swap_q3.prog", 3)] {
        let (_, text) = golden(name);
        let parsed = parse_program(&text).unwrap();
        assert_eq!(print_program(&parsed), text);
        assert_eq!(print_program(&swap_program(q)), text);
        let swapped: Vec<usize> = (0..(q * q) as usize)
            .map(|j| {
                let x = common::digits_of(j, q, 2);
                common::index_of(&[x[1], x[0]], q)
            })
            .collect();
        assert_eq!(parsed.compute().images(), &swapped[..]);
    }
}

#[test]
fn transformations_round_trip() {
    let (_, text) = golden("identity.tf");
    let id = parse_transformation(&text).unwrap();
    assert!(id.is_identity());
    assert_eq!(print_transformation(&id), text);
    let (_, text) = golden("target.tf");
    let g = parse_transformation(&text).unwrap();
    assert_eq!(g.images(), &[2, 1, 0, 3]);
    assert_eq!(print_transformation(&g), text);
}

#[test]
fn wrong_line_count_names_table_size() {
    let (_, text) = golden("short.tf");
    match parse_transformation(&text) {
        Err(Error::Parse { line, message }) => {
            assert_eq!(line, 1);
            assert!(message.contains("q^n = 4"), "{message}");
        }
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn compact_descriptor_round_trips() {
    let (path, text) = golden("compact_2_2.machine");
    let d = parse_descriptor(&text).unwrap();
    assert_eq!(print_descriptor(&d), text);
    let machine = compact_universal(2, 2).unwrap();
    assert_eq!(print_descriptor(&MachineDescriptor::of(&machine, None)), text);
    let rebuilt = d.build(path.parent().unwrap()).unwrap();
    assert_eq!(rebuilt.m(), 4);
    assert_eq!(rebuilt.layout(), machine.layout());
}

#[test]
fn catalog_descriptor_resolves_its_catalog() {
    let (path, text) = golden("max_time_2_2.machine");
    let d = parse_descriptor(&text).unwrap();
    assert_eq!(print_descriptor(&d), text);
    let machine = d.build(path.parent().unwrap()).unwrap();
    assert_eq!(machine.m(), 15);
    let (_, catalog) = golden("max_time_2_2.catalog.tf");
    let entries = parse_transformations(&catalog).unwrap();
    assert_eq!(entries.len(), 32);
    assert_eq!(machine.catalog(), entries);
    let printed: String = entries.iter().map(print_transformation).collect();
    assert_eq!(printed, catalog);
}

#[test]
fn compact_schedule_round_trips() {
    let (_, text) = golden("compact_target.sched");
    let schedule = parse_schedule(&text).unwrap();
    assert_eq!(print_schedule(&schedule), text);
    let machine = compact_universal(2, 2).unwrap();
    let (_, target) = golden("target.tf");
    let g = parse_transformation(&target).unwrap();
    let emitted = emit_compact(&machine, &g).unwrap();
    assert_eq!(emitted.schedule, schedule);
    assert!(schedule.steps().iter().all(|s| matches!(s, Step::Update(_))));
    assert_eq!(common::exhaustive_failures(&machine, &emitted), 0);
}

#[test]
fn gray_listing_is_pinned() {
    let (_, text) = golden("gray_doubling_4.txt");
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "gray kind=doubling n=4 q=2");
    assert_eq!(lines.len(), 1 + 16 + 3);
    assert!(lines.contains(&"runs: 6"));
    let mut out = Vec::new();
    let code = mlcomp::cli::dispatch(["mlcomp", "gray", "--kind", "doubling", "--n", "4", "--stats"], &mut out);
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap(), text);
}
