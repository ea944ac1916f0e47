//! Complete universal machines built on the compact machines: copies of
//! the inputs plus a restore mode that resets the outputs between targets.
//!
//! For `q ≥ 3` the layout is outputs, switch pair `(n, n+1)`, copies
//! `[n+2, 2n+2)`; restore is one extra switch position. For `q = 2` a third
//! switch register `n+2` toggles restore mode and the copies sit at
//! `[n+3, 2n+3)`.

use crate::algebra::Transformation;
use crate::compiler::{ceil_log2, Compiler, Generator};
use crate::error::Result;

use super::compact::{compact_arms, compact_block, simple_arms, simple_block};
use super::{
    check_alphabet, check_target, wrong_kind, Emitted, KindData, MachineKind, Rule, Schedule,
    Step, Switch, SwitchTracker, UniversalMachine,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Inner {
    /// Compact switch with restore at `ρ + 1`.
    Compact,
    /// Simple machine's arms on a three-position switch: generator, `T1`
    /// or `A2`, restore.
    Simple,
    /// Binary alphabet: compact machine plus a restore toggle.
    Binary,
}

#[derive(Clone, Debug)]
pub(crate) struct CompleteData {
    inner: Inner,
    copy: usize,
}

pub fn complete_compact(q: u32, n: usize) -> Result<UniversalMachine> {
    check_alphabet(q, n, 2)?;
    let inner = match q {
        2 => Inner::Binary,
        3 | 5 => Inner::Simple,
        _ => Inner::Compact,
    };
    let copy = if inner == Inner::Binary { n + 3 } else { n + 2 };
    let diff = Switch::Difference { a: n + 1, b: n };
    let mut coords: Vec<Rule> = (0..n)
        .map(|j| {
            let restore = Rule::Project(copy + j);
            match inner {
                Inner::Compact => {
                    let mut arms = compact_arms(q, n, j);
                    arms.push(restore);
                    Rule::Select {
                        switch: diff.clone(),
                        arms,
                        fallback: Box::new(Rule::Project(j)),
                    }
                }
                Inner::Simple => {
                    let [i, other] = simple_arms(q, n, j);
                    Rule::Select {
                        switch: diff.clone(),
                        arms: vec![i, other.clone(), restore],
                        fallback: Box::new(other),
                    }
                }
                Inner::Binary => Rule::Select {
                    switch: Switch::Inequality { a: n + 1, b: n + 2 },
                    arms: vec![Rule::Select {
                        switch: diff.clone(),
                        arms: compact_arms(q, n, j),
                        fallback: Box::new(Rule::Project(j)),
                    }],
                    fallback: Box::new(restore),
                },
            }
        })
        .collect();
    coords.push(Rule::Project(n + 1));
    coords.push(Rule::Increment(n + 1));
    if inner == Inner::Binary {
        coords.push(Rule::Project(n + 1));
    }
    coords.extend((0..n).map(Rule::Project));
    let m = coords.len();
    let switch_end = copy;
    Ok(UniversalMachine::assemble(
        MachineKind::Complete,
        q,
        n,
        coords,
        vec![("outputs", 0..n), ("switch", n..switch_end), ("copy", copy..m)],
        vec![
            ("rho", ceil_log2(q as u64).to_string()),
            (
                "inner",
                match inner {
                    Inner::Compact => "compact",
                    Inner::Simple => "simple",
                    Inner::Binary => "compact-binary",
                }
                .to_string(),
            ),
        ],
        KindData::Complete(CompleteData { inner, copy }),
    ))
}

/// Prefix (copy the inputs, reset the switch) followed by one block per
/// target. Every block but the first starts by restoring the outputs from
/// the copies; a boundary follows each block.
pub fn emit_complete(machine: &UniversalMachine, targets: &[Transformation]) -> Result<Emitted> {
    let KindData::Complete(data) = &machine.data else {
        return Err(wrong_kind(machine, "complete"));
    };
    let (q, n) = (machine.q(), machine.n());
    let rho = ceil_log2(q as u64);
    let compiler = Compiler::new(q, n)?;
    let programs = targets
        .iter()
        .map(|g| {
            check_target(machine, g)?;
            Ok(compiler.transformation_program(g)?.generators)
        })
        .collect::<Result<Vec<Vec<Generator>>>>()?;

    let mut schedule = Schedule::new();
    let mut blocks = Vec::new();
    match data.inner {
        Inner::Compact | Inner::Simple => {
            for i in 0..n {
                schedule.update(data.copy + i);
            }
            let mut tracker = SwitchTracker::start(
                q,
                vec![Step::Update(n)],
                vec![Step::Update(n + 1)],
                &mut schedule,
            );
            let restore_at = if data.inner == Inner::Compact { rho + 1 } else { 2 };
            for (t, gens) in programs.iter().enumerate() {
                let before = schedule.len();
                if t > 0 {
                    tracker.move_to(restore_at, &mut schedule);
                    for i in 0..n {
                        schedule.update(i);
                    }
                }
                for &gen in gens {
                    if data.inner == Inner::Compact {
                        compact_block(gen, rho, &mut tracker, &mut schedule);
                    } else {
                        tracker.move_to(0, &mut schedule);
                        simple_block(gen, n, &[Step::Update(n + 1)], &mut schedule);
                    }
                }
                schedule.mark(t);
                blocks.push(schedule.len() - before);
            }
        }
        Inner::Binary => {
            schedule.update(n + 2);
            for i in 0..n {
                schedule.update(data.copy + i);
            }
            let mut tracker = SwitchTracker::start(
                q,
                vec![Step::Update(n)],
                vec![Step::Update(n + 1), Step::Update(n + 2)],
                &mut schedule,
            );
            for (t, gens) in programs.iter().enumerate() {
                let before = schedule.len();
                if t > 0 {
                    schedule.update(n + 1);
                    tracker.bump();
                    for i in 0..n {
                        schedule.update(i);
                    }
                    schedule.update(n + 2);
                }
                for &gen in gens {
                    compact_block(gen, rho, &mut tracker, &mut schedule);
                }
                schedule.mark(t);
                blocks.push(schedule.len() - before);
            }
        }
    }
    Ok(Emitted {
        schedule,
        targets: targets.to_vec(),
        blocks,
    })
}
