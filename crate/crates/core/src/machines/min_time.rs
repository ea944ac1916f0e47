//! Complete universal machine that walks all of `Tran(A^n)` in a
//! pseudo-Gray order, updating one output per position.
//!
//! Registers: outputs, copies, a `σ`-register run counter stepping through
//! a Gray code, and a reset pair `(m−2, m−1)` that is in reset mode while
//! its registers differ. During run `s` output `i` computes the coordinate
//! function it takes at the unique position of the run where it changes.

use std::ops::Range;
use std::sync::Arc;

use crate::algebra::{coordinate_index, coordinate_table, Symbol, Transformation};
use crate::error::{Error, Result};
use crate::gray::{canonical_gray, greedy_runs, pseudo_gray, GrayCode};

use super::{
    big_q, ceil_log, check_alphabet, check_budget, table_rule, wrong_kind, Emitted, KindData,
    MachineKind, Rule, Schedule, Switch, UniversalMachine,
};

/// Largest `Q^n` (number of positions) accepted.
const POSITION_BUDGET: u128 = 1 << 20;

#[derive(Clone, Debug)]
pub(crate) struct MinTimeData {
    /// `targets[λ]` is the transformation at position `λ`.
    targets: Vec<Transformation>,
    /// Output changed by transition `t` (which reaches position `t + 1 mod L`).
    transitions: Vec<usize>,
    runs: Vec<Range<usize>>,
    counter: GrayCode,
    sigma: usize,
}

/// Counter rule: Gray successor in normal mode, the code's first state
/// (all zeros) in reset mode.
pub(crate) fn counter_rules(
    window: Range<usize>,
    code: &GrayCode,
    reset_pair: (usize, usize),
) -> Vec<Rule> {
    let len = code.len();
    let indices = code.indices();
    let mut successor = vec![0usize; len];
    for (pos, &lex) in indices.iter().enumerate() {
        successor[lex] = indices[(pos + 1) % len];
    }
    let successor: Arc<[usize]> = successor.into();
    (0..window.len())
        .map(|component| Rule::Select {
            switch: Switch::Inequality {
                a: reset_pair.0,
                b: reset_pair.1,
            },
            arms: vec![Rule::GraySuccessor {
                window: window.clone(),
                successor: successor.clone(),
                component,
            }],
            fallback: Box::new(Rule::Constant(0)),
        })
        .collect()
}

pub fn complete_min_time(q: u32, n: usize) -> Result<UniversalMachine> {
    check_alphabet(q, n, 1)?;
    let count = big_q(q, n)
        .filter(|&c| c <= u32::MAX as u128)
        .ok_or(Error::RegisterBudget {
            needed: u128::MAX,
            budget: super::REGISTER_BUDGET,
        })?;
    match super::pow128(count as u32, n) {
        Some(p) if p <= POSITION_BUDGET => {}
        _ => {
            return Err(Error::Precondition(format!(
                "Tran(A^{n}) over q={q} is too large to enumerate"
            )))
        }
    }
    let code = pseudo_gray(n, count as u32)?;
    let len = code.len();
    let transitions: Vec<usize> = (0..len).map(|t| code.delta()[(t + 1) % len]).collect();
    let runs = greedy_runs(&transitions);
    let r = runs.len();
    let sigma = ceil_log(q, r as u128) + 1;
    let counter = canonical_gray(sigma, q)?;
    let m = check_budget(Some((2 * n + sigma + 2) as u128))?;

    let identity = Transformation::identity(n, q);
    let base: Vec<u128> = (0..n)
        .map(|i| coordinate_index(&identity.coordinate(i), q).expect("fits"))
        .collect();
    let tables: Vec<Vec<Vec<Symbol>>> = code
        .order()
        .iter()
        .map(|c| {
            (0..n)
                .map(|i| coordinate_table((c.digits()[i] as u128 + base[i]) % count, n, q))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let targets = tables
        .iter()
        .map(|t| Transformation::from_coordinates(n, q, t))
        .collect::<Result<Vec<_>>>()?;

    let counter_window = 2 * n..2 * n + sigma;
    let positions: Arc<[usize]> = counter.positions().into();
    let mut coords: Vec<Rule> = (0..n)
        .map(|i| {
            let arms = runs
                .iter()
                .map(|run| {
                    match run.clone().find(|&t| transitions[t] == i) {
                        Some(t) => table_rule(n..2 * n, &tables[(t + 1) % len][i]),
                        None => Rule::Project(n + i),
                    }
                })
                .collect();
            Rule::Select {
                switch: Switch::GrayIndex {
                    window: counter_window.clone(),
                    positions: positions.clone(),
                },
                arms,
                fallback: Box::new(Rule::Project(i)),
            }
        })
        .collect();
    coords.extend((0..n).map(Rule::Project));
    coords.extend(counter_rules(counter_window.clone(), &counter, (m - 2, m - 1)));
    coords.push(Rule::Project(m - 1));
    coords.push(Rule::Increment(m - 1));
    Ok(UniversalMachine::assemble(
        MachineKind::MinTime,
        q,
        n,
        coords,
        vec![
            ("outputs", 0..n),
            ("copy", n..2 * n),
            ("counter", counter_window),
            ("reset", m - 2..m),
        ],
        vec![
            ("Q", count.to_string()),
            ("L", len.to_string()),
            ("r", r.to_string()),
            ("sigma", sigma.to_string()),
        ],
        KindData::MinTime(MinTimeData {
            targets,
            transitions,
            runs,
            counter,
            sigma,
        }),
    ))
}

/// Copy once, then `repetitions` passes. Each pass resets the counter and
/// walks every position of the pseudo-Gray code, ending back at the
/// identity; a boundary follows every output update.
pub fn emit_enumeration(machine: &UniversalMachine, repetitions: usize) -> Result<Emitted> {
    let KindData::MinTime(data) = &machine.data else {
        return Err(wrong_kind(machine, "min-time"));
    };
    let (n, m) = (machine.n(), machine.m());
    let len = data.transitions.len();
    let mut schedule = Schedule::new();
    for i in 0..n {
        schedule.update(n + i);
    }
    schedule.mark(0);
    let mut blocks = Vec::new();
    for _ in 0..repetitions {
        let before = schedule.len();
        schedule.update(m - 2);
        schedule.update(m - 1);
        for c in 0..data.sigma {
            schedule.update(2 * n + c);
        }
        schedule.update(m - 2);
        for (s, run) in data.runs.iter().enumerate() {
            for t in run.clone() {
                schedule.update(data.transitions[t]);
                schedule.mark((t + 1) % len);
            }
            let next = (s + 1) % data.counter.len();
            schedule.update(2 * n + data.counter.delta()[next]);
        }
        blocks.push(schedule.len() - before);
    }
    Ok(Emitted {
        schedule,
        targets: data.targets.clone(),
        blocks,
    })
}
