//! Complete universal machine over a caller-chosen catalog of target
//! sequences, each of length `Q = q^(q^n)`, recomputing all outputs for
//! every target.
//!
//! Registers: outputs, copies, `K` information registers (one per catalog
//! entry), `r` parity registers, `q^n` counter registers stepping through
//! a `(q^n, q)`-Gray code of exactly `Q` states, and a reset pair. The code
//! switch selects the catalog entry, the counter the position in it.

use std::sync::Arc;

use crate::algebra::{checked_pow, Transformation};
use crate::codes::{parity_length, shortened_hamming};
use crate::error::{Error, Result};
use crate::gray::{canonical_gray, GrayCode};

use super::min_time::counter_rules;
use super::{
    all_diff_ordering, big_q, check_alphabet, check_budget, table_rule, wrong_kind, Emitted,
    KindData, MachineKind, Rule, Schedule, Switch, UniversalMachine,
};

#[derive(Clone, Debug)]
pub(crate) struct MaxTimeData {
    pub(crate) catalog: Vec<Vec<Transformation>>,
    info: usize,
    parity: usize,
    counter_start: usize,
    counter: GrayCode,
}

/// The first `rows` rows of the all-coordinates-differ ordering of
/// `Tran(A^n)`, each a sequence of `Q` transformations in which consecutive
/// entries differ in every coordinate function.
pub fn all_diff_catalog(q: u32, n: usize, rows: usize) -> Result<Vec<Vec<Transformation>>> {
    check_alphabet(q, n, 1)?;
    let count = big_q(q, n)
        .filter(|&c| c <= 1 << 16)
        .ok_or_else(|| Error::Precondition("Q too large for a catalog".into()))? as u32;
    let rows_total = (count as usize).pow(n as u32 - 1);
    if rows > rows_total {
        return Err(Error::Precondition(format!(
            "{rows} rows requested, ordering has {rows_total}"
        )));
    }
    let order = all_diff_ordering(count, n)?;
    order
        .chunks(count as usize)
        .take(rows)
        .map(|row| {
            row.iter()
                .map(|v| {
                    let gammas: Vec<u128> = v.iter().map(|&g| g as u128).collect();
                    Transformation::from_coordinate_indices(n, q, &gammas)
                })
                .collect()
        })
        .collect()
}

pub fn complete_max_time(
    q: u32,
    n: usize,
    catalog: Vec<Vec<Transformation>>,
) -> Result<UniversalMachine> {
    check_alphabet(q, n, 1)?;
    if catalog.is_empty() {
        return Err(Error::Precondition("catalog is empty".into()));
    }
    let count = check_budget(big_q(q, n))?;
    for seq in &catalog {
        if seq.len() != count {
            return Err(Error::Shape(format!(
                "catalog sequence of length {}, expected Q = {count}",
                seq.len()
            )));
        }
        if let Some(g) = seq.iter().find(|g| g.n() != n || g.q() != q) {
            return Err(Error::Shape(format!(
                "catalog entry over [{}]^{}",
                g.q(),
                g.n()
            )));
        }
    }
    let k = catalog.len();
    let r = parity_length(k);
    let width = checked_pow(q, n).expect("bounded by Q");
    let m = check_budget(Some((2 * n + k + r + width + 2) as u128))?;
    let code = Arc::new(shortened_hamming(k)?);
    let counter = canonical_gray(width, q)?;
    let (info, parity, counter_start) = (2 * n, 2 * n + k, 2 * n + k + r);
    let counter_window = counter_start..counter_start + width;
    let positions: Arc<[usize]> = counter.positions().into();

    let mut coords: Vec<Rule> = (0..n)
        .map(|i| {
            let mut arms = vec![Rule::Project(i)];
            arms.extend(catalog.iter().map(|seq| Rule::Select {
                switch: Switch::GrayIndex {
                    window: counter_window.clone(),
                    positions: positions.clone(),
                },
                arms: seq
                    .iter()
                    .map(|g| table_rule(n..2 * n, &g.coordinate(i)))
                    .collect(),
                fallback: Box::new(Rule::Project(i)),
            }));
            Rule::Select {
                switch: Switch::CodeError {
                    window: info..counter_start,
                    code: code.clone(),
                },
                arms,
                fallback: Box::new(Rule::Project(i)),
            }
        })
        .collect();
    coords.extend((0..n).map(Rule::Project));
    coords.extend((info..parity).map(Rule::Err));
    coords.extend((0..r).map(|bit| Rule::CodeParity {
        window: info..parity,
        code: code.clone(),
        bit,
    }));
    coords.extend(counter_rules(counter_window.clone(), &counter, (m - 2, m - 1)));
    coords.push(Rule::Project(m - 1));
    coords.push(Rule::Increment(m - 1));
    Ok(UniversalMachine::assemble(
        MachineKind::MaxTime,
        q,
        n,
        coords,
        vec![
            ("outputs", 0..n),
            ("copy", n..2 * n),
            ("info", info..parity),
            ("parity", parity..counter_start),
            ("counter", counter_window),
            ("reset", m - 2..m),
        ],
        vec![
            ("Q", count.to_string()),
            ("K", k.to_string()),
            ("r", r.to_string()),
        ],
        KindData::MaxTime(MaxTimeData {
            catalog,
            info,
            parity,
            counter_start,
            counter,
        }),
    ))
}

/// Simulates the catalog entries `sequence[0], sequence[1], …` in turn.
/// Boundary targets index the flattened catalog: entry `k`, position `l`
/// is target `k·Q + l`.
pub fn emit_max(machine: &UniversalMachine, sequence: &[usize]) -> Result<Emitted> {
    let KindData::MaxTime(data) = &machine.data else {
        return Err(wrong_kind(machine, "max-time"));
    };
    let (n, m) = (machine.n(), machine.m());
    let count = data.counter.len();
    if let Some(&bad) = sequence.iter().find(|&&i| i >= data.catalog.len()) {
        return Err(Error::Range {
            index: bad,
            limit: data.catalog.len(),
        });
    }
    let mut schedule = Schedule::new();
    for i in 0..n {
        schedule.update(n + i);
    }
    for t in data.parity..data.counter_start {
        schedule.update(t);
    }
    schedule.update(m - 2);
    schedule.update(m - 1);
    for c in data.counter_start..m - 2 {
        schedule.update(c);
    }
    schedule.update(m - 2);
    let mut blocks = Vec::new();
    for &entry in sequence {
        let before = schedule.len();
        schedule.update(data.info + entry);
        for l in 0..count {
            for i in 0..n {
                schedule.update(i);
            }
            schedule.mark(entry * count + l);
            schedule.update(data.counter_start + data.counter.delta()[(l + 1) % count]);
        }
        schedule.update(data.info + entry);
        blocks.push(schedule.len() - before);
    }
    Ok(Emitted {
        schedule,
        targets: machine.catalog(),
        blocks,
    })
}
