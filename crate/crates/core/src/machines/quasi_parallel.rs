//! Complete quasi-parallel machine: every step updates all registers but
//! the last at once, and the last register is updated exactly once.
//!
//! Registers: a belt of `K + 2` blocks of `n` registers (block 0 is the
//! outputs; block `b` copies block `b − 1` each step), a counter `C` modulo
//! `K + 2` on `σ'` registers, and a reset pair. The outputs compute
//! `p^(C)` of block `C`, where `p^(0) = p^(1)` is the identity and
//! `p^(2), …, p^(K+1)` is the catalog.

use crate::algebra::Transformation;
use crate::error::{Error, Result};

use super::{
    ceil_log, check_alphabet, check_budget, table_rule, wrong_kind, Emitted, KindData,
    MachineKind, Rule, Schedule, Step, Switch, UniversalMachine,
};

#[derive(Clone, Debug)]
pub(crate) struct QpData {
    pub(crate) catalog: Vec<Transformation>,
}

pub fn quasi_parallel(q: u32, n: usize, catalog: Vec<Transformation>) -> Result<UniversalMachine> {
    check_alphabet(q, n, 1)?;
    if catalog.is_empty() {
        return Err(Error::Precondition("catalog is empty".into()));
    }
    if let Some(g) = catalog.iter().find(|g| g.n() != n || g.q() != q) {
        return Err(Error::Shape(format!("catalog entry over [{}]^{}", g.q(), g.n())));
    }
    let k = catalog.len();
    let blocks = k + 2;
    let sigma = ceil_log(q, blocks as u128);
    let m = check_budget(Some((blocks * n + sigma + 2) as u128))?;
    let counter = blocks * n..blocks * n + sigma;

    let mut coords: Vec<Rule> = (0..n)
        .map(|i| {
            let mut arms = vec![Rule::Project(i), Rule::Project(n + i)];
            arms.extend(
                catalog
                    .iter()
                    .enumerate()
                    .map(|(c, g)| table_rule((c + 2) * n..(c + 3) * n, &g.coordinate(i))),
            );
            Rule::Select {
                switch: Switch::LexIndex {
                    window: counter.clone(),
                },
                arms,
                fallback: Box::new(Rule::Project(i)),
            }
        })
        .collect();
    coords.extend((n..blocks * n).map(|j| Rule::Project(j - n)));
    let mut reset_digits = 2usize;
    for digit in 0..sigma {
        coords.push(Rule::Select {
            switch: Switch::Inequality { a: m - 2, b: m - 1 },
            arms: vec![Rule::CounterSuccessor {
                window: counter.clone(),
                modulus: blocks as u64,
                digit,
            }],
            fallback: Box::new(Rule::Constant((reset_digits % q as usize) as u32)),
        });
        reset_digits /= q as usize;
    }
    coords.push(Rule::Project(m - 1));
    coords.push(Rule::Increment(m - 1));
    Ok(UniversalMachine::assemble(
        MachineKind::QuasiParallel,
        q,
        n,
        coords,
        vec![
            ("outputs", 0..n),
            ("belt", n..blocks * n),
            ("counter", counter),
            ("reset", m - 2..m),
        ],
        vec![("K", k.to_string()), ("sigma", sigma.to_string())],
        KindData::QuasiParallel(QpData { catalog }),
    ))
}

/// `P L P`, then `K` parallel steps realizing the catalog, then `ℓ − 1`
/// further rounds of `K + 2` parallel steps. Boundary targets are catalog
/// indices, with `K` standing for the identity. Repeating requires the
/// last catalog entry to be the identity, since the original input leaves
/// the belt during the first round.
pub fn emit_qp(machine: &UniversalMachine, repetitions: usize) -> Result<Emitted> {
    let KindData::QuasiParallel(data) = &machine.data else {
        return Err(wrong_kind(machine, "quasi-parallel"));
    };
    let k = data.catalog.len();
    if repetitions == 0 {
        return Err(Error::Precondition("at least one repetition".into()));
    }
    if repetitions > 1 && !data.catalog[k - 1].is_identity() {
        return Err(Error::Precondition(
            "repeating the catalog needs an identity as its last entry".into(),
        ));
    }
    let mut schedule = Schedule::from_parts(vec![Step::Parallel, Step::Last, Step::Parallel], vec![]);
    let mut blocks = Vec::new();
    let before = schedule.len();
    for c in 0..k {
        schedule.push(Step::Parallel);
        schedule.mark(c);
    }
    blocks.push(schedule.len() - before);
    for _ in 1..repetitions {
        let before = schedule.len();
        for c in 0..k + 2 {
            schedule.push(Step::Parallel);
            schedule.mark(if c < 2 { k } else { c - 2 });
        }
        blocks.push(schedule.len() - before);
    }
    let mut targets = data.catalog.clone();
    targets.push(Transformation::identity(machine.n(), machine.q()));
    Ok(Emitted {
        schedule,
        targets,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::apply_step;

    #[test]
    fn size_and_single_last() {
        let cat = vec![Transformation::identity(2, 2); 4];
        let m = quasi_parallel(2, 2, cat).unwrap();
        assert_eq!(m.m(), 17);
        let e = emit_qp(&m, 3).unwrap();
        assert_eq!(e.schedule.last_count(), 1);
        assert!(e
            .schedule
            .steps()
            .iter()
            .all(|s| matches!(s, Step::Parallel | Step::Last)));
    }

    #[test]
    fn parallel_step_shifts_belt() {
        let cat = vec![Transformation::constant(2, 2, 3).unwrap(); 2];
        let m = quasi_parallel(2, 2, cat.clone()).unwrap();
        assert!(emit_qp(&m, 2).is_err());
        let x: Vec<u32> = vec![1, 0, 0, 1, 1, 1, 0, 0, 1, 0, 1, 1, 0, 1];
        let mut y = x.clone();
        apply_step(&m, Step::Parallel, &mut y, &mut Vec::new());
        assert_eq!(&y[2..8], &x[0..6]);
    }
}
