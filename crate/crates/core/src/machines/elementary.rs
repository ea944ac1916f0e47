//! The elementary universal machine: one two-register switch per
//! transformation of `A^n`.
//!
//! Registers: outputs, copies, left switch registers `[2n, 2n+N)` and right
//! switch registers `[2n+N, 2n+2N)` with `N = |Tran(A^n)|`. Switch `s` is on
//! when its registers differ; when it is the only one on, the outputs
//! compute the `s`-th transformation of the copies.

use crate::algebra::{checked_pow, Transformation};
use crate::error::{Error, Result};

use super::{
    check_alphabet, check_budget, check_target, pow128, Emitted, Enumeration, KindData,
    MachineKind, Rule, Schedule, Switch, UniversalMachine,
};

pub fn elementary_universal(q: u32, n: usize) -> Result<UniversalMachine> {
    check_alphabet(q, n, 1)?;
    let size = checked_pow(q, n).ok_or(Error::RegisterBudget {
        needed: u128::MAX,
        budget: super::REGISTER_BUDGET,
    })?;
    let count = n.checked_mul(size).and_then(|e| pow128(q, e));
    let total = check_budget(count.and_then(|c| c.checked_mul(2)?.checked_add(2 * n as u128)))?;
    let count = (total - 2 * n) / 2;
    let (left, right) = (2 * n, 2 * n + count);
    let switch = Switch::UniqueActive { left, right, count };
    let mut coords: Vec<Rule> = (0..n)
        .map(|i| Rule::Enumerated {
            switch: switch.clone(),
            window: n..2 * n,
            offset: 0,
            count: count as u64,
            kind: Enumeration::Map { coord: i },
            fallback: Box::new(Rule::Project(i)),
        })
        .collect();
    coords.extend((0..n).map(Rule::Project));
    coords.extend((0..count).map(|s| Rule::Increment(right + s)));
    coords.extend((0..count).map(|s| Rule::Project(left + s)));
    Ok(UniversalMachine::assemble(
        MachineKind::Elementary,
        q,
        n,
        coords,
        vec![
            ("outputs", 0..n),
            ("copy", n..2 * n),
            ("left", left..right),
            ("right", right..right + count),
        ],
        vec![("switches", count.to_string())],
        KindData::None,
    ))
}

/// One target: copy, switch everything off, switch `g` on, compute all
/// outputs. Several targets: copy and switch off once, then per target
/// switch on, update the outputs whose coordinate function changed,
/// switch off.
pub fn emit_elementary(machine: &UniversalMachine, targets: &[Transformation]) -> Result<Emitted> {
    if machine.kind() != MachineKind::Elementary {
        return Err(super::wrong_kind(machine, "elementary"));
    }
    let n = machine.n();
    let count = machine.group("left").map_or(0, |r| r.len());
    let (left, right) = (2 * n, 2 * n + count);
    let mut schedule = Schedule::new();
    for i in 0..n {
        schedule.update(n + i);
    }
    for s in 0..count {
        schedule.update(right + s);
    }
    let mut blocks = Vec::new();
    let mut prev = Transformation::identity(n, machine.q());
    for (t, g) in targets.iter().enumerate() {
        check_target(machine, g)?;
        let s = g
            .enumeration_index()
            .filter(|&s| s < count as u128)
            .expect("enumeration index below the switch count") as usize;
        let before = schedule.len();
        schedule.update(left + s);
        for i in 0..n {
            if targets.len() == 1 || g.coordinate(i) != prev.coordinate(i) {
                schedule.update(i);
            }
        }
        schedule.mark(t);
        if targets.len() > 1 {
            schedule.update(right + s);
        }
        blocks.push(schedule.len() - before);
        prev = g.clone();
    }
    Ok(Emitted {
        schedule,
        targets: targets.to_vec(),
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{lex_index, Symbol};
    use crate::sim::{run_schedule, SparseState};
    use rand::{Rng, SeedableRng};

    #[test]
    fn size_and_single_target_length() {
        let m = elementary_universal(2, 2).unwrap();
        assert_eq!(m.m(), 516);
        let e = emit_elementary(&m, &[Transformation::identity(2, 2)]).unwrap();
        assert_eq!(e.schedule.len(), 261);
        assert!(matches!(
            elementary_universal(2, 3),
            Err(Error::RegisterBudget { .. })
        ));
    }

    #[test]
    fn single_targets_sampled() {
        let m = elementary_universal(2, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for s in [0u128, 17, 100, 255] {
            let g = Transformation::from_enumeration_index(2, 2, s);
            let e = emit_elementary(&m, &[g.clone()]).unwrap();
            for _ in 0..50 {
                let x: Vec<Symbol> = (0..m.m()).map(|_| rng.gen_range(0..2)).collect();
                let mut sparse = SparseState::from_dense(&x, 0);
                let start = lex_index(&x[..2], 2);
                run_schedule(&m, &e.schedule, &mut sparse).unwrap();
                let out = [sparse.to_dense()[0], sparse.to_dense()[1]];
                assert_eq!(lex_index(&out, 2), g.image(start));
            }
        }
    }
}
