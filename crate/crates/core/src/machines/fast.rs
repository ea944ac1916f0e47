//! A universal machine whose schedules cost `4n + r` updates for every
//! target.
//!
//! Registers: outputs `[0, n)`, copies `[n, 2n)`, one information register
//! per coordinate function `A^n → A` and `r` parity registers. Flipping the
//! parity of information register `k` makes the code switch decode to
//! `k + 1`, which selects coordinate function `γ^(k)` for every output.

use std::sync::Arc;

use crate::algebra::{coordinate_index, Transformation};
use crate::codes::{parity_length, shortened_hamming};
use crate::error::{Error, Result};

use super::{
    big_q, check_alphabet, check_budget, check_target, wrong_kind, Emitted, Enumeration, KindData,
    MachineKind, Rule, Schedule, Switch, UniversalMachine,
};

#[derive(Clone, Debug)]
pub(crate) struct FastData {
    info: usize,
    parity: usize,
}

pub fn fast_universal(q: u32, n: usize) -> Result<UniversalMachine> {
    check_alphabet(q, n, 1)?;
    let count = check_budget(big_q(q, n))?;
    let r = parity_length(count);
    let m = check_budget(Some((2 * n + count + r) as u128))?;
    let code = Arc::new(shortened_hamming(count)?);
    let info = 2 * n;
    let parity = info + count;
    let mut coords = Vec::with_capacity(m);
    for i in 0..n {
        coords.push(Rule::Enumerated {
            switch: Switch::CodeError {
                window: info..m,
                code: code.clone(),
            },
            window: n..2 * n,
            offset: 1,
            count: count as u64,
            kind: Enumeration::Gamma,
            fallback: Box::new(Rule::Project(i)),
        });
    }
    coords.extend((0..n).map(Rule::Project));
    coords.extend((info..parity).map(Rule::Err));
    coords.extend((0..r).map(|bit| Rule::CodeParity {
        window: info..parity,
        code: code.clone(),
        bit,
    }));
    Ok(UniversalMachine::assemble(
        MachineKind::Fast,
        q,
        n,
        coords,
        vec![
            ("outputs", 0..n),
            ("copy", n..2 * n),
            ("info", info..parity),
            ("parity", parity..m),
        ],
        vec![("Q", count.to_string()), ("r", r.to_string())],
        KindData::Fast(FastData { info, parity }),
    ))
}

/// Copy, encode, then for each output: add the error selecting its
/// coordinate function, compute, remove the error.
pub fn emit_fast(machine: &UniversalMachine, g: &Transformation) -> Result<Emitted> {
    let KindData::Fast(data) = &machine.data else {
        return Err(wrong_kind(machine, "fast"));
    };
    check_target(machine, g)?;
    let n = machine.n();
    let mut schedule = Schedule::new();
    for i in 0..n {
        schedule.update(n + i);
    }
    for t in data.parity..machine.m() {
        schedule.update(t);
    }
    for i in 0..n {
        let k = coordinate_index(&g.coordinate(i), machine.q())
            .ok_or_else(|| Error::Precondition("coordinate index overflow".into()))?;
        let reg = data.info + k as usize;
        schedule.update(reg);
        schedule.update(i);
        schedule.update(reg);
    }
    schedule.mark(0);
    let len = schedule.len();
    Ok(Emitted {
        schedule,
        targets: vec![g.clone()],
        blocks: vec![len],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{lex_index, Symbol};
    use crate::sim::run_schedule;
    use rand::{Rng, SeedableRng};

    #[test]
    fn sizes_and_length() {
        let m = fast_universal(2, 2).unwrap();
        assert_eq!(m.m(), 25);
        assert_eq!(m.param("r"), Some("5"));
        let e = emit_fast(&m, &Transformation::identity(2, 2)).unwrap();
        assert_eq!(e.schedule.len(), 13);
        assert!(matches!(
            fast_universal(2, 4),
            Err(Error::RegisterBudget { .. })
        ));
    }

    #[test]
    fn sampled_targets() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for (q, n) in [(2u32, 2usize), (3, 1), (2, 1)] {
            let machine = fast_universal(q, n).unwrap();
            let size = (q as usize).pow(n as u32);
            for _ in 0..20 {
                let images = (0..size).map(|_| rng.gen_range(0..size)).collect();
                let g = Transformation::from_images(n, q, images).unwrap();
                let e = emit_fast(&machine, &g).unwrap();
                assert_eq!(e.schedule.len(), 4 * n + machine.param("r").unwrap().parse::<usize>().unwrap());
                for _ in 0..200 {
                    let mut x: Vec<Symbol> = (0..machine.m()).map(|_| rng.gen_range(0..q)).collect();
                    let start = lex_index(&x[..n], q);
                    run_schedule(&machine, &e.schedule, &mut x).unwrap();
                    assert_eq!(lex_index(&x[..n], q), g.image(start));
                }
            }
        }
    }
}
