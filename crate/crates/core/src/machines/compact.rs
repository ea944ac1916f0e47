//! Size-`(n + 2)` universal machines driven by compiled programs.
//!
//! Both machines read a switch from registers `n` and `n + 1` and apply a
//! generator of `Y` to the outputs depending on its value.

use crate::algebra::Transformation;
use crate::compiler::{a2, ceil_log2, i_power, t1, Compiler, Generator};
use crate::error::Result;

use super::{
    check_alphabet, check_target, table_rule, wrong_kind, Emitted, KindData, MachineKind, Rule,
    Schedule, Step, Switch, SwitchTracker, UniversalMachine,
};

/// Switch arms of output `j` for the compact machine: `(I_j)^(2^b)` at
/// `b < ρ`, then `T1` / `A2` / identity at `ρ`.
pub(crate) fn compact_arms(q: u32, n: usize, j: usize) -> Vec<Rule> {
    let rho = ceil_log2(q as u64);
    let mut arms: Vec<Rule> = (0..rho)
        .map(|b| table_rule(0..n, i_power(n, q, j, 1 << b).coord()))
        .collect();
    arms.push(match j {
        0 => table_rule(0..n, t1(n, q).coord()),
        1 => table_rule(0..n, a2(n, q).coord()),
        _ => Rule::Project(j),
    });
    arms
}

/// Switch arms of output `j` for the simple machine: `I_j` when the
/// switch registers agree, `T1` / `A2` / `I_j` otherwise.
pub(crate) fn simple_arms(q: u32, n: usize, j: usize) -> [Rule; 2] {
    let i = table_rule(0..n, i_power(n, q, j, 1).coord());
    let other = match j {
        0 => table_rule(0..n, t1(n, q).coord()),
        1 => table_rule(0..n, a2(n, q).coord()),
        _ => i.clone(),
    };
    [i, other]
}

/// The universal machine of size `n + 2`. The switch value is
/// `s = x_{n+1} − x_n mod q`; updating register `n` resets it to 0 and
/// updating `n + 1` raises it by one.
pub fn compact_universal(q: u32, n: usize) -> Result<UniversalMachine> {
    check_alphabet(q, n, 2)?;
    let mut coords: Vec<Rule> = (0..n)
        .map(|j| Rule::Select {
            switch: Switch::Difference { a: n + 1, b: n },
            arms: compact_arms(q, n, j),
            fallback: Box::new(Rule::Project(j)),
        })
        .collect();
    coords.push(Rule::Project(n + 1));
    coords.push(Rule::Increment(n + 1));
    Ok(UniversalMachine::assemble(
        MachineKind::Compact,
        q,
        n,
        coords,
        vec![("outputs", 0..n), ("switch", n..n + 2)],
        vec![("rho", ceil_log2(q as u64).to_string())],
        KindData::None,
    ))
}

/// The size-`(n + 2)` machine with a two-valued switch: equal or unequal
/// switch registers.
pub fn simple_compact_universal(q: u32, n: usize) -> Result<UniversalMachine> {
    check_alphabet(q, n, 2)?;
    let switch = Switch::Inequality { a: n, b: n + 1 };
    let mut coords: Vec<Rule> = (0..n)
        .map(|j| {
            let [i, other] = simple_arms(q, n, j);
            if j < 2 {
                Rule::Select {
                    switch: switch.clone(),
                    arms: vec![i, other.clone()],
                    fallback: Box::new(other),
                }
            } else {
                i
            }
        })
        .collect();
    coords.push(Rule::Project(n + 1));
    coords.push(Rule::Select {
        switch,
        arms: vec![Rule::Increment(n + 1)],
        fallback: Box::new(Rule::Project(n + 1)),
    });
    Ok(UniversalMachine::assemble(
        MachineKind::Simple,
        q,
        n,
        coords,
        vec![("outputs", 0..n), ("switch", n..n + 2)],
        vec![],
        KindData::None,
    ))
}

/// Appends the steps realizing one generator on a compact machine whose
/// switch is driven by `tracker`.
pub(crate) fn compact_block(
    gen: Generator,
    rho: u32,
    tracker: &mut SwitchTracker,
    out: &mut Schedule,
) {
    match gen {
        Generator::T1 => {
            tracker.move_to(rho, out);
            out.update(0);
        }
        Generator::A2 => {
            tracker.move_to(rho, out);
            out.update(1);
        }
        Generator::IPow { register, exponent } => {
            for b in 0..rho {
                if exponent >> b & 1 == 1 {
                    tracker.move_to(b, out);
                    out.update(register);
                }
            }
        }
    }
}

/// Appends the steps realizing one generator on the simple machine; the
/// switch registers must agree before and agree again after.
pub(crate) fn simple_block(gen: Generator, n: usize, raise: &[Step], out: &mut Schedule) {
    match gen {
        Generator::T1 | Generator::A2 => {
            out.extend(raise.iter().copied());
            out.update(if gen == Generator::T1 { 0 } else { 1 });
            out.update(n);
        }
        Generator::IPow { register, exponent } => {
            for _ in 0..exponent {
                out.update(register);
            }
        }
    }
}

fn compile(machine: &UniversalMachine, g: &Transformation) -> Result<Vec<Generator>> {
    check_target(machine, g)?;
    Ok(Compiler::new(machine.q(), machine.n())?
        .transformation_program(g)?
        .generators)
}

/// Schedule simulating `g` on [`compact_universal`]: a reset, then one
/// block of at most `2ρ` updates per generator of the compiled program.
pub fn emit_compact(machine: &UniversalMachine, g: &Transformation) -> Result<Emitted> {
    if machine.kind() != MachineKind::Compact {
        return Err(wrong_kind(machine, "compact"));
    }
    let (q, n) = (machine.q(), machine.n());
    let rho = ceil_log2(q as u64);
    let mut schedule = Schedule::new();
    let mut tracker = SwitchTracker::start(
        q,
        vec![Step::Update(n)],
        vec![Step::Update(n + 1)],
        &mut schedule,
    );
    let mut blocks = Vec::new();
    for gen in compile(machine, g)? {
        let before = schedule.len();
        compact_block(gen, rho, &mut tracker, &mut schedule);
        blocks.push(schedule.len() - before);
    }
    schedule.mark(0);
    Ok(Emitted {
        schedule,
        targets: vec![g.clone()],
        blocks,
    })
}

/// Schedule simulating `g` on [`simple_compact_universal`].
pub fn emit_simple(machine: &UniversalMachine, g: &Transformation) -> Result<Emitted> {
    if machine.kind() != MachineKind::Simple {
        return Err(wrong_kind(machine, "simple"));
    }
    let n = machine.n();
    let mut schedule = Schedule::new();
    schedule.update(n);
    let mut blocks = Vec::new();
    for gen in compile(machine, g)? {
        let before = schedule.len();
        simple_block(gen, n, &[Step::Update(n + 1)], &mut schedule);
        blocks.push(schedule.len() - before);
    }
    schedule.mark(0);
    Ok(Emitted {
        schedule,
        targets: vec![g.clone()],
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{digits_into, lex_index, Symbol};
    use crate::sim::run_schedule;

    /// Exhaustive check of the projection equation.
    fn simulates(machine: &UniversalMachine, emitted: &Emitted, g: &Transformation) -> bool {
        let (q, m, n) = (machine.q(), machine.m(), machine.n());
        let total = (q as usize).pow(m as u32);
        let mut x = vec![0 as Symbol; m];
        (0..total).all(|j| {
            digits_into(j, q, &mut x);
            let start = lex_index(&x[..n], q);
            run_schedule(machine, &emitted.schedule, &mut x).unwrap();
            lex_index(&x[..n], q) == g.image(start)
        })
    }

    #[test]
    fn compact_all_targets_q2() {
        let m = compact_universal(2, 2).unwrap();
        assert_eq!(m.m(), 4);
        for s in 0..256 {
            let g = Transformation::from_enumeration_index(2, 2, s);
            let e = emit_compact(&m, &g).unwrap();
            assert!(e.blocks.iter().all(|&b| b <= 2), "{s}");
            assert!(simulates(&m, &e, &g), "target {s}");
        }
    }

    #[test]
    fn identity_is_single_reset() {
        for q in 2..=4 {
            let m = compact_universal(q, 2).unwrap();
            let e = emit_compact(&m, &Transformation::identity(2, q)).unwrap();
            assert_eq!(e.schedule.steps(), &[Step::Update(2)]);
            let m = simple_compact_universal(q, 2).unwrap();
            let e = emit_simple(&m, &Transformation::identity(2, q)).unwrap();
            assert_eq!(e.schedule.steps(), &[Step::Update(2)]);
        }
    }

    #[test]
    fn compact_and_simple_sampled_larger_q() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for q in [3, 4, 5] {
            let c = compact_universal(q, 2).unwrap();
            let s = simple_compact_universal(q, 2).unwrap();
            let rho = ceil_log2(q as u64) as usize;
            for _ in 0..12 {
                let images = (0..(q * q) as usize).map(|_| rng.gen_range(0..(q * q) as usize));
                let g = Transformation::from_images(2, q, images.collect()).unwrap();
                let e = emit_compact(&c, &g).unwrap();
                assert!(e.blocks.iter().all(|&b| b <= 2 * rho));
                assert!(simulates(&c, &e, &g));
                let e = emit_simple(&s, &g).unwrap();
                assert!(simulates(&s, &e, &g));
            }
        }
    }
}
