//! Checking schedules against their targets, and the closure searches
//! behind the impossibility results.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{checked_pow, digits_into, lex_index, Instruction, Symbol, Transformation};
use crate::error::{Error, Result};
use crate::machines::{Emitted, Schedule, UniversalMachine};
use crate::sim::apply_step;

pub const DEFAULT_BUDGET: u128 = 1 << 21;
pub const DEFAULT_SEED: u64 = 0x5eed_2024;
/// Counterexamples kept in a report.
const FAILURE_CAP: usize = 16;
const CHUNK: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    /// Every state of `A^m`, refused above `budget` states.
    Exhaustive { budget: u128 },
    /// `count` uniform states drawn from a seeded generator.
    Sampled { count: usize, seed: u64 },
}

impl Mode {
    pub fn exhaustive() -> Self {
        Mode::Exhaustive {
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn sampled(count: usize) -> Self {
        Mode::Sampled {
            count,
            seed: DEFAULT_SEED,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exhaustive { .. } => write!(f, "exhaustive"),
            Mode::Sampled { count, .. } => write!(f, "sampled({count})"),
        }
    }
}

/// An initial state on which a boundary check failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub state: Vec<Symbol>,
    /// Steps executed before the failing check.
    pub step: usize,
    pub target: usize,
    pub expected: Vec<Symbol>,
    pub found: Vec<Symbol>,
}

/// A measured quantity compared with the value a formula predicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaCheck {
    pub name: String,
    pub expected: u128,
    pub measured: u128,
}

impl FormulaCheck {
    pub fn new(name: impl Into<String>, expected: u128, measured: u128) -> Self {
        FormulaCheck {
            name: name.into(),
            expected,
            measured,
        }
    }

    pub fn holds(&self) -> bool {
        self.expected == self.measured
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub mode: String,
    pub seed: Option<u64>,
    pub checked: u64,
    pub failure_count: u64,
    /// The first few failures.
    pub failures: Vec<Failure>,
    pub lengths: Vec<(String, usize)>,
    pub formulas: Vec<FormulaCheck>,
}

impl VerificationReport {
    fn new(mode: &Mode) -> Self {
        VerificationReport {
            mode: mode.to_string(),
            seed: match mode {
                Mode::Sampled { seed, .. } => Some(*seed),
                Mode::Exhaustive { .. } => None,
            },
            checked: 0,
            failure_count: 0,
            failures: Vec::new(),
            lengths: Vec::new(),
            formulas: Vec::new(),
        }
    }

    /// No failing state and every formula holds.
    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.formulas.iter().all(FormulaCheck::holds)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Folds another report's counts and failures into this one.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.checked += other.checked;
        self.failure_count += other.failure_count;
        let room = FAILURE_CAP.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
        self.lengths.extend(other.lengths);
        self.formulas.extend(other.formulas);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mode: {}", self.mode)?;
        if let Some(seed) = self.seed {
            writeln!(f, "seed: {seed}")?;
        }
        writeln!(f, "checked: {}", self.checked)?;
        writeln!(f, "failures: {}", self.failure_count)?;
        for (name, len) in &self.lengths {
            writeln!(f, "length.{name}: {len}")?;
        }
        for c in &self.formulas {
            writeln!(
                f,
                "formula.{}: expected {} measured {} {}",
                c.name,
                c.expected,
                c.measured,
                if c.holds() { "ok" } else { "MISMATCH" }
            )?;
        }
        for x in &self.failures {
            writeln!(
                f,
                "counterexample: state {:?} step {} target {} expected {:?} found {:?}",
                x.state, x.step, x.target, x.expected, x.found
            )?;
        }
        write!(f, "result: {}", if self.passed() { "pass" } else { "FAIL" })
    }
}

#[derive(Default)]
struct Tally {
    checked: u64,
    failure_count: u64,
    failures: Vec<Failure>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.failure_count += other.failure_count;
        let room = FAILURE_CAP.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
        self
    }

    fn record(&mut self, outcome: Option<Failure>) {
        self.checked += 1;
        if let Some(f) = outcome {
            self.failure_count += 1;
            if self.failures.len() < FAILURE_CAP {
                self.failures.push(f);
            }
        }
    }
}

/// Runs `emitted` from `x`, checking every boundary against the targets
/// applied to the initial outputs.
fn check_one(
    machine: &UniversalMachine,
    emitted: &Emitted,
    x: &mut Vec<Symbol>,
    scratch: &mut Vec<Symbol>,
    initial: &mut Vec<Symbol>,
) -> Option<Failure> {
    let (q, n) = (machine.q(), machine.n());
    initial.clear();
    initial.extend_from_slice(x);
    let start = lex_index(&x[..n], q);
    let steps = emitted.schedule.steps();
    let mut done = 0;
    for b in emitted.schedule.boundaries() {
        while done < b.step {
            apply_step(machine, steps[done], x, scratch);
            done += 1;
        }
        let expected = emitted.targets[b.target].image(start);
        if lex_index(&x[..n], q) != expected {
            let mut want = vec![0; n];
            digits_into(expected, q, &mut want);
            return Some(Failure {
                state: initial.clone(),
                step: b.step,
                target: b.target,
                expected: want,
                found: x[..n].to_vec(),
            });
        }
    }
    None
}

fn validate(machine: &UniversalMachine, emitted: &Emitted) -> Result<()> {
    emitted.schedule.check(machine.m())?;
    if let Some(b) = emitted
        .schedule
        .boundaries()
        .iter()
        .find(|b| b.target >= emitted.targets.len())
    {
        return Err(Error::Range {
            index: b.target,
            limit: emitted.targets.len(),
        });
    }
    if let Some(g) = emitted
        .targets
        .iter()
        .find(|g| g.n() != machine.n() || g.q() != machine.q())
    {
        return Err(Error::Shape(format!(
            "target over [{}]^{}, machine outputs over [{}]^{}",
            g.q(),
            g.n(),
            machine.q(),
            machine.n()
        )));
    }
    Ok(())
}

/// Checks every boundary of `emitted` on the states selected by `mode`.
pub fn verify_sequential(
    machine: &UniversalMachine,
    emitted: &Emitted,
    mode: Mode,
) -> Result<VerificationReport> {
    validate(machine, emitted)?;
    let (q, m) = (machine.q(), machine.m());
    let tally = match mode {
        Mode::Exhaustive { budget } => {
            let total = checked_pow(q, m)
                .map(|t| t as u128)
                .filter(|&t| t <= budget)
                .ok_or_else(|| Error::VerificationBudget {
                    states: crate::machines::pow128(q, m).unwrap_or(u128::MAX),
                    budget,
                })? as usize;
            (0..total.div_ceil(CHUNK))
                .into_par_iter()
                .map(|c| {
                    let mut tally = Tally::default();
                    let mut x = vec![0; m];
                    let (mut scratch, mut initial) = (Vec::new(), Vec::new());
                    for j in c * CHUNK..((c + 1) * CHUNK).min(total) {
                        digits_into(j, q, &mut x);
                        tally.record(check_one(machine, emitted, &mut x, &mut scratch, &mut initial));
                    }
                    tally
                })
                .reduce(Tally::default, Tally::merge)
        }
        Mode::Sampled { count, seed } => (0..count.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c as u64);
                let mut tally = Tally::default();
                let mut x = vec![0; m];
                let (mut scratch, mut initial) = (Vec::new(), Vec::new());
                for _ in c * CHUNK..((c + 1) * CHUNK).min(count) {
                    x.iter_mut().for_each(|d| *d = rng.gen_range(0..q));
                    tally.record(check_one(machine, emitted, &mut x, &mut scratch, &mut initial));
                }
                tally
            })
            .reduce(Tally::default, Tally::merge),
    };
    let mut report = VerificationReport::new(&mode);
    report.checked = tally.checked;
    report.failure_count = tally.failure_count;
    report.failures = tally.failures;
    report
        .lengths
        .push(("schedule".into(), emitted.schedule.len()));
    Ok(report)
}

/// Checks only the end of `schedule` against `g`.
pub fn verify_simulation(
    machine: &UniversalMachine,
    schedule: &Schedule,
    g: &Transformation,
    mode: Mode,
) -> Result<VerificationReport> {
    let mut single = Schedule::from_parts(schedule.steps().to_vec(), Vec::new());
    single.mark(0);
    let emitted = Emitted {
        schedule: single,
        targets: vec![g.clone()],
        blocks: Vec::new(),
    };
    verify_sequential(machine, &emitted, mode)
}

/// The subsemigroup generated by `generators`, in breadth-first order of
/// word length.
#[derive(Clone, Debug)]
pub struct Closure {
    pub elements: Vec<Transformation>,
    /// False when the cap stopped the search before a fixpoint.
    pub complete: bool,
}

impl Closure {
    pub fn contains(&self, g: &Transformation) -> bool {
        self.elements.contains(g)
    }
}

pub fn generated_monoid(generators: &[Transformation], cap: usize) -> Result<Closure> {
    let Some(first) = generators.first() else {
        return Ok(Closure {
            elements: Vec::new(),
            complete: true,
        });
    };
    if generators
        .iter()
        .any(|g| g.n() != first.n() || g.q() != first.q())
    {
        return Err(Error::Shape("generators over different spaces".into()));
    }
    let mut seen: HashSet<Transformation> = HashSet::new();
    let mut elements = Vec::new();
    let mut queue = VecDeque::new();
    for g in generators {
        if seen.insert(g.clone()) {
            elements.push(g.clone());
            queue.push_back(g.clone());
        }
    }
    while let Some(a) = queue.pop_front() {
        for g in generators {
            let b = a.compose(g)?;
            if !seen.contains(&b) {
                if elements.len() >= cap {
                    return Ok(Closure {
                        elements,
                        complete: false,
                    });
                }
                seen.insert(b.clone());
                elements.push(b.clone());
                queue.push_back(b);
            }
        }
    }
    Ok(Closure {
        elements,
        complete: true,
    })
}

/// For every transformation `f` of `A^n`, checks that the semigroup
/// generated by its induced instructions misses some singular map.
pub fn theorem1_check(q: u32, n: usize) -> Result<VerificationReport> {
    let size = checked_pow(q, n).ok_or_else(|| Error::Shape("q^n overflows".into()))?;
    let total = checked_pow(size as u32, size)
        .filter(|&t| t <= 1 << 20)
        .ok_or_else(|| Error::Precondition("Tran(A^n) too large to enumerate".into()))?;
    let singular = total - (1..=size).product::<usize>();
    let mode = Mode::exhaustive();
    let tally = (0..total)
        .into_par_iter()
        .map(|s| {
            let f = Transformation::from_enumeration_index(n, q, s as u128);
            let gens: Vec<Transformation> = (0..n)
                .map(|i| Instruction::induced(&f, i).map(|ins| ins.to_transformation()))
                .collect::<Result<_>>()
                .expect("shape matches");
            let closure = generated_monoid(&gens, total).expect("shape matches");
            let sing = closure.elements.iter().filter(|g| g.rank() < size).count();
            let mut t = Tally::default();
            t.record((sing == singular).then(|| Failure {
                state: f.images().iter().map(|&v| v as Symbol).collect(),
                step: 0,
                target: s,
                expected: vec![],
                found: vec![],
            }));
            t
        })
        .reduce(Tally::default, Tally::merge);
    let mut report = VerificationReport::new(&mode);
    report.checked = tally.checked;
    report.failure_count = tally.failure_count;
    report.failures = tally.failures;
    report.lengths.push(("singular".into(), singular));
    Ok(report)
}

/// Smallest `k ≤ max_k` with `pr ∘ g = f^k ∘ pr`, following the orbit of
/// `f` until it cycles.
pub fn parallel_simulation_search(
    f: &Transformation,
    g: &Transformation,
    max_k: usize,
) -> Result<Option<usize>> {
    if f.q() != g.q() || f.n() < g.n() {
        return Err(Error::Shape("f must act on A^m with m ≥ n".into()));
    }
    let q = f.q();
    let low = checked_pow(q, g.n()).expect("g is tabulated");
    let simulates = |h: &Transformation| {
        (0..h.size()).all(|x| h.image(x) % low == g.image(x % low))
    };
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut h = f.clone();
    for k in 1..=max_k {
        if simulates(&h) {
            return Ok(Some(k));
        }
        if seen.insert(h.images().to_vec(), k).is_some() {
            return Ok(None);
        }
        h = h.compose(f)?;
    }
    Ok(None)
}

/// Whether `f` parallel-simulates both `g1` and `g2` within `max_k` steps.
pub fn simulates_both(
    f: &Transformation,
    g1: &Transformation,
    g2: &Transformation,
    max_k: usize,
) -> Result<bool> {
    Ok(parallel_simulation_search(f, g1, max_k)?.is_some()
        && parallel_simulation_search(f, g2, max_k)?.is_some())
}

/// Over all `f ∈ Tran(A^m)`, counts the maps that parallel-simulate two
/// distinct constant maps of `A^n`. Each failure is one such `f`.
pub fn parallel_impossibility(q: u32, m: usize, n: usize) -> Result<VerificationReport> {
    let size = checked_pow(q, m).ok_or_else(|| Error::Shape("q^m overflows".into()))?;
    let total = checked_pow(size as u32, size)
        .filter(|&t| t <= 1 << 24)
        .ok_or_else(|| Error::Precondition("Tran(A^m) too large to enumerate".into()))?;
    let low = checked_pow(q, n).ok_or_else(|| Error::Shape("q^n overflows".into()))?;
    let constants: Vec<Transformation> = (0..low)
        .map(|c| Transformation::constant(n, q, c))
        .collect::<Result<_>>()?;
    let tally = (0..total)
        .into_par_iter()
        .map(|s| {
            let f = Transformation::from_enumeration_index(m, q, s as u128);
            let hits = constants
                .iter()
                .filter(|c| {
                    parallel_simulation_search(&f, c, usize::MAX)
                        .expect("shapes match")
                        .is_some()
                })
                .count();
            let mut t = Tally::default();
            t.record((hits >= 2).then(|| Failure {
                state: f.images().iter().map(|&v| v as Symbol).collect(),
                step: 0,
                target: s,
                expected: vec![],
                found: vec![],
            }));
            t
        })
        .reduce(Tally::default, Tally::merge);
    let mut report = VerificationReport::new(&Mode::exhaustive());
    report.checked = tally.checked;
    report.failure_count = tally.failure_count;
    report.failures = tally.failures;
    Ok(report)
}

/// The maps `g^(k)` sending state `k` to state 1 and every other state to 0.
pub fn witness_sequence(q: u32, n: usize) -> Result<Vec<Transformation>> {
    let size = checked_pow(q, n).ok_or_else(|| Error::Shape("q^n overflows".into()))?;
    (0..size)
        .map(|k| {
            let images = (0..size).map(|x| (x == k) as usize).collect();
            Transformation::from_images(n, q, images)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::all_instructions;
    use crate::machines::{compact_universal, emit_compact};

    #[test]
    fn monoid_sizes() {
        let id = Transformation::identity(2, 2);
        let c = generated_monoid(&[id.clone()], 10).unwrap();
        assert_eq!(c.elements, vec![id]);
        let all: Vec<_> = all_instructions(2, 2)
            .iter()
            .map(|i| i.to_transformation())
            .collect();
        assert_eq!(generated_monoid(&all, 1000).unwrap().elements.len(), 256);
        let perms: Vec<_> = all.iter().filter(|t| t.is_permutation()).cloned().collect();
        assert_eq!(perms.len(), 8);
        assert_eq!(generated_monoid(&perms, 1000).unwrap().elements.len(), 24);
        let capped = generated_monoid(&all, 50).unwrap();
        assert!(!capped.complete);
        assert_eq!(capped.elements.len(), 50);
    }

    #[test]
    fn witnesses() {
        let w = witness_sequence(2, 2).unwrap();
        assert_eq!(w.len(), 4);
        assert!(w.iter().all(|g| g.rank() == 2));
        assert_eq!(w[0].images(), &[1, 0, 0, 0]);
    }

    #[test]
    fn parallel_search_basics() {
        let id = Transformation::identity(2, 2);
        assert_eq!(parallel_simulation_search(&id, &id, 5).unwrap(), Some(1));
        let c = Transformation::constant(2, 2, 3).unwrap();
        assert_eq!(parallel_simulation_search(&id, &c, 5).unwrap(), None);
        assert_eq!(parallel_simulation_search(&c, &c, 5).unwrap(), Some(1));
    }

    #[test]
    fn mutation_detected_and_budget_refused() {
        let m = compact_universal(2, 2).unwrap();
        let g = Transformation::transposition(2, 2, 0, 3).unwrap();
        let e = emit_compact(&m, &g).unwrap();
        let ok = verify_simulation(&m, &e.schedule, &g, Mode::exhaustive()).unwrap();
        assert!(ok.passed());
        assert_eq!(ok.checked, 16);
        let broken = e.schedule.without_step(e.schedule.len() - 1);
        let bad = verify_simulation(&m, &broken, &g, Mode::exhaustive()).unwrap();
        assert!(!bad.passed());
        assert!(!bad.failures.is_empty());
        let tight = Mode::Exhaustive { budget: 8 };
        assert!(matches!(
            verify_simulation(&m, &e.schedule, &g, tight),
            Err(Error::VerificationBudget { .. })
        ));
        let s = verify_simulation(&m, &e.schedule, &g, Mode::sampled(100)).unwrap();
        assert_eq!(s.checked, 100);
        assert_eq!(s.seed, Some(DEFAULT_SEED));
    }
}
