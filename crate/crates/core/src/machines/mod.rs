//! Universal machines: transformations of `A^m` whose induced instructions
//! simulate every transformation of `A^n`, with emitters producing the
//! simulating update schedules.
//!
//! Registers `0..n` are always the outputs. Coordinate functions are
//! [`Rule`]s, so machines stay usable when `q^m` cannot be tabulated.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{checked_pow, Symbol, Transformation};
use crate::error::{Error, Result};

mod compact;
mod complete;
mod elementary;
mod fast;
mod max_time;
mod min_time;
mod ordering;
mod quasi_parallel;
pub mod rules;

pub use compact::{compact_universal, emit_compact, emit_simple, simple_compact_universal};
pub use complete::{complete_compact, emit_complete};
pub use elementary::{elementary_universal, emit_elementary};
pub use fast::{emit_fast, fast_universal};
pub use max_time::{all_diff_catalog, complete_max_time, emit_max};
pub use min_time::{complete_min_time, emit_enumeration};
pub use ordering::all_diff_ordering;
pub use quasi_parallel::{emit_qp, quasi_parallel};
pub use rules::{Enumeration, Rule, Switch};

/// Largest register count a constructor accepts.
pub const REGISTER_BUDGET: usize = 1 << 16;

/// One schedule entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Step {
    /// Update a single register with its coordinate function.
    Update(usize),
    /// Update every register but the last, simultaneously.
    Parallel,
    /// Update the last register.
    Last,
}

/// After `step` steps have run, the outputs must equal target `target`
/// applied to the original outputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Boundary {
    pub step: usize,
    pub target: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Schedule {
    steps: Vec<Step>,
    boundaries: Vec<Boundary>,
}

impl Schedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(steps: Vec<Step>, boundaries: Vec<Boundary>) -> Self {
        Schedule { steps, boundaries }
    }

    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    pub fn update(&mut self, register: usize) {
        self.steps.push(Step::Update(register));
    }

    pub fn extend(&mut self, steps: impl IntoIterator<Item = Step>) {
        self.steps.extend(steps);
    }

    /// Records a boundary at the current position.
    pub fn mark(&mut self, target: usize) {
        self.boundaries.push(Boundary {
            step: self.steps.len(),
            target,
        });
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn boundaries(&self) -> &[Boundary] {
        &self.boundaries
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Number of [`Step::Last`] entries.
    pub fn last_count(&self) -> usize {
        self.steps.iter().filter(|s| **s == Step::Last).count()
    }

    /// Register indices below `m`, boundaries in order and within range.
    pub fn check(&self, m: usize) -> Result<()> {
        if let Some(Step::Update(i)) = self
            .steps
            .iter()
            .find(|s| matches!(s, Step::Update(i) if *i >= m))
        {
            return Err(Error::Range { index: *i, limit: m });
        }
        let mut prev = 0;
        for b in &self.boundaries {
            if b.step < prev || b.step > self.steps.len() {
                return Err(Error::Precondition(format!(
                    "boundary at step {} out of order",
                    b.step
                )));
            }
            prev = b.step;
        }
        Ok(())
    }

    /// Copy with step `i` removed; boundaries after it move back by one.
    pub fn without_step(&self, i: usize) -> Schedule {
        let mut steps = self.steps.clone();
        steps.remove(i);
        let boundaries = self
            .boundaries
            .iter()
            .map(|b| Boundary {
                step: if b.step > i { b.step - 1 } else { b.step },
                target: b.target,
            })
            .collect();
        Schedule { steps, boundaries }
    }

    /// Copy with steps `i` and `i + 1` exchanged.
    pub fn with_swap(&self, i: usize) -> Schedule {
        let mut s = self.clone();
        s.steps.swap(i, i + 1);
        s
    }
}

/// A schedule together with the targets its boundaries refer to.
#[derive(Clone, Debug)]
pub struct Emitted {
    pub schedule: Schedule,
    pub targets: Vec<Transformation>,
    /// Lengths of the emitter's natural blocks: one per generator for the
    /// single-target compilers, one per target or pass for the others.
    pub blocks: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MachineKind {
    Elementary,
    Compact,
    Simple,
    Fast,
    Complete,
    MinTime,
    MaxTime,
    QuasiParallel,
}

impl MachineKind {
    pub const ALL: [MachineKind; 8] = [
        MachineKind::Elementary,
        MachineKind::Compact,
        MachineKind::Simple,
        MachineKind::Fast,
        MachineKind::Complete,
        MachineKind::MinTime,
        MachineKind::MaxTime,
        MachineKind::QuasiParallel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MachineKind::Elementary => "elementary",
            MachineKind::Compact => "compact",
            MachineKind::Simple => "simple",
            MachineKind::Fast => "fast",
            MachineKind::Complete => "complete",
            MachineKind::MinTime => "min-time",
            MachineKind::MaxTime => "max-time",
            MachineKind::QuasiParallel => "quasi-parallel",
        }
    }

    /// Whether the machine carries a caller-supplied catalog.
    pub fn has_catalog(self) -> bool {
        matches!(self, MachineKind::MaxTime | MachineKind::QuasiParallel)
    }
}

impl fmt::Display for MachineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MachineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MachineKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown machine kind {s:?}")))
    }
}

/// A named group of consecutive registers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Group {
    pub name: String,
    pub registers: Range<usize>,
}

/// Per-kind data the emitters need.
#[derive(Clone, Debug)]
pub(crate) enum KindData {
    None,
    Fast(fast::FastData),
    Complete(complete::CompleteData),
    MinTime(min_time::MinTimeData),
    MaxTime(max_time::MaxTimeData),
    QuasiParallel(quasi_parallel::QpData),
}

/// A transformation of `A^m` given by one rule per register.
#[derive(Clone, Debug)]
pub struct UniversalMachine {
    kind: MachineKind,
    q: u32,
    n: usize,
    coords: Vec<Rule>,
    layout: Vec<Group>,
    params: Vec<(String, String)>,
    pub(crate) data: KindData,
}

impl UniversalMachine {
    pub(crate) fn assemble(
        kind: MachineKind,
        q: u32,
        n: usize,
        coords: Vec<Rule>,
        layout: Vec<(&str, Range<usize>)>,
        params: Vec<(&str, String)>,
        data: KindData,
    ) -> Self {
        let machine = UniversalMachine {
            kind,
            q,
            n,
            coords,
            layout: layout
                .into_iter()
                .filter(|(_, r)| !r.is_empty())
                .map(|(name, registers)| Group {
                    name: name.to_string(),
                    registers,
                })
                .collect(),
            params: params
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            data,
        };
        debug_assert!(machine.validate().is_ok(), "{:?}", machine.validate());
        machine
    }

    pub fn kind(&self) -> MachineKind {
        self.kind
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rule] {
        &self.coords
    }

    pub fn layout(&self) -> &[Group] {
        &self.layout
    }

    pub fn group(&self, name: &str) -> Option<Range<usize>> {
        self.layout
            .iter()
            .find(|g| g.name == name)
            .map(|g| g.registers.clone())
    }

    /// Construction parameters as `name=value` pairs.
    pub fn params(&self) -> &[(String, String)] {
        &self.params
    }

    pub fn param(&self, name: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }

    /// The catalog of a max-time (flattened) or quasi-parallel machine.
    pub fn catalog(&self) -> Vec<Transformation> {
        match &self.data {
            KindData::MaxTime(d) => d.catalog.iter().flatten().cloned().collect(),
            KindData::QuasiParallel(d) => d.catalog.clone(),
            _ => Vec::new(),
        }
    }

    /// Checks that the layout partitions `0..m`, outputs come first, and
    /// every rule reads registers of the machine only.
    pub fn validate(&self) -> Result<()> {
        let m = self.m();
        let mut owner = vec![usize::MAX; m];
        for (g, group) in self.layout.iter().enumerate() {
            for i in group.registers.clone() {
                if i >= m {
                    return Err(Error::Range { index: i, limit: m });
                }
                if owner[i] != usize::MAX {
                    return Err(Error::Shape(format!("register {i} in two groups")));
                }
                owner[i] = g;
            }
        }
        if let Some(i) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::Shape(format!("register {i} in no group")));
        }
        if self.group("outputs") != Some(0..self.n) {
            return Err(Error::Shape("outputs must be registers 0..n".into()));
        }
        let mut reads = Vec::new();
        for rule in &self.coords {
            reads.clear();
            rule.reads(&mut reads);
            if let Some(&i) = reads.iter().find(|&&i| i >= m) {
                return Err(Error::Range { index: i, limit: m });
            }
        }
        Ok(())
    }

    /// Applies the full transformation `f` to a dense state.
    pub fn apply(&self, x: &[Symbol]) -> Vec<Symbol> {
        self.coords.iter().map(|r| r.eval(x, self.q)).collect()
    }
}

/// `q^e` as `u128`, or `None` on overflow.
pub(crate) fn pow128(q: u32, e: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(q as u128)?;
    }
    Some(acc)
}

/// `Q = q^(q^n)`, the number of coordinate functions `A^n → A`.
pub(crate) fn big_q(q: u32, n: usize) -> Option<u128> {
    pow128(q, checked_pow(q, n)?)
}

/// Smallest `e` with `q^e ≥ v`.
pub(crate) fn ceil_log(q: u32, v: u128) -> usize {
    let mut e = 0;
    let mut p: u128 = 1;
    while p < v {
        p = p.saturating_mul(q as u128);
        e += 1;
    }
    e
}

pub(crate) fn check_budget(needed: Option<u128>) -> Result<usize> {
    match needed {
        Some(m) if m <= REGISTER_BUDGET as u128 => Ok(m as usize),
        _ => Err(Error::RegisterBudget {
            needed: needed.unwrap_or(u128::MAX),
            budget: REGISTER_BUDGET,
        }),
    }
}

pub(crate) fn check_alphabet(q: u32, n: usize, min_n: usize) -> Result<()> {
    if q < 2 {
        return Err(Error::Precondition(format!("alphabet size {q} < 2")));
    }
    if n < min_n {
        return Err(Error::Precondition(format!("n={n} < {min_n}")));
    }
    Ok(())
}

pub(crate) fn check_target(machine: &UniversalMachine, g: &Transformation) -> Result<()> {
    if g.n() != machine.n() || g.q() != machine.q() {
        return Err(Error::Shape(format!(
            "target over [{}]^{} for a machine over [{}]^{}",
            g.q(),
            g.n(),
            machine.q(),
            machine.n()
        )));
    }
    Ok(())
}

pub(crate) fn wrong_kind(machine: &UniversalMachine, want: &str) -> Error {
    Error::Precondition(format!("expected a {want} machine, got {}", machine.kind()))
}

/// Tracks the value of a cyclic switch and emits the cheapest way to move it.
#[derive(Clone, Debug)]
pub(crate) struct SwitchTracker {
    q: u32,
    s: u32,
    reset: Vec<Step>,
    increment: Vec<Step>,
}

impl SwitchTracker {
    /// Emits the reset and starts tracking from 0.
    pub fn start(q: u32, reset: Vec<Step>, increment: Vec<Step>, out: &mut Schedule) -> Self {
        out.extend(reset.iter().copied());
        SwitchTracker {
            q,
            s: 0,
            reset,
            increment,
        }
    }

    /// Records an increment performed by other means.
    pub fn bump(&mut self) {
        self.s = (self.s + 1) % self.q;
    }

    pub fn move_to(&mut self, t: u32, out: &mut Schedule) {
        let forward = (t + self.q - self.s) % self.q;
        let (reset, count) = if 1 + t < forward { (true, t) } else { (false, forward) };
        if reset {
            out.extend(self.reset.iter().copied());
        }
        for _ in 0..count {
            out.extend(self.increment.iter().copied());
        }
        self.s = t;
    }
}

/// Table rule on the output window for an instruction's coordinate.
pub(crate) fn table_rule(window: Range<usize>, coord: &[Symbol]) -> Rule {
    Rule::Table {
        window,
        table: coord.into(),
    }
}
