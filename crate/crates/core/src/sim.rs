//! Register storage and schedule execution.

use std::collections::BTreeMap;

use crate::algebra::Symbol;
use crate::error::{Error, Result};
use crate::machines::{Schedule, Step, UniversalMachine};

/// Read/write access to the `m` registers of a machine state.
pub trait Registers {
    fn width(&self) -> usize;
    fn get(&self, i: usize) -> Symbol;
    fn set(&mut self, i: usize, value: Symbol);
}

impl Registers for [Symbol] {
    fn width(&self) -> usize {
        self.len()
    }

    #[inline]
    fn get(&self, i: usize) -> Symbol {
        self[i]
    }

    #[inline]
    fn set(&mut self, i: usize, value: Symbol) {
        self[i] = value;
    }
}

impl Registers for Vec<Symbol> {
    fn width(&self) -> usize {
        self.len()
    }

    #[inline]
    fn get(&self, i: usize) -> Symbol {
        self[i]
    }

    #[inline]
    fn set(&mut self, i: usize, value: Symbol) {
        self[i] = value;
    }
}

/// A state of `m` registers stored as overrides on a default symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseState {
    m: usize,
    default: Symbol,
    overrides: BTreeMap<usize, Symbol>,
}

impl SparseState {
    pub fn new(m: usize, default: Symbol) -> Self {
        SparseState {
            m,
            default,
            overrides: BTreeMap::new(),
        }
    }

    pub fn from_dense(x: &[Symbol], default: Symbol) -> Self {
        let mut s = SparseState::new(x.len(), default);
        for (i, &v) in x.iter().enumerate() {
            s.set(i, v);
        }
        s
    }

    pub fn default_symbol(&self) -> Symbol {
        self.default
    }

    /// Number of registers holding a non-default symbol.
    pub fn override_count(&self) -> usize {
        self.overrides.len()
    }

    pub fn to_dense(&self) -> Vec<Symbol> {
        (0..self.m).map(|i| self.get(i)).collect()
    }
}

impl Registers for SparseState {
    fn width(&self) -> usize {
        self.m
    }

    fn get(&self, i: usize) -> Symbol {
        assert!(i < self.m, "register {i} out of range");
        self.overrides.get(&i).copied().unwrap_or(self.default)
    }

    fn set(&mut self, i: usize, value: Symbol) {
        assert!(i < self.m, "register {i} out of range");
        if value == self.default {
            self.overrides.remove(&i);
        } else {
            self.overrides.insert(i, value);
        }
    }
}

/// Applies one schedule step in place. `scratch` holds the pre-step values
/// of a parallel step.
pub fn apply_step<R: Registers + ?Sized>(
    machine: &UniversalMachine,
    step: Step,
    x: &mut R,
    scratch: &mut Vec<Symbol>,
) {
    let q = machine.q();
    match step {
        Step::Update(i) => {
            let v = machine.coords()[i].eval(x, q);
            x.set(i, v);
        }
        Step::Parallel => {
            let last = machine.m() - 1;
            scratch.clear();
            scratch.extend(machine.coords()[..last].iter().map(|r| r.eval(x, q)));
            for (i, &v) in scratch.iter().enumerate() {
                x.set(i, v);
            }
        }
        Step::Last => {
            let last = machine.m() - 1;
            let v = machine.coords()[last].eval(x, q);
            x.set(last, v);
        }
    }
}

/// Runs a whole schedule on `x`.
pub fn run_schedule<R: Registers + ?Sized>(
    machine: &UniversalMachine,
    schedule: &Schedule,
    x: &mut R,
) -> Result<()> {
    if x.width() != machine.m() {
        return Err(Error::Shape(format!(
            "state has {} registers, machine has {}",
            x.width(),
            machine.m()
        )));
    }
    schedule.check(machine.m())?;
    let mut scratch = Vec::new();
    for &step in schedule.steps() {
        apply_step(machine, step, x, &mut scratch);
    }
    Ok(())
}
