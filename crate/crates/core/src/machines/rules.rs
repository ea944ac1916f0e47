//! Intensional coordinate functions.
//!
//! A [`Rule`] computes the new value of one register from the current
//! state without tabulating `A^m`. Windows are contiguous register ranges
//! read as little-endian base-`q` numerals.

use std::ops::Range;
use std::sync::Arc;

use crate::algebra::Symbol;
use crate::codes::{err, LinearCode};
use crate::sim::Registers;

/// Value returned by a switch that selects no arm.
pub const NO_ARM: u64 = u64::MAX;

fn window_index<R: Registers + ?Sized>(x: &R, window: &Range<usize>, q: u32) -> usize {
    window
        .clone()
        .rev()
        .fold(0usize, |acc, i| acc * q as usize + x.get(i) as usize)
}

fn window_syndrome<R: Registers + ?Sized>(x: &R, window: &Range<usize>, code: &LinearCode) -> u32 {
    window
        .clone()
        .zip(code.columns())
        .filter(|&(i, _)| x.get(i) & 1 == 1)
        .fold(0, |s, (_, c)| s ^ c)
}

/// Base-`base` digit `pos` of `value`.
fn digit(mut value: u64, base: u64, pos: usize) -> u64 {
    for _ in 0..pos {
        value /= base;
        if value == 0 {
            return 0;
        }
    }
    value % base
}

/// A selector value computed from the state.
#[derive(Clone, Debug)]
pub enum Switch {
    /// `(x_a − x_b) mod q`.
    Difference { a: usize, b: usize },
    /// 0 when `x_a = x_b`, 1 otherwise.
    Inequality { a: usize, b: usize },
    /// Error position decoded from the parities of the window.
    CodeError {
        window: Range<usize>,
        code: Arc<LinearCode>,
    },
    /// Position of the window's state in a Gray code (indexed by lex index).
    GrayIndex {
        window: Range<usize>,
        positions: Arc<[usize]>,
    },
    LexIndex { window: Range<usize> },
    /// `s` when pair `s` is the only pair `(left + s, right + s)` holding
    /// different symbols; [`NO_ARM`] otherwise.
    UniqueActive {
        left: usize,
        right: usize,
        count: usize,
    },
}

impl Switch {
    pub fn eval<R: Registers + ?Sized>(&self, x: &R, q: u32) -> u64 {
        match self {
            Switch::Difference { a, b } => ((x.get(*a) + q - x.get(*b)) % q) as u64,
            Switch::Inequality { a, b } => (x.get(*a) != x.get(*b)) as u64,
            Switch::CodeError { window, code } => {
                code.locate(window_syndrome(x, window, code)) as u64
            }
            Switch::GrayIndex { window, positions } => {
                positions[window_index(x, window, q)] as u64
            }
            Switch::LexIndex { window } => window_index(x, window, q) as u64,
            Switch::UniqueActive { left, right, count } => {
                let mut found = NO_ARM;
                for s in 0..*count {
                    if x.get(left + s) != x.get(right + s) {
                        if found != NO_ARM {
                            return NO_ARM;
                        }
                        found = s as u64;
                    }
                }
                found
            }
        }
    }

    fn reads(&self, out: &mut Vec<usize>) {
        match self {
            Switch::Difference { a, b } | Switch::Inequality { a, b } => out.extend([*a, *b]),
            Switch::CodeError { window, .. }
            | Switch::GrayIndex { window, .. }
            | Switch::LexIndex { window } => out.extend(window.clone()),
            Switch::UniqueActive { left, right, count } => {
                out.extend(*left..left + count);
                out.extend(*right..right + count);
            }
        }
    }
}

/// How an [`Rule::Enumerated`] arm computes its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Enumeration {
    /// Arm `k` is the `k`-th coordinate function `A^n → A`.
    Gamma,
    /// Arm `k` is coordinate `coord` of the `k`-th transformation of `A^n`.
    Map { coord: usize },
}

/// A coordinate function of a machine.
#[derive(Clone, Debug)]
pub enum Rule {
    Project(usize),
    /// `x_j + 1 mod q`.
    Increment(usize),
    Constant(Symbol),
    /// `err(x_j)`: the neighbouring symbol of opposite parity.
    Err(usize),
    /// `table[lex index of window]`.
    Table {
        window: Range<usize>,
        table: Arc<[Symbol]>,
    },
    /// Arm selected by a switch; out-of-range values take the fallback.
    Select {
        switch: Switch,
        arms: Vec<Rule>,
        fallback: Box<Rule>,
    },
    /// Parity bit `bit` of the code word carrying `odd(window)` as information.
    CodeParity {
        window: Range<usize>,
        code: Arc<LinearCode>,
        bit: usize,
    },
    /// Component `component` of the Gray-code successor of the window state.
    GraySuccessor {
        window: Range<usize>,
        successor: Arc<[usize]>,
        component: usize,
    },
    /// Digit `digit` of `(lex(window) + 1) mod modulus`.
    CounterSuccessor {
        window: Range<usize>,
        modulus: u64,
        digit: usize,
    },
    /// Arm `switch − offset` of an enumeration of functions applied to the
    /// window, when `offset ≤ switch < offset + count`.
    Enumerated {
        switch: Switch,
        window: Range<usize>,
        offset: u64,
        count: u64,
        kind: Enumeration,
        fallback: Box<Rule>,
    },
}

impl Rule {
    pub fn eval<R: Registers + ?Sized>(&self, x: &R, q: u32) -> Symbol {
        match self {
            Rule::Project(j) => x.get(*j),
            Rule::Increment(j) => (x.get(*j) + 1) % q,
            Rule::Constant(c) => *c,
            Rule::Err(j) => err(x.get(*j), q),
            Rule::Table { window, table } => table[window_index(x, window, q)],
            Rule::Select {
                switch,
                arms,
                fallback,
            } => {
                let s = switch.eval(x, q);
                match arms.get(s as usize) {
                    Some(arm) if s != NO_ARM => arm.eval(x, q),
                    _ => fallback.eval(x, q),
                }
            }
            Rule::CodeParity { window, code, bit } => {
                (window_syndrome(x, window, code) >> bit & 1) as Symbol
            }
            Rule::GraySuccessor {
                window,
                successor,
                component,
            } => {
                let next = successor[window_index(x, window, q)];
                digit(next as u64, q as u64, *component) as Symbol
            }
            Rule::CounterSuccessor {
                window,
                modulus,
                digit: d,
            } => {
                let next = (window_index(x, window, q) as u64 + 1) % modulus;
                digit(next, q as u64, *d) as Symbol
            }
            Rule::Enumerated {
                switch,
                window,
                offset,
                count,
                kind,
                fallback,
            } => {
                let s = switch.eval(x, q);
                if s == NO_ARM || s < *offset || s - offset >= *count {
                    return fallback.eval(x, q);
                }
                let k = s - offset;
                let j = window_index(x, window, q);
                match kind {
                    Enumeration::Gamma => digit(k, q as u64, j) as Symbol,
                    Enumeration::Map { coord } => {
                        let size = (q as u64).pow(window.len() as u32);
                        let image = digit(k, size, j);
                        digit(image, q as u64, *coord) as Symbol
                    }
                }
            }
        }
    }

    /// Appends every register this rule may read.
    pub fn reads(&self, out: &mut Vec<usize>) {
        match self {
            Rule::Project(j) | Rule::Increment(j) | Rule::Err(j) => out.push(*j),
            Rule::Constant(_) => {}
            Rule::Table { window, .. }
            | Rule::CodeParity { window, .. }
            | Rule::GraySuccessor { window, .. }
            | Rule::CounterSuccessor { window, .. } => out.extend(window.clone()),
            Rule::Select {
                switch,
                arms,
                fallback,
            } => {
                switch.reads(out);
                for a in arms {
                    a.reads(out);
                }
                fallback.reads(out);
            }
            Rule::Enumerated {
                switch,
                window,
                fallback,
                ..
            } => {
                switch.reads(out);
                out.extend(window.clone());
                fallback.reads(out);
            }
        }
    }

    /// Short name of the rule's outermost form.
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Project(_) => "project",
            Rule::Increment(_) => "increment",
            Rule::Constant(_) => "constant",
            Rule::Err(_) => "err",
            Rule::Table { .. } => "table",
            Rule::Select { .. } => "select",
            Rule::CodeParity { .. } => "code-parity",
            Rule::GraySuccessor { .. } => "gray-successor",
            Rule::CounterSuccessor { .. } => "counter-successor",
            Rule::Enumerated { .. } => "enumerated",
        }
    }
}
