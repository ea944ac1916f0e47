//! Test-side oracles, written against the plain definitions rather than
//! the library's helpers.

#![allow(dead_code)]

use mlcomp::machines::{Emitted, Step, UniversalMachine};
use mlcomp::Transformation;

/// Little-endian index of `digits` over `q` symbols.
pub fn index_of(digits: &[u32], q: u32) -> usize {
    digits.iter().rev().fold(0, |acc, &d| acc * q as usize + d as usize)
}

pub fn digits_of(mut j: usize, q: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = (j % q as usize) as u32;
            j /= q as usize;
            d
        })
        .collect()
}

/// Runs `emitted` from `x` and returns the first boundary whose outputs
/// disagree with its target applied to the initial outputs.
pub fn first_mismatch(
    machine: &UniversalMachine,
    emitted: &Emitted,
    x: &mut [u32],
    pre: &mut Vec<u32>,
) -> Option<usize> {
    let (q, n, m) = (machine.q(), machine.n(), machine.m());
    let rules = machine.coords();
    let start = index_of(&x[..n], q);
    let mut bounds = emitted.schedule.boundaries().iter().peekable();
    let steps = emitted.schedule.steps();
    for k in 0..=steps.len() {
        while let Some(b) = bounds.next_if(|b| b.step == k) {
            let want = emitted.targets[b.target].image(start);
            if index_of(&x[..n], q) != want {
                return Some(b.step);
            }
        }
        match steps.get(k) {
            Some(Step::Update(i)) => x[*i] = rules[*i].eval(&*x, q),
            Some(Step::Last) => x[m - 1] = rules[m - 1].eval(&*x, q),
            Some(Step::Parallel) => {
                pre.clear();
                pre.extend_from_slice(x);
                for (i, rule) in rules.iter().enumerate().take(m - 1) {
                    x[i] = rule.eval(&pre[..], q);
                }
            }
            None => {}
        }
    }
    None
}

/// Every state of `A^m` in turn; returns the number of failing states.
pub fn exhaustive_failures(machine: &UniversalMachine, emitted: &Emitted) -> u64 {
    let (q, m) = (machine.q(), machine.m());
    let total = (q as u64).pow(m as u32);
    let mut odometer = vec![0u32; m];
    let (mut x, mut pre) = (vec![0u32; m], Vec::new());
    let mut failures = 0;
    for _ in 0..total {
        x.copy_from_slice(&odometer);
        failures += first_mismatch(machine, emitted, &mut x, &mut pre).is_some() as u64;
        for d in odometer.iter_mut() {
            *d += 1;
            if *d < q {
                break;
            }
            *d = 0;
        }
    }
    failures
}

/// `count` states drawn from a seeded generator.
pub fn sampled_failures(machine: &UniversalMachine, emitted: &Emitted, count: usize, seed: u64) -> u64 {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (q, m) = (machine.q(), machine.m());
    let (mut x, mut pre) = (vec![0u32; m], Vec::new());
    let mut failures = 0;
    for _ in 0..count {
        x.iter_mut().for_each(|d| *d = rng.gen_range(0..q));
        failures += first_mismatch(machine, emitted, &mut x, &mut pre).is_some() as u64;
    }
    failures
}

/// Cyclic Gray code check: every state once, consecutive states (and last
/// to first) at Hamming distance 1, `delta[i]` the coordinate changed into
/// state `i`.
pub fn is_valid_gray(order: &[Vec<u32>], delta: &[usize], q: u32, n: usize, cyclic_once: bool) -> bool {
    let size = (q as usize).pow(n as u32);
    let mut seen = vec![0usize; size];
    for s in order {
        if s.len() != n || s.iter().any(|&d| d >= q) {
            return false;
        }
        seen[index_of(s, q)] += 1;
    }
    let coverage = if cyclic_once {
        seen.iter().all(|&c| c == 1)
    } else {
        seen.iter().all(|&c| c >= 1)
    };
    let len = order.len();
    let steps = (0..len).all(|i| {
        let prev = if i == 0 { len - 1 } else { i - 1 };
        if !cyclic_once && i == 0 {
            return true;
        }
        let diff: Vec<usize> = (0..n).filter(|&c| order[prev][c] != order[i][c]).collect();
        diff.len() == 1 && diff[0] == delta[i]
    });
    coverage && steps && delta.len() == len
}

/// Fewest runs (segments of pairwise distinct entries) covering `seq`.
pub fn min_runs(seq: &[usize]) -> usize {
    let mut runs = 0;
    let mut current: Vec<usize> = Vec::new();
    for &c in seq {
        if current.is_empty() || current.contains(&c) {
            runs += 1;
            current.clear();
        }
        current.push(c);
    }
    runs
}

/// Applies the program given as `(target, table)` pairs to every state.
pub fn run_program(steps: &[(usize, Vec<u32>)], n: usize, q: u32) -> Vec<usize> {
    let size = (q as usize).pow(n as u32);
    (0..size)
        .map(|j| {
            let mut x = digits_of(j, q, n);
            for (t, table) in steps {
                x[*t] = table[index_of(&x, q)];
            }
            index_of(&x, q)
        })
        .collect()
}

pub fn random_map(size: usize, seed: u64) -> Vec<usize> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..size).map(|_| rng.gen_range(0..size)).collect()
}

pub fn transformation(n: usize, q: u32, images: Vec<usize>) -> Transformation {
    Transformation::from_images(n, q, images).expect("valid images")
}
