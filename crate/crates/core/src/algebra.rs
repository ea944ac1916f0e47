//! Finite algebra of states, transformations, instructions and programs over
//! the alphabet `Z_q`.
//!
//! Transformations act on the right: `(x)(f ∘ g) = ((x)f)g`, so
//! [`Transformation::compose`] applies `self` first. States are indexed
//! little-endian, `index(x) = Σ x_i q^i` with register 0 least significant.
//! Registers are numbered from 0 throughout the crate.

use std::fmt;

use crate::error::{Error, Result};

/// A symbol of the alphabet `Z_q`.
pub type Symbol = u32;

/// `q^n`, or `None` on overflow.
pub fn checked_pow(q: u32, n: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..n {
        acc = acc.checked_mul(q as usize)?;
    }
    Some(acc)
}

fn space_size(n: usize, q: u32) -> usize {
    checked_pow(q, n).expect("state space does not fit in usize")
}

/// Lexicographic (little-endian) index of a digit vector.
pub fn lex_index(digits: &[Symbol], q: u32) -> usize {
    digits
        .iter()
        .rev()
        .fold(0usize, |acc, &d| acc * q as usize + d as usize)
}

/// Writes the digits of `index` into `out` (little-endian).
pub fn digits_into(mut index: usize, q: u32, out: &mut [Symbol]) {
    for d in out.iter_mut() {
        *d = (index % q as usize) as Symbol;
        index /= q as usize;
    }
}

/// An element of `A^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    q: u32,
    digits: Vec<Symbol>,
}

impl State {
    pub fn new(digits: Vec<Symbol>, q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::Precondition(format!("alphabet size {q} < 2")));
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= q) {
            return Err(Error::Shape(format!("digit {d} not below q={q}")));
        }
        Ok(State { q, digits })
    }

    /// The all-zero state `e^0`.
    pub fn zero(n: usize, q: u32) -> Self {
        State {
            q,
            digits: vec![0; n],
        }
    }

    /// `λ e^i`: symbol `lambda` in register `register`, zero elsewhere.
    pub fn scaled_unit(register: usize, lambda: Symbol, n: usize, q: u32) -> Self {
        let mut s = State::zero(n, q);
        s.digits[register] = lambda % q;
        s
    }

    pub fn from_index(index: usize, n: usize, q: u32) -> Result<Self> {
        let limit = checked_pow(q, n).ok_or_else(|| Error::Shape("q^n overflows".into()))?;
        if index >= limit {
            return Err(Error::Range { index, limit });
        }
        let mut digits = vec![0; n];
        digits_into(index, q, &mut digits);
        Ok(State { q, digits })
    }

    pub fn index(&self) -> usize {
        lex_index(&self.digits, self.q)
    }

    pub fn digits(&self) -> &[Symbol] {
        &self.digits
    }

    pub fn n(&self) -> usize {
        self.digits.len()
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of nonzero registers.
    pub fn weight(&self) -> usize {
        self.digits.iter().filter(|&&d| d != 0).count()
    }

    pub fn hamming_distance(&self, other: &State) -> usize {
        self.digits
            .iter()
            .zip(&other.digits)
            .filter(|(a, b)| a != b)
            .count()
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 && self.q > 10 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Enumeration index of a coordinate function `A^n → A` given by its
/// table: entry `j` is base-`q` digit `j`. `None` if it exceeds 128 bits.
pub fn coordinate_index(table: &[Symbol], q: u32) -> Option<u128> {
    table
        .iter()
        .rev()
        .try_fold(0u128, |acc, &d| acc.checked_mul(q as u128)?.checked_add(d as u128))
}

/// Inverse of [`coordinate_index`].
pub fn coordinate_table(mut gamma: u128, n: usize, q: u32) -> Result<Vec<Symbol>> {
    let size = checked_pow(q, n).ok_or_else(|| Error::Shape("q^n overflows".into()))?;
    let table = (0..size)
        .map(|_| {
            let d = (gamma % q as u128) as Symbol;
            gamma /= q as u128;
            d
        })
        .collect();
    if gamma != 0 {
        return Err(Error::Precondition(format!(
            "coordinate index exceeds q^(q^n) for q={q}, n={n}"
        )));
    }
    Ok(table)
}

/// Lexicographic index of the state `λ e^i`.
pub fn scaled_unit_index(register: usize, lambda: Symbol, q: u32) -> usize {
    lambda as usize * space_size(register, q)
}

/// A transformation of `A^n`, stored as the table of image indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    n: usize,
    q: u32,
    images: Vec<usize>,
}

impl Transformation {
    pub fn identity(n: usize, q: u32) -> Self {
        Transformation {
            n,
            q,
            images: (0..space_size(n, q)).collect(),
        }
    }

    pub fn constant(n: usize, q: u32, value: usize) -> Result<Self> {
        let size = space_size(n, q);
        if value >= size {
            return Err(Error::Range {
                index: value,
                limit: size,
            });
        }
        Ok(Transformation {
            n,
            q,
            images: vec![value; size],
        })
    }

    pub fn from_images(n: usize, q: u32, images: Vec<usize>) -> Result<Self> {
        let size = checked_pow(q, n).ok_or_else(|| Error::Shape("q^n overflows".into()))?;
        if images.len() != size {
            return Err(Error::Shape(format!(
                "table has {} entries, expected q^n = {size}",
                images.len()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&v| v >= size) {
            return Err(Error::Range {
                index: bad,
                limit: size,
            });
        }
        Ok(Transformation { n, q, images })
    }

    /// Builds a transformation from a function on digit vectors.
    pub fn from_fn(n: usize, q: u32, mut f: impl FnMut(&[Symbol]) -> Vec<Symbol>) -> Self {
        let size = space_size(n, q);
        let mut x = vec![0; n];
        let images = (0..size)
            .map(|j| {
                digits_into(j, q, &mut x);
                let y = f(&x);
                debug_assert_eq!(y.len(), n);
                lex_index(&y, q)
            })
            .collect();
        Transformation { n, q, images }
    }

    /// Builds a transformation from its `n` coordinate-function tables.
    pub fn from_coordinates(n: usize, q: u32, coords: &[Vec<Symbol>]) -> Result<Self> {
        let size = space_size(n, q);
        if coords.len() != n || coords.iter().any(|c| c.len() != size) {
            return Err(Error::Shape(format!(
                "expected {n} coordinate tables of length {size}"
            )));
        }
        let images = (0..size)
            .map(|j| {
                coords
                    .iter()
                    .rev()
                    .fold(0usize, |acc, c| acc * q as usize + c[j] as usize)
            })
            .collect();
        Ok(Transformation { n, q, images })
    }

    /// The `s`-th transformation in the lexicographic enumeration of
    /// `Tran(A^n)`: the image of state `j` is base-`q^n` digit `j` of `s`.
    pub fn from_enumeration_index(n: usize, q: u32, mut s: u128) -> Self {
        let size = space_size(n, q);
        let images = (0..size)
            .map(|_| {
                let v = (s % size as u128) as usize;
                s /= size as u128;
                v
            })
            .collect();
        Transformation { n, q, images }
    }

    /// Position of `self` in the enumeration of [`Self::from_enumeration_index`],
    /// or `None` when it does not fit in 128 bits.
    pub fn enumeration_index(&self) -> Option<u128> {
        let base = self.size() as u128;
        self.images
            .iter()
            .rev()
            .try_fold(0u128, |acc, &v| acc.checked_mul(base)?.checked_add(v as u128))
    }

    /// Builds a transformation from the enumeration indices of its
    /// coordinate functions (see [`coordinate_index`]).
    pub fn from_coordinate_indices(n: usize, q: u32, gammas: &[u128]) -> Result<Self> {
        if gammas.len() != n {
            return Err(Error::Shape(format!("{} coordinate functions for n={n}", gammas.len())));
        }
        let coords = gammas
            .iter()
            .map(|&g| coordinate_table(g, n, q))
            .collect::<Result<Vec<_>>>()?;
        Transformation::from_coordinates(n, q, &coords)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of states, `q^n`.
    pub fn size(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image index of the state with index `j`.
    #[inline]
    pub fn image(&self, j: usize) -> usize {
        self.images[j]
    }

    pub fn image_state(&self, j: usize) -> State {
        State::from_index(self.images[j], self.n, self.q).expect("image in range")
    }

    fn check_state(&self, x: &State) -> Result<()> {
        if x.n() != self.n || x.q() != self.q {
            return Err(Error::Shape(format!(
                "state over (n={}, q={}) applied to transformation over (n={}, q={})",
                x.n(),
                x.q(),
                self.n,
                self.q
            )));
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &State) -> Result<State> {
        self.check_state(x)?;
        Ok(self.image_state(x.index()))
    }

    fn check_shape(&self, other: &Transformation) -> Result<()> {
        if self.n != other.n || self.q != other.q {
            return Err(Error::Shape(format!(
                "(n={}, q={}) vs (n={}, q={})",
                self.n, self.q, other.n, other.q
            )));
        }
        Ok(())
    }

    /// `self ∘ other`: apply `self`, then `other`.
    pub fn compose(&self, other: &Transformation) -> Result<Transformation> {
        self.check_shape(other)?;
        Ok(self.then(other))
    }

    /// Unchecked composition for callers that already hold matching shapes.
    pub(crate) fn then(&self, other: &Transformation) -> Transformation {
        Transformation {
            n: self.n,
            q: self.q,
            images: self.images.iter().map(|&v| other.images[v]).collect(),
        }
    }

    pub fn power(&self, k: u64) -> Transformation {
        let mut acc = Transformation {
            n: self.n,
            q: self.q,
            images: (0..self.size()).collect(),
        };
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            k >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(j, &v)| j == v)
    }

    pub fn rank(&self) -> usize {
        let mut seen = vec![false; self.size()];
        let mut count = 0;
        for &v in &self.images {
            if !seen[v] {
                seen[v] = true;
                count += 1;
            }
        }
        count
    }

    pub fn is_permutation(&self) -> bool {
        self.rank() == self.size()
    }

    pub fn inverse(&self) -> Result<Transformation> {
        if !self.is_permutation() {
            return Err(Error::NotInvertible);
        }
        let mut inv = vec![0; self.size()];
        for (j, &v) in self.images.iter().enumerate() {
            inv[v] = j;
        }
        Ok(Transformation {
            n: self.n,
            q: self.q,
            images: inv,
        })
    }

    /// Classes of `a ~ b ⇔ (a)f = (b)f`, each sorted, ordered by least element.
    pub fn kernel_partition(&self) -> Vec<Vec<usize>> {
        let mut class_of_image = vec![usize::MAX; self.size()];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (j, &v) in self.images.iter().enumerate() {
            if class_of_image[v] == usize::MAX {
                class_of_image[v] = classes.len();
                classes.push(Vec::new());
            }
            classes[class_of_image[v]].push(j);
        }
        classes
    }

    /// Nontrivial cycles, each starting at its least element.
    pub fn cycle_decomposition(&self) -> Result<Vec<Vec<usize>>> {
        if !self.is_permutation() {
            return Err(Error::NotInvertible);
        }
        let mut seen = vec![false; self.size()];
        let mut cycles = Vec::new();
        for start in 0..self.size() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            cycles.push(cycle);
        }
        Ok(cycles)
    }

    /// Sorted lengths of all cycles, fixed points included.
    pub fn cycle_type(&self) -> Result<Vec<usize>> {
        let cycles = self.cycle_decomposition()?;
        let moved: usize = cycles.iter().map(Vec::len).sum();
        let mut lengths: Vec<usize> = cycles.iter().map(Vec::len).collect();
        lengths.extend(std::iter::repeat(1).take(self.size() - moved));
        lengths.sort_unstable();
        Ok(lengths)
    }

    /// Conjugate `g⁻¹ ∘ self ∘ g`.
    pub fn conjugate(&self, g: &Transformation) -> Result<Transformation> {
        self.check_shape(g)?;
        let g_inv = g.inverse()?;
        Ok(g_inv.then(self).then(g))
    }

    /// Table of coordinate function `i`: `(x)f_i` for every state `x`.
    pub fn coordinate(&self, i: usize) -> Vec<Symbol> {
        let stride = space_size(i, self.q);
        self.images
            .iter()
            .map(|&v| ((v / stride) % self.q as usize) as Symbol)
            .collect()
    }

    /// Transposition `(u, v)`.
    pub fn transposition(n: usize, q: u32, u: usize, v: usize) -> Result<Transformation> {
        let size = space_size(n, q);
        for &s in &[u, v] {
            if s >= size {
                return Err(Error::Range {
                    index: s,
                    limit: size,
                });
            }
        }
        if u == v {
            return Err(Error::Degenerate(format!("transposition ({u}, {u})")));
        }
        let mut images: Vec<usize> = (0..size).collect();
        images.swap(u, v);
        Ok(Transformation { n, q, images })
    }

    /// Assignment `(u → v)`.
    pub fn assignment(n: usize, q: u32, u: usize, v: usize) -> Result<Transformation> {
        let size = space_size(n, q);
        for &s in &[u, v] {
            if s >= size {
                return Err(Error::Range {
                    index: s,
                    limit: size,
                });
            }
        }
        let mut images: Vec<usize> = (0..size).collect();
        images[u] = v;
        Ok(Transformation { n, q, images })
    }
}

/// A transformation with at most one nontrivial coordinate function,
/// written in update form `x_target ← (x) coord`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instruction {
    n: usize,
    q: u32,
    target: usize,
    coord: Vec<Symbol>,
}

impl Instruction {
    pub fn new(n: usize, q: u32, target: usize, coord: Vec<Symbol>) -> Result<Self> {
        let size = checked_pow(q, n).ok_or_else(|| Error::Shape("q^n overflows".into()))?;
        if target >= n {
            return Err(Error::Range {
                index: target,
                limit: n,
            });
        }
        if coord.len() != size {
            return Err(Error::Shape(format!(
                "coordinate table has {} entries, expected {size}",
                coord.len()
            )));
        }
        if let Some(&d) = coord.iter().find(|&&d| d >= q) {
            return Err(Error::Shape(format!("symbol {d} not below q={q}")));
        }
        Ok(Instruction {
            n,
            q,
            target,
            coord,
        })
    }

    pub fn from_fn(n: usize, q: u32, target: usize, mut f: impl FnMut(&[Symbol]) -> Symbol) -> Self {
        let size = space_size(n, q);
        let mut x = vec![0; n];
        let coord = (0..size)
            .map(|j| {
                digits_into(j, q, &mut x);
                f(&x) % q
            })
            .collect();
        Instruction {
            n,
            q,
            target,
            coord,
        }
    }

    pub fn identity(n: usize, q: u32, target: usize) -> Self {
        Instruction::from_fn(n, q, target, |x| x[target])
    }

    /// The instruction `x_i ← (x) f_i` induced by coordinate `i` of `f`.
    pub fn induced(f: &Transformation, i: usize) -> Result<Self> {
        if i >= f.n() {
            return Err(Error::Range {
                index: i,
                limit: f.n(),
            });
        }
        Ok(Instruction {
            n: f.n(),
            q: f.q(),
            target: i,
            coord: f.coordinate(i),
        })
    }

    /// Recovers an instruction from a transformation, if it is one. Identity
    /// maps are reported as updating register 0.
    pub fn from_transformation(f: &Transformation) -> Option<Self> {
        let mut target = None;
        for i in 0..f.n() {
            let c = f.coordinate(i);
            let stride = space_size(i, f.q());
            let trivial = c
                .iter()
                .enumerate()
                .all(|(j, &v)| v as usize == (j / stride) % f.q() as usize);
            if !trivial {
                if target.is_some() {
                    return None;
                }
                target = Some(i);
            }
        }
        let t = target.unwrap_or(0);
        Instruction::induced(f, t).ok()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn coord(&self) -> &[Symbol] {
        &self.coord
    }

    /// Image index of the state with index `j`.
    #[inline]
    pub fn apply_index(&self, j: usize) -> usize {
        let stride = space_size(self.target, self.q);
        let old = (j / stride) % self.q as usize;
        let new = self.coord[j] as usize;
        j - old * stride + new * stride
    }

    pub fn is_identity(&self) -> bool {
        (0..self.coord.len()).all(|j| self.apply_index(j) == j)
    }

    pub fn to_transformation(&self) -> Transformation {
        Transformation {
            n: self.n,
            q: self.q,
            images: (0..self.coord.len()).map(|j| self.apply_index(j)).collect(),
        }
    }

    pub fn is_permutation(&self) -> bool {
        self.to_transformation().is_permutation()
    }
}

/// Every instruction of `A^n`, one per (register, coordinate table).
/// Identity instructions appear once per register.
pub fn all_instructions(n: usize, q: u32) -> Vec<Instruction> {
    let size = space_size(n, q);
    let tables = checked_pow(q, size).expect("too many coordinate functions");
    let mut out = Vec::with_capacity(n * tables);
    let mut coord = vec![0; size];
    for target in 0..n {
        for t in 0..tables {
            digits_into(t, q, &mut coord);
            out.push(Instruction {
                n,
                q,
                target,
                coord: coord.clone(),
            });
        }
    }
    out
}

/// A finite sequence of instructions over a common `(n, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    n: usize,
    q: u32,
    steps: Vec<Instruction>,
}

impl Program {
    pub fn new(n: usize, q: u32) -> Self {
        Program {
            n,
            q,
            steps: Vec::new(),
        }
    }

    pub fn from_steps(n: usize, q: u32, steps: Vec<Instruction>) -> Result<Self> {
        if let Some(s) = steps.iter().find(|s| s.n != n || s.q != q) {
            return Err(Error::Shape(format!(
                "instruction over (n={}, q={}) in program over (n={n}, q={q})",
                s.n, s.q
            )));
        }
        Ok(Program { n, q, steps })
    }

    pub fn push(&mut self, step: Instruction) -> Result<()> {
        if step.n != self.n || step.q != self.q {
            return Err(Error::Shape("instruction shape differs from program".into()));
        }
        self.steps.push(step);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn steps(&self) -> &[Instruction] {
        &self.steps
    }

    /// Number of non-identity steps.
    pub fn len(&self) -> usize {
        self.steps.iter().filter(|s| !s.is_identity()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The transformation computed by running the steps left to right.
    pub fn compute(&self) -> Transformation {
        let size = space_size(self.n, self.q);
        let images = (0..size)
            .map(|j| self.steps.iter().fold(j, |x, s| s.apply_index(x)))
            .collect();
        Transformation {
            n: self.n,
            q: self.q,
            images,
        }
    }

    pub fn run(&self, x: &State) -> Result<State> {
        if x.n() != self.n || x.q() != self.q {
            return Err(Error::Shape("state shape differs from program".into()));
        }
        let j = self.steps.iter().fold(x.index(), |j, s| s.apply_index(j));
        State::from_index(j, self.n, self.q)
    }
}

/// The three-instruction swap `x1 ← x1 + x2; x2 ← x1 − x2; x1 ← x1 − x2`.
pub fn swap_program(q: u32) -> Program {
    let add = Instruction::from_fn(2, q, 0, |x| x[0] + x[1]);
    let sub2 = Instruction::from_fn(2, q, 1, |x| x[0] + q - x[1]);
    let sub1 = Instruction::from_fn(2, q, 0, |x| x[0] + q - x[1]);
    Program {
        n: 2,
        q,
        steps: vec![add, sub2, sub1],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_transformation(rng: &mut impl Rng, n: usize, q: u32) -> Transformation {
        let size = space_size(n, q);
        Transformation::from_images(n, q, (0..size).map(|_| rng.gen_range(0..size)).collect())
            .unwrap()
    }

    fn random_permutation(rng: &mut impl Rng, n: usize, q: u32) -> Transformation {
        use rand::seq::SliceRandom;
        let mut images: Vec<usize> = (0..space_size(n, q)).collect();
        images.shuffle(rng);
        Transformation::from_images(n, q, images).unwrap()
    }

    #[test]
    fn lex_index_examples() {
        assert_eq!(State::new(vec![0, 0], 2).unwrap().index(), 0);
        assert_eq!(State::new(vec![1, 0], 2).unwrap().index(), 1);
        assert_eq!(State::new(vec![0, 1], 2).unwrap().index(), 2);
        assert_eq!(State::new(vec![2, 1], 3).unwrap().index(), 5);
        assert_eq!(
            State::from_index(9, 2, 3),
            Err(Error::Range { index: 9, limit: 9 })
        );
        assert!(State::new(vec![3], 3).is_err());
    }

    #[test]
    fn swap_program_swaps_at_q5() {
        let p = swap_program(5);
        assert_eq!(p.len(), 3);
        for j in 0..25 {
            let x = State::from_index(j, 2, 5).unwrap();
            let y = p.run(&x).unwrap();
            assert_eq!(y.digits(), &[x.digits()[1], x.digits()[0]]);
        }
    }

    #[test]
    fn identity_is_neutral() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let id = Transformation::identity(3, 2);
        for _ in 0..100 {
            let f = random_transformation(&mut rng, 3, 2);
            assert_eq!(f.compose(&id).unwrap(), f);
            assert_eq!(id.compose(&f).unwrap(), f);
        }
    }

    #[test]
    fn compose_is_right_action() {
        let f = Transformation::assignment(2, 2, 0, 1).unwrap();
        let g = Transformation::transposition(2, 2, 1, 3).unwrap();
        // 0 -f-> 1 -g-> 3
        assert_eq!(f.compose(&g).unwrap().image(0), 3);
        // 0 -g-> 0 -f-> 1
        assert_eq!(g.compose(&f).unwrap().image(0), 1);
        let h = Transformation::identity(3, 2);
        assert!(matches!(f.compose(&h), Err(Error::Shape(_))));
    }

    #[test]
    fn transposition_and_assignment_tables() {
        let t = Transformation::transposition(2, 2, 0, 1).unwrap();
        assert_eq!(t.images(), &[1, 0, 2, 3]);
        assert!(t.compose(&t).unwrap().is_identity());
        let a = Transformation::assignment(2, 3, 0, 3).unwrap();
        assert_eq!(a.image(0), 3);
        assert!((1..9).all(|j| a.image(j) == j));
        assert!(matches!(
            Transformation::transposition(2, 2, 2, 2),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn assignment_rank_by_image_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let u = rng.gen_range(0..8);
            let mut v = rng.gen_range(0..8);
            while v == u {
                v = rng.gen_range(0..8);
            }
            let a = Transformation::assignment(3, 2, u, v).unwrap();
            let image: std::collections::BTreeSet<_> = a.images().iter().collect();
            assert_eq!(image.len(), 7);
            assert_eq!(a.rank(), 7);
        }
    }

    #[test]
    fn conjugation_preserves_cycle_type() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let f = random_permutation(&mut rng, 3, 2);
            let g = random_permutation(&mut rng, 3, 2);
            let c = f.conjugate(&g).unwrap();
            assert_eq!(c.cycle_type().unwrap(), f.cycle_type().unwrap());
        }
        let f = random_transformation(&mut rng, 2, 2);
        assert_eq!(f.conjugate(&Transformation::identity(2, 2)).unwrap(), f);
        let singular = Transformation::constant(2, 2, 0).unwrap();
        assert_eq!(f.conjugate(&singular), Err(Error::NotInvertible));
    }

    #[test]
    fn conjugate_of_transposition_moves_images() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let t = Transformation::transposition(2, 3, 2, 7).unwrap();
        let g = random_permutation(&mut rng, 2, 3);
        let expected = Transformation::transposition(2, 3, g.image(2), g.image(7)).unwrap();
        assert_eq!(t.conjugate(&g).unwrap(), expected);
    }

    #[test]
    fn enumeration_indices_round_trip() {
        for s in [0u128, 1, 77, 255] {
            let f = Transformation::from_enumeration_index(2, 2, s);
            assert_eq!(f.enumeration_index(), Some(s));
            let gammas: Vec<u128> = (0..2)
                .map(|i| coordinate_index(&f.coordinate(i), 2).unwrap())
                .collect();
            assert_eq!(Transformation::from_coordinate_indices(2, 2, &gammas).unwrap(), f);
        }
        assert_eq!(coordinate_table(6, 2, 2).unwrap(), vec![0, 1, 1, 0]);
        assert!(coordinate_table(16, 2, 2).is_err());
    }

    #[test]
    fn kernel_of_rank_three_map() {
        let f = Transformation::from_images(2, 2, vec![0, 0, 1, 3]).unwrap();
        assert_eq!(f.rank(), 3);
        assert_eq!(f.kernel_partition(), vec![vec![0, 1], vec![2], vec![3]]);
        assert_eq!(Transformation::constant(2, 3, 4).unwrap().rank(), 1);
        assert_eq!(f.cycle_decomposition(), Err(Error::NotInvertible));
    }

    #[test]
    fn induced_instruction_of_identity_is_identity() {
        let id = Transformation::identity(2, 3);
        for i in 0..2 {
            assert!(Instruction::induced(&id, i).unwrap().is_identity());
        }
    }

    #[test]
    fn permutation_instructions_of_gf2_squared() {
        let all = all_instructions(2, 2);
        assert_eq!(all.len(), 32);
        let perms: Vec<_> = all.iter().filter(|i| i.is_permutation()).collect();
        assert_eq!(perms.len(), 8);
        // x1 ← x1 + x2 + 1 and x2 ← x1 + x2 are among them.
        let a = Instruction::from_fn(2, 2, 0, |x| x[0] + x[1] + 1);
        let b = Instruction::from_fn(2, 2, 1, |x| x[0] + x[1]);
        assert!(perms.contains(&&a) && perms.contains(&&b));
    }

    #[test]
    fn instruction_rejects_bad_shapes() {
        assert!(Instruction::new(2, 2, 2, vec![0; 4]).is_err());
        assert!(Instruction::new(2, 2, 0, vec![0; 3]).is_err());
        assert!(Instruction::new(2, 2, 0, vec![0, 1, 2, 0]).is_err());
    }

    #[test]
    fn from_instruction_transformation_roundtrip() {
        let ins = Instruction::from_fn(3, 2, 2, |x| x[0] ^ x[2]);
        let t = ins.to_transformation();
        assert_eq!(Instruction::from_transformation(&t), Some(ins));
        let swap = swap_program(2).compute();
        assert_eq!(Instruction::from_transformation(&swap), None);
    }

    #[test]
    fn enumeration_index_round_trip() {
        let f = Transformation::from_enumeration_index(2, 2, 0b11_10_01_00);
        assert!(f.is_identity());
        let g = Transformation::from_coordinates(2, 2, &[f.coordinate(0), f.coordinate(1)]).unwrap();
        assert_eq!(f, g);
    }

    mod props {
        use super::*;
        use proptest::prelude::{any, prop_assert_eq, proptest, Strategy};

        fn table(n: usize, q: u32) -> impl Strategy<Value = Transformation> {
            let size = space_size(n, q);
            proptest::collection::vec(0..size, size)
                .prop_map(move |v| Transformation::from_images(n, q, v).unwrap())
        }

        fn shaped() -> impl Strategy<Value = (usize, u32)> {
            (2usize..=3, 2u32..=3)
        }

        proptest! {
            #[test]
            fn index_roundtrip((n, q) in shaped(), seed in any::<u64>()) {
                let size = space_size(n, q);
                let j = (seed as usize) % size;
                let s = State::from_index(j, n, q).unwrap();
                prop_assert_eq!(s.index(), j);
                prop_assert_eq!(State::new(s.digits().to_vec(), q).unwrap(), s);
            }

            #[test]
            fn composition_associates(
                (f, g, h) in shaped().prop_flat_map(|(n, q)| (table(n, q), table(n, q), table(n, q)))
            ) {
                let left = f.compose(&g).unwrap().compose(&h).unwrap();
                let right = f.compose(&g.compose(&h).unwrap()).unwrap();
                prop_assert_eq!(left, right);
            }

            #[test]
            fn instructions_only_touch_target(
                (n, q) in shaped(), target in 0usize..3, seed in any::<u64>()
            ) {
                let target = target % n;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let coord: Vec<Symbol> = (0..space_size(n, q)).map(|_| rng.gen_range(0..q)).collect();
                let ins = Instruction::new(n, q, target, coord).unwrap();
                let t = ins.to_transformation();
                for i in (0..n).filter(|&i| i != target) {
                    let c = t.coordinate(i);
                    for (j, &v) in c.iter().enumerate() {
                        prop_assert_eq!(v, State::from_index(j, n, q).unwrap().digits()[i]);
                    }
                }
            }

            #[test]
            fn run_program_matches_composed_tables(f in shaped().prop_flat_map(|(n, q)| table(n, q))) {
                let steps: Vec<_> = (0..f.n()).rev().map(|i| Instruction::induced(&f, i).unwrap()).collect();
                let composed = steps
                    .iter()
                    .fold(Transformation::identity(f.n(), f.q()), |acc, s| acc.compose(&s.to_transformation()).unwrap());
                let p = Program::from_steps(f.n(), f.q(), steps).unwrap();
                for j in 0..f.size() {
                    let x = State::from_index(j, f.n(), f.q()).unwrap();
                    prop_assert_eq!(p.run(&x).unwrap().index(), composed.image(j));
                }
            }
        }
    }
}
