//! Program synthesis over the generating set
//! `Y = {T1, A2, (I_i)^(2^j) : 0 ≤ i < n, 0 ≤ j < ρ}`, `ρ = ⌈log2 q⌉`.
//!
//! Construction proceeds in three layers: transpositions `(0, k)` are
//! conjugates of `T1 = (0, 1)` by products of `I` powers; permutations are
//! chains of such transpositions; arbitrary maps factor as `g = h ∘ π` where
//! `h` is built from transpositions and `A2 = (0 → q)` to match the kernel of
//! `g`. Programs are first built as [`Generator`] tokens (where powers of the
//! same `I_i` fuse) and then lowered onto `Y`.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{checked_pow, digits_into, Instruction, Program, State, Symbol, Transformation};
use crate::error::{Error, Result};

/// `⌈log2 q⌉`.
pub fn ceil_log2(q: u64) -> u32 {
    if q <= 1 {
        0
    } else {
        64 - (q - 1).leading_zeros()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Elements of the generating set `Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum YElement {
    T1,
    A2,
    /// `(I_register)^(2^bit)`.
    IPow2 { register: usize, bit: u32 },
}

/// Grouped generators: elements of `Y` plus `(I_i)^λ` for `1 ≤ λ ≤ q − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Generator {
    T1,
    A2,
    IPow { register: usize, exponent: u32 },
}

/// `T1 : x_0 ← x_0 + δ(x, e^0) − δ(x, e^1)`.
pub fn t1(n: usize, q: u32) -> Instruction {
    Instruction::from_fn(n, q, 0, |x| {
        let rest_zero = x[1..].iter().all(|&d| d == 0);
        match (rest_zero, x[0]) {
            (true, 0) => 1,
            (true, 1) => 0,
            _ => x[0],
        }
    })
}

/// `A2 : x_1 ← x_1 + δ(x, e^0)`.
pub fn a2(n: usize, q: u32) -> Instruction {
    Instruction::from_fn(n, q, 1, |x| {
        if x.iter().all(|&d| d == 0) {
            1
        } else {
            x[1]
        }
    })
}

/// Coordinate value of `(I_i)^e` at `x`.
fn i_power_value(x: &[Symbol], q: u32, register: usize, e: u64) -> Symbol {
    let others_zero = x
        .iter()
        .enumerate()
        .all(|(j, &d)| j == register || d == 0);
    let q64 = q as u64;
    if register == 0 {
        if others_zero {
            // 0 is fixed; the multiples of e^1 form one (q − 1)-cycle.
            if x[0] == 0 {
                0
            } else {
                let pos = (x[0] as u64 - 1 + e) % (q64 - 1);
                (pos + 1) as Symbol
            }
        } else {
            ((x[0] as u64 + e) % q64) as Symbol
        }
    } else if others_zero {
        x[register]
    } else {
        ((x[register] as u64 + e) % q64) as Symbol
    }
}

/// `(I_register)^e` as an instruction.
pub fn i_power(n: usize, q: u32, register: usize, e: u64) -> Instruction {
    Instruction::from_fn(n, q, register, |x| i_power_value(x, q, register, e))
}

/// Multiplicative order of `I_register`.
pub fn i_order(q: u32, register: usize) -> u64 {
    let q = q as u64;
    if register == 0 {
        q * (q - 1) / gcd(q, q - 1)
    } else {
        q
    }
}

/// A named generating instruction.
#[derive(Clone, Debug)]
pub struct NamedInstruction {
    pub name: String,
    pub element: YElement,
    pub instruction: Instruction,
}

/// The generating set `Y` of `Tran(A^n)`.
#[derive(Clone, Debug)]
pub struct GeneratingSet {
    q: u32,
    n: usize,
    rho: u32,
    members: Vec<NamedInstruction>,
    index: HashMap<YElement, usize>,
}

impl GeneratingSet {
    pub fn new(q: u32, n: usize) -> Result<Self> {
        if q < 2 || n < 2 {
            return Err(Error::Precondition(format!(
                "generating set needs q ≥ 2 and n ≥ 2, got q={q}, n={n}"
            )));
        }
        let rho = ceil_log2(q as u64);
        let mut members = vec![
            NamedInstruction {
                name: "T1".into(),
                element: YElement::T1,
                instruction: t1(n, q),
            },
            NamedInstruction {
                name: "A2".into(),
                element: YElement::A2,
                instruction: a2(n, q),
            },
        ];
        for register in 0..n {
            for bit in 0..rho {
                members.push(NamedInstruction {
                    name: format!("I{}^{}", register + 1, 1u64 << bit),
                    element: YElement::IPow2 { register, bit },
                    instruction: i_power(n, q, register, 1 << bit),
                });
            }
        }
        let index = members
            .iter()
            .enumerate()
            .map(|(k, m)| (m.element, k))
            .collect();
        Ok(GeneratingSet {
            q,
            n,
            rho,
            members,
            index,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> u32 {
        self.rho
    }

    pub fn members(&self) -> &[NamedInstruction] {
        &self.members
    }

    pub fn instructions(&self) -> Vec<Instruction> {
        self.members.iter().map(|m| m.instruction.clone()).collect()
    }

    pub fn get(&self, e: YElement) -> &Instruction {
        &self.members[self.index[&e]].instruction
    }

    /// Number of members updating each register.
    pub fn per_register_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n];
        for m in &self.members {
            counts[m.instruction.target()] += 1;
        }
        counts
    }

    fn check_power(&self, register: usize, lambda: u32) -> Result<()> {
        if register >= self.n {
            return Err(Error::Range {
                index: register,
                limit: self.n,
            });
        }
        if lambda == 0 || lambda >= self.q {
            return Err(Error::Precondition(format!(
                "exponent {lambda} outside 1..={}",
                self.q - 1
            )));
        }
        Ok(())
    }

    /// Members of `Y` whose product is `(I_register)^λ`, by binary expansion.
    pub fn power_elements(&self, register: usize, lambda: u32) -> Result<Vec<YElement>> {
        self.check_power(register, lambda)?;
        Ok((0..self.rho)
            .filter(|b| lambda >> b & 1 == 1)
            .map(|bit| YElement::IPow2 { register, bit })
            .collect())
    }

    /// Program over `Y` computing `(I_register)^λ`; at most `ρ` steps.
    pub fn power_program(&self, register: usize, lambda: u32) -> Result<Program> {
        let steps = self
            .power_elements(register, lambda)?
            .into_iter()
            .map(|e| self.get(e).clone())
            .collect();
        Program::from_steps(self.n, self.q, steps)
    }

    /// Lowers grouped generators onto members of `Y`.
    pub fn lower(&self, gens: &[Generator]) -> Vec<YElement> {
        let mut out = Vec::new();
        for g in gens {
            match *g {
                Generator::T1 => out.push(YElement::T1),
                Generator::A2 => out.push(YElement::A2),
                Generator::IPow { register, exponent } => out.extend(
                    self.power_elements(register, exponent)
                        .expect("grouped exponent in range"),
                ),
            }
        }
        out
    }

    pub fn program_of(&self, elements: &[YElement]) -> Program {
        let steps = elements.iter().map(|&e| self.get(e).clone()).collect();
        Program::from_steps(self.n, self.q, steps).expect("members share the shape")
    }
}

/// Counts recorded while synthesizing, for comparison against the phase
/// structure of the construction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundTerms {
    /// Transposition symbols `T^(k)` used, after cancellation.
    pub transpositions: usize,
    /// Sum of `w(k)` over those symbols.
    pub weight_sum: usize,
    /// Nontrivial cycles of the permutation part.
    pub cycles: usize,
    /// Kernel classes (rank) of a singular target; 0 for permutations.
    pub kernel_classes: usize,
    /// 1 or 2 for the kernel-chain case used; 0 for permutations.
    pub kernel_case: u8,
    /// `A2` occurrences in the kernel chain.
    pub assignments: usize,
}

/// A synthesized program with its grouped form and bookkeeping.
#[derive(Clone, Debug)]
pub struct SynthesisReport {
    pub program: Program,
    pub generators: Vec<Generator>,
    pub elements: Vec<YElement>,
    pub length: usize,
    pub bound_terms: BoundTerms,
}

impl SynthesisReport {
    /// Checks the program against `g`: exhaustively when `q^n ≤ 4096`,
    /// otherwise on 10^4 sampled states.
    pub fn verify(&self, g: &Transformation) -> bool {
        let size = g.size();
        if size <= 4096 {
            return self.program.compute() == *g;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        (0..10_000).all(|_| {
            let j = rng.gen_range(0..size);
            let x = State::from_index(j, g.n(), g.q()).expect("in range");
            self.program.run(&x).expect("shape").index() == g.image(j)
        })
    }
}

/// Internal token: a power of `I_i` not yet reduced to grouped generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Token {
    T1,
    A2,
    I { register: usize, exponent: u64 },
}

/// Token sequence with on-the-fly fusion of adjacent same-register tokens.
struct TokenStream {
    q: u32,
    tokens: Vec<Token>,
}

impl TokenStream {
    fn new(q: u32) -> Self {
        TokenStream {
            q,
            tokens: Vec::new(),
        }
    }

    fn push(&mut self, t: Token) {
        match (self.tokens.last().copied(), t) {
            (_, Token::I { exponent: 0, .. }) => {}
            (Some(Token::T1), Token::T1) => {
                self.tokens.pop();
            }
            (Some(Token::A2), Token::A2) => {}
            (
                Some(Token::I {
                    register: r0,
                    exponent: e0,
                }),
                Token::I { register, exponent },
            ) if r0 == register => {
                self.tokens.pop();
                let e = (e0 + exponent) % i_order(self.q, register);
                self.push(Token::I {
                    register,
                    exponent: e,
                });
            }
            _ => self.tokens.push(t),
        }
    }

    fn extend(&mut self, ts: impl IntoIterator<Item = Token>) {
        for t in ts {
            self.push(t);
        }
    }

    fn generators(&self) -> Vec<Generator> {
        let chunk = (self.q - 1) as u64;
        let mut out = Vec::new();
        for t in &self.tokens {
            match *t {
                Token::T1 => out.push(Generator::T1),
                Token::A2 => out.push(Generator::A2),
                Token::I {
                    register,
                    mut exponent,
                } => {
                    while exponent > 0 {
                        let e = exponent.min(chunk);
                        out.push(Generator::IPow {
                            register,
                            exponent: e as u32,
                        });
                        exponent -= e;
                    }
                }
            }
        }
        out
    }
}

/// Transposition-level symbols of a chain, before expansion into tokens.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Symbolic {
    /// `T^(k) = (0, k)`.
    T(usize),
    A2,
}

/// Symbol sequence with cancellation of adjacent equal transpositions.
#[derive(Default)]
struct SymbolStream {
    symbols: Vec<Symbolic>,
}

impl SymbolStream {
    fn push(&mut self, s: Symbolic) {
        match (self.symbols.last(), s) {
            (Some(Symbolic::T(a)), Symbolic::T(b)) if *a == b => {
                self.symbols.pop();
            }
            (Some(Symbolic::A2), Symbolic::A2) => {}
            _ => self.symbols.push(s),
        }
    }

    /// Pushes the transposition `(a, b)`, oriented so that its first symbol
    /// cancels the last one already present when possible.
    fn transposition(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        if a == 0 {
            return self.push(Symbolic::T(b));
        }
        if b == 0 {
            return self.push(Symbolic::T(a));
        }
        let (outer, inner) = match self.symbols.last() {
            Some(Symbolic::T(t)) if *t == a => (a, b),
            _ => (b, a),
        };
        self.push(Symbolic::T(outer));
        self.push(Symbolic::T(inner));
        self.push(Symbolic::T(outer));
    }

    /// Pushes the assignment `(a → q)` as `T^(a) A2 T^(a)`.
    fn assign_to_q(&mut self, a: usize) {
        if a == 0 {
            return self.push(Symbolic::A2);
        }
        self.push(Symbolic::T(a));
        self.push(Symbolic::A2);
        self.push(Symbolic::T(a));
    }
}

/// Synthesizer over the generating set `Y`.
#[derive(Clone, Debug)]
pub struct Compiler {
    set: GeneratingSet,
}

impl Compiler {
    pub fn new(q: u32, n: usize) -> Result<Self> {
        Ok(Compiler {
            set: GeneratingSet::new(q, n)?,
        })
    }

    pub fn generating_set(&self) -> &GeneratingSet {
        &self.set
    }

    fn q(&self) -> u32 {
        self.set.q
    }

    fn n(&self) -> usize {
        self.set.n
    }

    fn size(&self) -> usize {
        checked_pow(self.q(), self.n()).expect("fits")
    }

    /// Conjugating `I`-power tokens mapping state 1 to `k` while fixing 0.
    fn conjugator(&self, k: usize) -> Vec<Token> {
        let q = self.q();
        let mut digits = vec![0; self.n()];
        digits_into(k, q, &mut digits);
        let mut conj = Vec::new();
        if digits[0] != 0 {
            conj.push(Token::I {
                register: 0,
                exponent: digits[0] as u64 - 1,
            });
            for (j, &d) in digits.iter().enumerate().skip(1) {
                if d != 0 {
                    conj.push(Token::I {
                        register: j,
                        exponent: d as u64,
                    });
                }
            }
        } else {
            for (j, &d) in digits.iter().enumerate().skip(1) {
                if d != 0 {
                    conj.push(Token::I {
                        register: j,
                        exponent: d as u64,
                    });
                }
            }
            conj.push(Token::I {
                register: 0,
                exponent: q as u64 - 1,
            });
        }
        conj
    }

    fn transposition_tokens(&self, k: usize) -> Vec<Token> {
        let conj = self.conjugator(k);
        let inverse = conj.iter().rev().map(|t| match *t {
            Token::I { register, exponent } => {
                let ord = i_order(self.q(), register);
                Token::I {
                    register,
                    exponent: (ord - exponent % ord) % ord,
                }
            }
            other => other,
        });
        let mut out: Vec<Token> = inverse.collect();
        out.push(Token::T1);
        out.extend(conj);
        out
    }

    fn report(&self, stream: TokenStream, bound_terms: BoundTerms) -> SynthesisReport {
        let generators = stream.generators();
        let elements = self.set.lower(&generators);
        let program = self.set.program_of(&elements);
        SynthesisReport {
            length: program.len(),
            program,
            generators,
            elements,
            bound_terms,
        }
    }

    fn expand(&self, symbols: &[Symbolic], stream: &mut TokenStream, terms: &mut BoundTerms) {
        for s in symbols {
            match *s {
                Symbolic::T(k) => {
                    terms.transpositions += 1;
                    terms.weight_sum += state_weight(k, self.q());
                    stream.extend(self.transposition_tokens(k));
                }
                Symbolic::A2 => {
                    terms.assignments += 1;
                    stream.push(Token::A2);
                }
            }
        }
    }

    fn check_state_index(&self, k: usize) -> Result<()> {
        let size = self.size();
        if k >= size {
            return Err(Error::Range {
                index: k,
                limit: size,
            });
        }
        Ok(())
    }

    /// Program computing the transposition `(0, k)`.
    pub fn transposition_program(&self, k: usize) -> Result<SynthesisReport> {
        self.check_state_index(k)?;
        if k == 0 {
            return Err(Error::Degenerate("transposition (0, 0)".into()));
        }
        let mut stream = TokenStream::new(self.q());
        let mut terms = BoundTerms::default();
        self.expand(&[Symbolic::T(k)], &mut stream, &mut terms);
        Ok(self.report(stream, terms))
    }

    fn check_shape(&self, g: &Transformation) -> Result<()> {
        if g.n() != self.n() || g.q() != self.q() {
            return Err(Error::Shape(format!(
                "target over (n={}, q={}) for compiler over (n={}, q={})",
                g.n(),
                g.q(),
                self.n(),
                self.q()
            )));
        }
        Ok(())
    }

    fn permutation_symbols(pi: &Transformation, symbols: &mut SymbolStream) -> Result<usize> {
        let cycles = pi.cycle_decomposition()?;
        for cycle in &cycles {
            // The chain (a1,a2)(a2,a3)…(a_{k−1},a_k) sends a_j to a_{j−1}
            // and a_1 to a_k, so walk the cycle backwards. Starting at the
            // least element puts state 0 first when it is moved.
            let k = cycle.len();
            let chain: Vec<usize> = (0..k).map(|j| cycle[(k - j) % k]).collect();
            for w in chain.windows(2) {
                symbols.transposition(w[0], w[1]);
            }
        }
        Ok(cycles.len())
    }

    /// Program computing the permutation `pi`.
    pub fn permutation_program(&self, pi: &Transformation) -> Result<SynthesisReport> {
        self.check_shape(pi)?;
        let mut symbols = SymbolStream::default();
        let cycles = Self::permutation_symbols(pi, &mut symbols)?;
        let mut stream = TokenStream::new(self.q());
        let mut terms = BoundTerms {
            cycles,
            ..BoundTerms::default()
        };
        self.expand(&symbols.symbols, &mut stream, &mut terms);
        Ok(self.report(stream, terms))
    }

    /// Kernel-matching chain `h` for a singular `g`, as transposition
    /// symbols, plus the case used.
    fn kernel_chain(&self, g: &Transformation) -> (SymbolStream, u8) {
        let q_state = self.q() as usize;
        let mut classes = g.kernel_partition();
        let class_of = |s: usize, classes: &[Vec<usize>]| {
            classes.iter().position(|c| c.contains(&s)).expect("partition covers")
        };
        let zero_class = class_of(0, &classes);
        let q_class = class_of(q_state, &classes);
        let mut symbols = SymbolStream::default();

        if zero_class == q_class {
            // Case 1: the first class starts 0, q, … and collapses onto q.
            let mut first = classes.remove(zero_class);
            first.retain(|&s| s != 0 && s != q_state);
            first.insert(0, q_state);
            first.insert(0, 0);
            classes.insert(0, first);
            symbols.push(Symbolic::A2);
            for (i, class) in classes.iter().enumerate() {
                let rest = if i == 0 {
                    &class[2..]
                } else {
                    symbols.transposition(q_state, class[0]);
                    &class[1..]
                };
                for &p in rest {
                    symbols.push(Symbolic::T(p));
                    symbols.push(Symbolic::A2);
                }
            }
            (symbols, 1)
        } else {
            // Case 2: 0 leads the first class, q closes the last one.
            let mut first = classes[zero_class].clone();
            let mut last = classes[q_class].clone();
            first.retain(|&s| s != 0);
            first.insert(0, 0);
            last.retain(|&s| s != q_state);
            last.push(q_state);
            let mut ordered = vec![first];
            ordered.extend(
                classes
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != zero_class && *i != q_class)
                    .map(|(_, c)| c.clone()),
            );
            ordered.push(last);
            let r = ordered.len();

            symbols.transposition(0, q_state);
            // The original q is parked at the target of the first T^(p), or
            // stays at 0 when there is none.
            let mut parked = None;
            for (i, class) in ordered.iter().enumerate() {
                let members: &[usize] = if i == r - 1 {
                    &class[..class.len() - 1]
                } else {
                    class
                };
                let rest = if i == 0 {
                    &members[1..]
                } else {
                    if members.is_empty() {
                        continue;
                    }
                    symbols.transposition(q_state, members[0]);
                    &members[1..]
                };
                for &p in rest {
                    parked.get_or_insert(p);
                    symbols.push(Symbolic::T(p));
                    symbols.push(Symbolic::A2);
                }
            }
            // Rejoin the original q with the rest of its class, which now
            // sits at q. A singleton {q} is already separate.
            if ordered[r - 1].len() > 1 {
                symbols.assign_to_q(parked.unwrap_or(0));
            }
            (symbols, 2)
        }
    }

    /// Program computing an arbitrary transformation `g`.
    pub fn transformation_program(&self, g: &Transformation) -> Result<SynthesisReport> {
        self.check_shape(g)?;
        if g.is_permutation() {
            return self.permutation_program(g);
        }
        let (h_symbols, case) = self.kernel_chain(g);
        let mut stream = TokenStream::new(self.q());
        let mut terms = BoundTerms {
            kernel_classes: g.rank(),
            kernel_case: case,
            ..BoundTerms::default()
        };
        self.expand(&h_symbols.symbols, &mut stream, &mut terms);
        let h = self
            .set
            .program_of(&self.set.lower(&stream.generators()))
            .compute();
        let pi = completing_permutation(&h, g)?;
        let mut pi_symbols = SymbolStream::default();
        terms.cycles = Self::permutation_symbols(&pi, &mut pi_symbols)?;
        self.expand(&pi_symbols.symbols, &mut stream, &mut terms);
        Ok(self.report(stream, terms))
    }
}

/// Number of nonzero digits of the state with index `k`.
pub fn state_weight(mut k: usize, q: u32) -> usize {
    let mut w = 0;
    while k > 0 {
        if k % q as usize != 0 {
            w += 1;
        }
        k /= q as usize;
    }
    w
}

/// `Σ_k w(k)` over all of `A^n`, by enumeration.
pub fn total_weight(q: u32, n: usize) -> usize {
    let size = checked_pow(q, n).expect("fits");
    (0..size).map(|k| state_weight(k, q)).sum()
}

/// The permutation `π` with `g = h ∘ π`, given `ker(h) = ker(g)`. Positions
/// outside the image of `h` are matched to values outside the image of `g`
/// in increasing order.
fn completing_permutation(h: &Transformation, g: &Transformation) -> Result<Transformation> {
    let size = g.size();
    let mut images = vec![usize::MAX; size];
    let mut used = vec![false; size];
    for x in 0..size {
        let (hx, gx) = (h.image(x), g.image(x));
        if images[hx] == usize::MAX {
            images[hx] = gx;
            used[gx] = true;
        } else if images[hx] != gx {
            return Err(Error::Shape("kernel of h differs from kernel of g".into()));
        }
    }
    let mut free = (0..size).filter(|&v| !used[v]);
    for slot in images.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = free.next().expect("counts match");
    }
    Transformation::from_images(g.n(), g.q(), images)
}

/// Outcome of the breadth-first complexity search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Complexity {
    Exact(usize),
    Unknown,
}

/// Minimal number of instructions from `set` whose product is `g`, by
/// breadth-first search over products; `Unknown` once more than `budget`
/// distinct transformations have been visited.
pub fn exact_complexity(g: &Transformation, set: &[Instruction], budget: usize) -> Complexity {
    let id = Transformation::identity(g.n(), g.q());
    if *g == id {
        return Complexity::Exact(0);
    }
    let gens: Vec<Transformation> = set
        .iter()
        .filter(|i| !i.is_identity())
        .map(Instruction::to_transformation)
        .collect();
    let mut seen: HashSet<Transformation> = HashSet::new();
    seen.insert(id.clone());
    let mut frontier = vec![id];
    let mut depth = 0;
    while !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        for f in &frontier {
            for s in &gens {
                let h = f.then(s);
                if h == *g {
                    return Complexity::Exact(depth);
                }
                if seen.insert(h.clone()) {
                    if seen.len() > budget {
                        return Complexity::Unknown;
                    }
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    Complexity::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{all_instructions, swap_program};
    use rand::seq::SliceRandom;

    fn instruction_table(ins: &Instruction) -> Transformation {
        ins.to_transformation()
    }

    #[test]
    fn generating_set_sizes_and_caps() {
        let y = GeneratingSet::new(2, 2).unwrap();
        assert_eq!(y.members().len(), 4);
        for q in 2..=5 {
            for n in 2..=3 {
                let y = GeneratingSet::new(q, n).unwrap();
                assert!(y.per_register_counts().iter().all(|&c| c <= q as usize));
            }
        }
        assert!(GeneratingSet::new(2, 1).is_err());
    }

    #[test]
    fn named_generators_match_their_tables() {
        let t = instruction_table(&t1(2, 3));
        assert_eq!(t, Transformation::transposition(2, 3, 0, 1).unwrap());
        let a = instruction_table(&a2(2, 3));
        assert_eq!(a, Transformation::assignment(2, 3, 0, 3).unwrap());
    }

    #[test]
    fn i_cycle_structure() {
        let i1 = instruction_table(&i_power(2, 3, 0, 1));
        assert_eq!(i1.cycle_type().unwrap(), vec![1, 2, 3, 3]);
        let i2 = instruction_table(&i_power(2, 3, 1, 1));
        assert_eq!(i2.cycle_type().unwrap(), vec![1, 1, 1, 3, 3]);
        for s in [0, 3, 6] {
            assert_eq!(i2.image(s), s);
        }
        for q in 2..=5 {
            for r in 0..2 {
                let i = instruction_table(&i_power(2, q, r, 1));
                assert!(i.power(i_order(q, r)).is_identity());
                assert_eq!(i.power(3), instruction_table(&i_power(2, q, r, 3)));
            }
        }
    }

    #[test]
    fn power_programs() {
        let y = GeneratingSet::new(5, 2).unwrap();
        let p = y.power_program(1, 3).unwrap();
        assert_eq!(p.len(), 2);
        let direct = instruction_table(&i_power(2, 5, 1, 1)).power(3);
        assert_eq!(p.compute(), direct);
        assert_eq!(y.power_program(0, 1).unwrap().len(), 1);
        let y4 = GeneratingSet::new(4, 2).unwrap();
        let p = y4.power_program(0, 2).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.compute(), instruction_table(&i_power(2, 4, 0, 2)));
        assert!(y.power_program(0, 5).is_err());
        assert!(y.power_program(0, 0).is_err());
    }

    #[test]
    fn conjugating_t1_reaches_k() {
        let t = Transformation::transposition(2, 3, 0, 1).unwrap();
        let i1 = instruction_table(&i_power(2, 3, 0, 1));
        assert_eq!(
            t.conjugate(&i1).unwrap(),
            Transformation::transposition(2, 3, 0, 2).unwrap()
        );
    }

    #[test]
    fn transposition_programs_verify() {
        let c = Compiler::new(2, 2).unwrap();
        let r = c.transposition_program(1).unwrap();
        assert_eq!(r.elements, vec![YElement::T1]);
        let r = c.transposition_program(3).unwrap();
        assert!(r.verify(&Transformation::transposition(2, 2, 0, 3).unwrap()));
        let c3 = Compiler::new(3, 2).unwrap();
        let r = c3.transposition_program(3).unwrap();
        assert!(r.verify(&Transformation::transposition(2, 3, 0, 3).unwrap()));
        assert_eq!(
            r.generators.last(),
            Some(&Generator::IPow {
                register: 0,
                exponent: 2
            })
        );
        assert!(matches!(c.transposition_program(0), Err(Error::Degenerate(_))));
        for q in 2..=4 {
            for n in 2..=3 {
                let c = Compiler::new(q, n).unwrap();
                for k in 1..c.size() {
                    let r = c.transposition_program(k).unwrap();
                    assert!(r.verify(&Transformation::transposition(n, q, 0, k).unwrap()));
                }
            }
        }
    }

    #[test]
    fn permutation_chain_grouping() {
        let c = Compiler::new(2, 2).unwrap();
        let full = Transformation::from_images(2, 2, vec![1, 2, 3, 0]).unwrap();
        let r = c.permutation_program(&full).unwrap();
        assert!(r.verify(&full));
        // The cycle contains 0, so its chain is T(a2) then merged pairs.
        assert!(r.bound_terms.transpositions <= 2 * 4 - 3);
        let id = Transformation::identity(2, 2);
        assert!(c.permutation_program(&id).unwrap().program.is_empty());
        let singular = Transformation::constant(2, 2, 0).unwrap();
        assert!(matches!(
            c.permutation_program(&singular),
            Err(Error::NotInvertible)
        ));
    }

    #[test]
    fn chain_of_cycle_without_zero_shares_interior_symbols() {
        // (1 2 3) at q = 2, n = 2 has no zero: symbols T(a2)T(a1)T(a3)T(a2).
        let mut s = SymbolStream::default();
        let pi = Transformation::from_images(2, 2, vec![0, 2, 3, 1]).unwrap();
        Compiler::permutation_symbols(&pi, &mut s).unwrap();
        assert_eq!(s.symbols.len(), 4);
        let counts = s.symbols.iter().fold(HashMap::new(), |mut m, x| {
            *m.entry(*x).or_insert(0) += 1;
            m
        });
        assert_eq!(counts.values().filter(|&&v| v == 2).count(), 1);
    }

    #[test]
    fn random_permutations_compile() {
        let c = Compiler::new(2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let mut images: Vec<usize> = (0..8).collect();
            images.shuffle(&mut rng);
            let pi = Transformation::from_images(3, 2, images).unwrap();
            assert!(c.permutation_program(&pi).unwrap().verify(&pi));
        }
    }

    #[test]
    fn all_maps_of_a2_compile() {
        let c = Compiler::new(2, 2).unwrap();
        for s in 0..256u128 {
            let g = Transformation::from_enumeration_index(2, 2, s);
            let r = c.transformation_program(&g).unwrap();
            assert!(r.verify(&g), "target {s}");
        }
    }

    #[test]
    fn kernel_cases_at_q3() {
        let c = Compiler::new(3, 2).unwrap();
        // 0 and 3 share an image: case 1.
        let mut images: Vec<usize> = (0..9).collect();
        images[3] = 0;
        let g = Transformation::from_images(2, 3, images).unwrap();
        let r = c.transformation_program(&g).unwrap();
        assert_eq!(r.bound_terms.kernel_case, 1);
        assert!(r.verify(&g));
        // q's class has other members but 0 is apart: case 2 with a rejoin.
        let mut images: Vec<usize> = (0..9).collect();
        images[5] = 3;
        let g = Transformation::from_images(2, 3, images).unwrap();
        let r = c.transformation_program(&g).unwrap();
        assert_eq!(r.bound_terms.kernel_case, 2);
        assert!(r.verify(&g));
        // q alone in its class.
        let mut images: Vec<usize> = (0..9).collect();
        images[7] = 8;
        let g = Transformation::from_images(2, 3, images).unwrap();
        let r = c.transformation_program(&g).unwrap();
        assert_eq!(r.bound_terms.kernel_case, 2);
        assert!(r.verify(&g));
    }

    #[test]
    fn constant_to_zero_length() {
        let c = Compiler::new(2, 2).unwrap();
        let g = Transformation::constant(2, 2, 0).unwrap();
        let r = c.transformation_program(&g).unwrap();
        assert!(r.verify(&g));
        assert_eq!(r.bound_terms.kernel_case, 1);
        // 3ρ(q−1)n q^(n−1) = 12 plus the measured constant.
        assert!(r.length <= 12 + 8, "length {}", r.length);
    }

    #[test]
    fn weight_sum_identity() {
        for q in 2..=5u32 {
            for n in 2..=4usize {
                let expected = (q as usize - 1) * n * checked_pow(q, n - 1).unwrap();
                assert_eq!(total_weight(q, n), expected);
            }
        }
    }

    #[test]
    fn transposition_length_regression() {
        // Conjugation costs the forward and inverse products, so the
        // measured excess is tracked against 2ρ·w(k).
        let mut worst = HashMap::new();
        for q in 2..=3u32 {
            for n in 2..=3usize {
                let c = Compiler::new(q, n).unwrap();
                let rho = c.generating_set().rho() as usize;
                let mut excess = 0;
                for k in 1..c.size() {
                    let r = c.transposition_program(k).unwrap();
                    let w = state_weight(k, q);
                    excess = excess.max(r.length as isize - (2 * rho * w) as isize);
                }
                assert!(excess <= 2 * rho as isize + 1);
                worst.insert((q, n), excess);
            }
        }
        assert_eq!(worst[&(2, 2)], 3);
        assert_eq!(worst[&(2, 3)], 3);
        assert_eq!(worst[&(3, 2)], 2);
        assert_eq!(worst[&(3, 3)], 2);
    }

    #[test]
    fn compiler_never_beats_oracle() {
        let c = Compiler::new(2, 2).unwrap();
        let y = c.generating_set().instructions();
        let all = all_instructions(2, 2);
        for s in (0..256u128).step_by(5) {
            let g = Transformation::from_enumeration_index(2, 2, s);
            let r = c.transformation_program(&g).unwrap();
            match exact_complexity(&g, &y, usize::MAX) {
                Complexity::Exact(k) => assert!(k <= r.length),
                Complexity::Unknown => panic!("Y generates Tran(A^2)"),
            }
            match exact_complexity(&g, &all, usize::MAX) {
                Complexity::Exact(k) => assert!(k <= r.length),
                Complexity::Unknown => panic!("instructions generate Tran(A^2)"),
            }
        }
    }

    #[test]
    fn swap_is_minimal_at_q2() {
        let swap = swap_program(2).compute();
        let all = all_instructions(2, 2);
        assert_eq!(exact_complexity(&swap, &all, usize::MAX), Complexity::Exact(3));
        let id = Transformation::identity(2, 2);
        assert_eq!(exact_complexity(&id, &all, 1), Complexity::Exact(0));
        assert_eq!(exact_complexity(&swap, &all, 5), Complexity::Unknown);
    }
}
