//! Gray and pseudo-Gray codes with few runs.
//!
//! Codes are stored as state sequences starting at the all-zero state. The
//! delta sequence `C(G)` records, for each position `i`, the coordinate in
//! which element `i − 1` (cyclically) and element `i` differ; coordinates are
//! 0-based. A run is a stretch of pairwise distinct deltas.

use std::ops::Range;

use crate::algebra::{checked_pow, Symbol, State};
use crate::error::{Error, Result};

/// Greedy maximal-prefix partition of `delta` into runs.
pub fn greedy_runs(delta: &[usize]) -> Vec<Range<usize>> {
    let width = delta.iter().copied().max().map_or(0, |m| m + 1);
    let mut seen = vec![usize::MAX; width];
    let mut runs = Vec::new();
    let mut start = 0;
    for (i, &c) in delta.iter().enumerate() {
        if seen[c] != usize::MAX && seen[c] >= start {
            runs.push(start..i);
            start = i;
        }
        seen[c] = i;
    }
    if start < delta.len() {
        runs.push(start..delta.len());
    }
    runs
}

/// The coordinate in which two states differ, if exactly one.
fn single_difference(a: &State, b: &State) -> Option<usize> {
    let mut diff = a
        .digits()
        .iter()
        .zip(b.digits())
        .enumerate()
        .filter(|(_, (x, y))| x != y)
        .map(|(i, _)| i);
    match (diff.next(), diff.next()) {
        (Some(i), None) => Some(i),
        _ => None,
    }
}

/// Cyclic delta sequence; errors on a pair not at Hamming distance 1.
fn cyclic_delta(order: &[State]) -> Result<Vec<usize>> {
    let len = order.len();
    (0..len)
        .map(|i| {
            let prev = &order[(i + len - 1) % len];
            single_difference(prev, &order[i]).ok_or_else(|| {
                Error::Precondition(format!(
                    "elements {} ({prev}) and {i} ({}) are not at distance 1",
                    (i + len - 1) % len,
                    order[i]
                ))
            })
        })
        .collect()
}

fn check_shape(order: &[State], n: usize, q: u32) -> Result<usize> {
    let size = checked_pow(q, n).ok_or_else(|| Error::Shape("q^n overflows".into()))?;
    if let Some(s) = order.iter().find(|s| s.n() != n || s.q() != q) {
        return Err(Error::Shape(format!("state {s} is not in [{q}]^{n}")));
    }
    Ok(size)
}

/// A cyclic `(n, q)`-Gray code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayCode {
    n: usize,
    q: u32,
    order: Vec<State>,
    delta: Vec<usize>,
}

impl GrayCode {
    /// Validates `order`: each state of `[q]^n` exactly once, consecutive
    /// elements (cyclically) at Hamming distance 1.
    pub fn new(n: usize, q: u32, order: Vec<State>) -> Result<Self> {
        let size = check_shape(&order, n, q)?;
        if order.len() != size {
            return Err(Error::Precondition(format!(
                "{} states listed, {size} expected",
                order.len()
            )));
        }
        let mut seen = vec![false; size];
        for s in &order {
            if std::mem::replace(&mut seen[s.index()], true) {
                return Err(Error::Precondition(format!("state {s} repeated")));
            }
        }
        let delta = cyclic_delta(&order)?;
        Ok(GrayCode { n, q, order, delta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[State] {
        &self.order
    }

    pub fn delta(&self) -> &[usize] {
        &self.delta
    }

    pub fn runs(&self) -> Vec<Range<usize>> {
        greedy_runs(&self.delta)
    }

    pub fn run_count(&self) -> usize {
        self.runs().len()
    }

    /// Position of each state (by lex index) in the code.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, s) in self.order.iter().enumerate() {
            pos[s.index()] = i;
        }
        pos
    }

    /// Lex index of each code element.
    pub fn indices(&self) -> Vec<usize> {
        self.order.iter().map(State::index).collect()
    }
}

/// An `(n, q)`-pseudo-Gray code: a cyclic distance-1 sequence covering
/// `[q]^n`, repeats allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoGrayCode {
    n: usize,
    q: u32,
    order: Vec<State>,
    delta: Vec<usize>,
}

impl PseudoGrayCode {
    pub fn new(n: usize, q: u32, order: Vec<State>) -> Result<Self> {
        let size = check_shape(&order, n, q)?;
        let mut seen = vec![false; size];
        for s in &order {
            seen[s.index()] = true;
        }
        if let Some(missing) = seen.iter().position(|&b| !b) {
            return Err(Error::Precondition(format!(
                "state {} never visited",
                State::from_index(missing, n, q)?
            )));
        }
        let delta = cyclic_delta(&order)?;
        Ok(PseudoGrayCode { n, q, order, delta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[State] {
        &self.order
    }

    pub fn delta(&self) -> &[usize] {
        &self.delta
    }

    pub fn runs(&self) -> Vec<Range<usize>> {
        greedy_runs(&self.delta)
    }

    pub fn run_count(&self) -> usize {
        self.runs().len()
    }

    /// `r(P) + L − q^n`.
    pub fn redundancy(&self) -> usize {
        let size = checked_pow(self.q, self.n).expect("validated");
        self.run_count() + self.order.len() - size
    }

    /// Whether every state appears exactly once.
    pub fn is_gray(&self) -> bool {
        checked_pow(self.q, self.n) == Some(self.order.len())
    }

    /// Relabels every coordinate symbol by `map`, which must be a
    /// permutation of `[q]`.
    pub fn relabel(&self, map: &[Symbol]) -> Result<Self> {
        let order = self
            .order
            .iter()
            .map(|s| State::new(s.digits().iter().map(|&d| map[d as usize]).collect(), self.q))
            .collect::<Result<Vec<_>>>()?;
        PseudoGrayCode::new(self.n, self.q, order)
    }
}

impl From<GrayCode> for PseudoGrayCode {
    fn from(g: GrayCode) -> Self {
        PseudoGrayCode {
            n: g.n,
            q: g.q,
            order: g.order,
            delta: g.delta,
        }
    }
}

/// Modular `q`-ary Gray code, coordinate 0 most significant. For `q = 2`
/// this is the binary reflected code.
pub fn canonical_gray(n: usize, q: u32) -> Result<GrayCode> {
    if n == 0 || q < 2 {
        return Err(Error::Precondition(format!(
            "canonical code needs n ≥ 1 and q ≥ 2, got n={n}, q={q}"
        )));
    }
    let size = checked_pow(q, n).ok_or_else(|| Error::Shape("q^n overflows".into()))?;
    let mut order = Vec::with_capacity(size);
    let mut a = vec![0 as Symbol; n];
    for mut k in 0..size {
        for d in a.iter_mut().rev() {
            *d = (k % q as usize) as Symbol;
            k /= q as usize;
        }
        let g = (0..n)
            .map(|i| if i == 0 { a[0] } else { (a[i] + q - a[i - 1]) % q })
            .collect();
        order.push(State::new(g, q)?);
    }
    GrayCode::new(n, q, order)
}

/// Concatenates the digits of two states.
fn join(a: &State, b: &State) -> Vec<Symbol> {
    let mut d = a.digits().to_vec();
    d.extend_from_slice(b.digits());
    d
}

/// Binary code from the doubling construction; `n` a power of two.
pub fn doubling_gray(n: usize) -> Result<GrayCode> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::Precondition(format!("n={n} is not a power of two ≥ 2")));
    }
    let mut code = canonical_gray(2, 2)?;
    while code.n < n {
        let half = code.n;
        let size = code.len();
        let mut order = Vec::with_capacity(size * size);
        for row in 0..size / 2 {
            let u0 = (size - (2 * row) % size) % size;
            for t in 0..2 * size {
                let u = (u0 + t / 2) % size;
                let v = t.div_ceil(2) % size;
                order.push(State::new(join(&code.order[u], &code.order[v]), 2)?);
            }
        }
        code = GrayCode::new(2 * half, 2, order)?;
    }
    Ok(code)
}

/// Boustrophedon product: the slow code fixes the first coordinates, the
/// fast code sweeps the rest, reversed on odd rows.
fn product(slow: &GrayCode, fast: &GrayCode) -> Result<GrayCode> {
    let mut order = Vec::with_capacity(slow.len() * fast.len());
    for (row, s) in slow.order.iter().enumerate() {
        let mut sweep: Vec<&State> = fast.order.iter().collect();
        if row % 2 == 1 {
            sweep.reverse();
        }
        for f in sweep {
            order.push(State::new(join(s, f), slow.q)?);
        }
    }
    GrayCode::new(slow.n + fast.n, slow.q, order)
}

fn binary_gray(n: usize) -> Result<GrayCode> {
    if n == 1 {
        canonical_gray(1, 2)
    } else {
        product_gray(n)
    }
}

/// Binary code for any `n ≥ 2`: the doubling code on the largest power of
/// two `m ≤ n`, producted with an `(n − m)`-bit code.
pub fn product_gray(n: usize) -> Result<GrayCode> {
    if n < 2 {
        return Err(Error::Precondition(format!("product code needs n ≥ 2, got {n}")));
    }
    let m = 1 << (usize::BITS - 1 - n.leading_zeros());
    if m == n {
        return doubling_gray(n);
    }
    product(&binary_gray(n - m)?, &doubling_gray(m)?)
}

/// Code over an even alphabet `q = 2p`: digit `d = 2a + b` pairs a `p`-ary
/// digit `a` with a bit `b`.
pub fn even_gray(n: usize, q: u32) -> Result<GrayCode> {
    if q < 2 || q % 2 == 1 {
        return Err(Error::Precondition(format!("q={q} is not even")));
    }
    if n == 0 {
        return Err(Error::Precondition("n must be ≥ 1".into()));
    }
    let p = q / 2;
    let binary = binary_gray(n)?;
    if p == 1 {
        return Ok(binary);
    }
    let coarse = if p % 2 == 0 {
        even_gray(n, p)?
    } else {
        canonical_gray(n, p)?
    };
    // With an odd number of rows the sweep would end one row short of
    // closing; letting the binary code drive the rows keeps the count even.
    let coarse_slow = coarse.len() % 2 == 0;
    let (slow, fast) = if coarse_slow {
        (&coarse, &binary)
    } else {
        (&binary, &coarse)
    };
    let mut order = Vec::with_capacity(slow.len() * fast.len());
    for (row, s) in slow.order.iter().enumerate() {
        let mut sweep: Vec<&State> = fast.order.iter().collect();
        if row % 2 == 1 {
            sweep.reverse();
        }
        for f in sweep {
            let (a, b) = if coarse_slow { (s, f) } else { (f, s) };
            let digits = a
                .digits()
                .iter()
                .zip(b.digits())
                .map(|(&x, &y)| 2 * x + y)
                .collect();
            order.push(State::new(digits, q)?);
        }
    }
    GrayCode::new(n, q, order)
}

/// Pseudo-Gray code over `[Q]^n`. Even `Q` gives the even-alphabet Gray
/// code. Odd `Q` sweeps `[Q − 1]^n` with a Gray code, then visits the
/// remaining states nearest-first by single-coordinate moves and walks
/// back next to the start.
pub fn pseudo_gray(n: usize, big_q: u32) -> Result<PseudoGrayCode> {
    if big_q < 2 {
        return Err(Error::Precondition(format!("Q={big_q} < 2")));
    }
    if big_q % 2 == 0 {
        return Ok(even_gray(n, big_q)?.into());
    }
    let inner = if big_q == 3 {
        binary_gray(n)?
    } else {
        even_gray(n, big_q - 1)?
    };
    let top = big_q - 1;
    let lift = |s: &State| State::new(s.digits().to_vec(), big_q);
    let mut order = inner.order.iter().map(lift).collect::<Result<Vec<_>>>()?;

    let size = checked_pow(big_q, n).ok_or_else(|| Error::Shape("Q^n overflows".into()))?;
    let mut remaining: Vec<State> = (0..size)
        .map(|j| State::from_index(j, n, big_q))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|s| s.digits().contains(&top))
        .collect();

    let walk = |order: &mut Vec<State>, target: &State, stop_short: bool| -> Result<()> {
        let mut cur = order.last().expect("nonempty").digits().to_vec();
        let diffs: Vec<usize> = (0..n).filter(|&i| cur[i] != target.digits()[i]).collect();
        let take = if stop_short {
            diffs.len().saturating_sub(1)
        } else {
            diffs.len()
        };
        for &i in &diffs[..take] {
            cur[i] = target.digits()[i];
            order.push(State::new(cur.clone(), big_q)?);
        }
        Ok(())
    };

    while !remaining.is_empty() {
        let last = order.last().expect("nonempty");
        let (k, _) = remaining
            .iter()
            .enumerate()
            .min_by_key(|(_, s)| last.hamming_distance(s))
            .expect("nonempty");
        let next = remaining.remove(k);
        walk(&mut order, &next, false)?;
    }
    let start = order[0].clone();
    walk(&mut order, &start, true)?;
    PseudoGrayCode::new(n, big_q, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(code: &GrayCode) -> Vec<String> {
        code.order().iter().map(|s| s.to_string()).collect()
    }

    fn one_based(delta: &[usize]) -> Vec<usize> {
        delta.iter().map(|c| c + 1).collect()
    }

    #[test]
    fn canonical_small_codes() {
        let g = canonical_gray(2, 2).unwrap();
        assert_eq!(strings(&g), ["00", "01", "11", "10"]);
        assert_eq!(one_based(g.delta()), [1, 2, 1, 2]);
        let g = canonical_gray(3, 2).unwrap();
        assert_eq!(
            strings(&g),
            ["000", "001", "011", "010", "110", "111", "101", "100"]
        );
        assert_eq!(one_based(g.delta()), [1, 3, 2, 3, 1, 3, 2, 3]);
        for q in 2..=5 {
            for n in 1..=3 {
                canonical_gray(n, q).unwrap();
            }
        }
    }

    #[test]
    fn canonical_run_counts() {
        for n in 2..=16 {
            assert_eq!(canonical_gray(n, 2).unwrap().run_count(), 1 << (n - 1));
        }
    }

    #[test]
    fn doubling_reproduces_g4() {
        let g = doubling_gray(4).unwrap();
        assert_eq!(
            strings(&g).join(","),
            "0000,0001,0101,0111,1111,1110,1010,1000,1100,1101,1001,1011,0011,0010,0110,0100"
        );
        assert_eq!(
            one_based(g.delta()),
            [2, 4, 2, 3, 1, 4, 2, 3, 2, 4, 2, 3, 1, 4, 2, 3]
        );
        assert_eq!(g.run_count(), 6);
        assert_eq!(doubling_gray(2).unwrap(), canonical_gray(2, 2).unwrap());
        assert!(doubling_gray(6).is_err());
    }

    #[test]
    fn doubling_density_decreases() {
        let mut last = f64::INFINITY;
        for n in [2, 4, 8, 16] {
            let g = doubling_gray(n).unwrap();
            let ratio = g.run_count() as f64 / g.len() as f64;
            assert!(ratio < last, "n={n}: {ratio}");
            assert!(g.run_count() * n >= g.len());
            last = ratio;
        }
    }

    #[test]
    fn product_codes() {
        assert_eq!(product_gray(4).unwrap(), doubling_gray(4).unwrap());
        let g = product_gray(3).unwrap();
        assert_eq!(g.len(), 8);
        let g = product_gray(12).unwrap();
        assert!(g.run_count() < 1 << 11);
        for n in 2..=10 {
            product_gray(n).unwrap();
        }
    }

    #[test]
    fn even_codes() {
        assert_eq!(even_gray(3, 2).unwrap(), product_gray(3).unwrap());
        let g = even_gray(2, 4).unwrap();
        assert_eq!(g.len(), 16);
        assert!(g.run_count() <= 16);
        for (n, q) in [(1, 4), (2, 6), (3, 4), (2, 8), (3, 6), (2, 10)] {
            even_gray(n, q).unwrap();
        }
        assert!(even_gray(2, 3).is_err());
    }

    #[test]
    fn pseudo_codes() {
        let p = pseudo_gray(2, 16).unwrap();
        assert_eq!(p.len(), 256);
        assert!(p.is_gray());
        assert_eq!(p.redundancy(), p.run_count());
        for (n, big_q) in [(2, 3), (2, 5), (3, 3), (2, 7), (3, 5)] {
            let p = pseudo_gray(n, big_q).unwrap();
            let size = checked_pow(big_q, n).unwrap();
            let inner = checked_pow(big_q - 1, n).unwrap();
            assert!(p.len() >= size);
            assert!(p.len() - size <= n * (size - inner), "n={n} Q={big_q}");
            assert!(p.order()[0].digits().iter().all(|&d| d == 0));
        }
    }

    #[test]
    fn greedy_run_examples() {
        assert_eq!(greedy_runs(&[0, 1, 0, 1]).len(), 2);
        assert_eq!(greedy_runs(&[3; 7]).len(), 7);
        assert!(greedy_runs(&[]).is_empty());
        assert_eq!(greedy_runs(&[0, 1, 2, 0]), vec![0..3, 3..4]);
    }

    #[test]
    fn validation_rejects_bad_sequences() {
        let s = |j| State::from_index(j, 2, 2).unwrap();
        assert!(GrayCode::new(2, 2, vec![s(0), s(1), s(2), s(3)]).is_err());
        assert!(GrayCode::new(2, 2, vec![s(0), s(1), s(3)]).is_err());
        assert!(PseudoGrayCode::new(2, 2, vec![s(0), s(1), s(3), s(1)]).is_err());
        assert!(PseudoGrayCode::new(2, 2, vec![s(0), s(3), s(2)]).is_err());
        assert!(PseudoGrayCode::new(2, 2, vec![s(0), s(1), s(3), s(2), s(3), s(1)]).is_ok());
    }
}
