//! Systematic shortened binary Hamming codes and the `odd` / `err` symbol
//! maps that let q-ary registers carry one code bit each.

use crate::algebra::Symbol;
use crate::error::{Error, Result};

/// Parity bit of a symbol.
pub fn odd(a: Symbol) -> u8 {
    (a & 1) as u8
}

/// Componentwise [`odd`].
pub fn odd_map(x: &[Symbol]) -> Vec<u8> {
    x.iter().map(|&a| odd(a)).collect()
}

/// Moves `a` to a neighbouring symbol of the other parity.
pub fn err(a: Symbol, q: u32) -> Symbol {
    if a + 1 < q {
        a + 1
    } else {
        a - 1
    }
}

/// A binary shortened Hamming code in systematic form. Positions `1..=k`
/// carry information bits, positions `k+1..=k+r` parity bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    k: usize,
    r: usize,
    /// Parity-check column of each position, as an `r`-bit numeral.
    columns: Vec<u32>,
    /// Position (1-based) of each syndrome value; 0 where none.
    locator: Vec<usize>,
}

/// Smallest `r` with `2^r − r − 1 ≥ k`.
pub fn parity_length(k: usize) -> usize {
    let mut r = 2;
    while (1usize << r) - r - 1 < k {
        r += 1;
    }
    r
}

/// The Hamming code of length `2^r − 1` shortened to `k` information bits.
/// Information columns are the non-power-of-two numerals in increasing
/// order; parity bit `t` has column `2^t`.
pub fn shortened_hamming(k: usize) -> Result<LinearCode> {
    if k == 0 {
        return Err(Error::Precondition("information length must be ≥ 1".into()));
    }
    if k >= 1 << 31 {
        return Err(Error::Precondition(format!("information length {k} too large")));
    }
    let r = parity_length(k);
    let mut columns: Vec<u32> = (3u32..)
        .filter(|c| !c.is_power_of_two())
        .take(k)
        .collect();
    columns.extend((0..r).map(|t| 1u32 << t));
    let mut locator = vec![0; 1 << r];
    for (j, &c) in columns.iter().enumerate() {
        locator[c as usize] = j + 1;
    }
    Ok(LinearCode {
        k,
        r,
        columns,
        locator,
    })
}

impl LinearCode {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of parity bits.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n_hat(&self) -> usize {
        self.k + self.r
    }

    pub fn columns(&self) -> &[u32] {
        &self.columns
    }

    /// `k × n̂` generator matrix `[I | P]`.
    pub fn generator(&self) -> Vec<Vec<u8>> {
        (0..self.k)
            .map(|i| {
                let mut row = vec![0u8; self.n_hat()];
                row[i] = 1;
                for t in 0..self.r {
                    row[self.k + t] = (self.columns[i] >> t & 1) as u8;
                }
                row
            })
            .collect()
    }

    /// `r × n̂` parity-check matrix.
    pub fn parity_check(&self) -> Vec<Vec<u8>> {
        (0..self.r)
            .map(|t| self.columns.iter().map(|c| (c >> t & 1) as u8).collect())
            .collect()
    }

    /// 1-based position whose column equals `syndrome`, or 0.
    pub fn locate(&self, syndrome: u32) -> usize {
        self.locator[syndrome as usize]
    }

    /// Encodes a word whose bit `i` is information bit `i`; bit `j` of the
    /// result is position `j + 1`. Only for `n̂ ≤ 64`.
    pub fn encode_word(&self, u: u64) -> u64 {
        let mut parity = 0u32;
        for i in 0..self.k {
            if u >> i & 1 == 1 {
                parity ^= self.columns[i];
            }
        }
        (u & ((1 << self.k) - 1)) | (parity as u64) << self.k
    }

    pub fn syndrome_word(&self, v: u64) -> u32 {
        let mut s = 0;
        for (j, &c) in self.columns.iter().enumerate() {
            if v >> j & 1 == 1 {
                s ^= c;
            }
        }
        s
    }

    /// 1-based error position of `v`, or 0 for codewords and for words
    /// not within distance 1 of the code.
    pub fn decode_word(&self, v: u64) -> usize {
        self.locator[self.syndrome_word(v) as usize]
    }

    fn check_len(&self, got: usize, want: usize) -> Result<()> {
        if got != want {
            return Err(Error::Shape(format!("word of length {got}, expected {want}")));
        }
        Ok(())
    }

    fn syndrome_of(&self, bits: &[u8]) -> u32 {
        bits.iter()
            .zip(&self.columns)
            .filter(|(b, _)| **b & 1 == 1)
            .fold(0, |s, (_, c)| s ^ c)
    }

    pub fn encode(&self, u: &[u8]) -> Result<Vec<u8>> {
        self.check_len(u.len(), self.k)?;
        let parity = self.syndrome_of(u);
        let mut w = u.to_vec();
        w.extend((0..self.r).map(|t| (parity >> t & 1) as u8));
        Ok(w)
    }

    pub fn decode_error_position(&self, v: &[u8]) -> Result<usize> {
        self.check_len(v.len(), self.n_hat())?;
        Ok(self.locate(self.syndrome_of(v)))
    }

    /// Minimum weight of a nonzero codeword, by enumeration (`k ≤ 24`).
    pub fn minimum_distance(&self) -> usize {
        (1u64..1 << self.k)
            .map(|u| self.encode_word(u).count_ones() as usize)
            .min()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths() {
        assert_eq!(shortened_hamming(1).unwrap().n_hat(), 3);
        assert_eq!(shortened_hamming(2).unwrap().n_hat(), 5);
        assert_eq!(shortened_hamming(4).unwrap().n_hat(), 7);
        assert_eq!(shortened_hamming(11).unwrap().n_hat(), 15);
        assert_eq!(shortened_hamming(16).unwrap().n_hat(), 21);
        assert!(shortened_hamming(0).is_err());
    }

    #[test]
    fn systematic_and_distance_three() {
        assert_eq!(shortened_hamming(19683).unwrap().n_hat(), 19683 + 15);
        for k in [1, 2, 3, 4, 5, 11, 16] {
            let c = shortened_hamming(k).unwrap();
            for (i, row) in c.generator().iter().enumerate() {
                assert!((0..k).all(|j| row[j] == (i == j) as u8));
            }
            assert_eq!(c.minimum_distance(), 3, "k={k}");
        }
    }

    #[test]
    fn single_errors_located_k16() {
        let c = shortened_hamming(16).unwrap();
        for u in 0u64..1 << 16 {
            let w = c.encode_word(u);
            assert_eq!(w & 0xffff, u);
            assert_eq!(c.decode_word(w), 0);
            for j in 0..21 {
                assert_eq!(c.decode_word(w ^ 1 << j), j + 1);
            }
        }
    }

    #[test]
    fn double_errors_k4() {
        // At full length every syndrome is a column: a weight-2 error is
        // always mislocated, but never onto either corrupted position.
        let c = shortened_hamming(4).unwrap();
        for u in 0u64..16 {
            let w = c.encode_word(u);
            for a in 0..7 {
                for b in a + 1..7 {
                    let d = c.decode_word(w ^ 1 << a ^ 1 << b);
                    assert!(d != a + 1 && d != b + 1);
                }
            }
        }
    }

    #[test]
    fn vector_interface() {
        let c = shortened_hamming(4).unwrap();
        let w = c.encode(&[1, 0, 1, 1]).unwrap();
        assert_eq!(&w[..4], &[1, 0, 1, 1]);
        assert_eq!(c.decode_error_position(&w).unwrap(), 0);
        let mut v = w.clone();
        v[5] ^= 1;
        assert_eq!(c.decode_error_position(&v).unwrap(), 6);
        assert!(c.encode(&[1, 0]).is_err());
        assert!(c.decode_error_position(&w[..6]).is_err());
        let h = c.parity_check();
        assert_eq!(h.len(), 3);
        for row in &h {
            let dot: u8 = row.iter().zip(&w).map(|(a, b)| a & b).sum();
            assert_eq!(dot % 2, 0);
        }
    }

    #[test]
    fn odd_and_err() {
        assert_eq!(err(0, 2), 1);
        assert_eq!(err(1, 2), 0);
        assert_eq!([err(0, 3), err(1, 3), err(2, 3)], [1, 2, 1]);
        assert_eq!(odd_map(&[2, 1, 0]), vec![0, 1, 0]);
        for q in 2..=16 {
            for a in 0..q {
                assert_eq!(odd(err(a, q)), 1 - odd(a));
                assert!(err(a, q) < q);
            }
        }
    }
}
