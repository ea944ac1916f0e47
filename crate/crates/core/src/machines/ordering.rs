use crate::error::{Error, Result};

/// An ordering of `Z_Q^n` in which consecutive vectors differ in every
/// coordinate. Rows start at the vectors with last coordinate 0 (in
/// little-endian lex order of the first `n − 1` coordinates); row entries
/// add `j·(1, …, 1)` for `j = 0, …, Q − 1`.
pub fn all_diff_ordering(big_q: u32, n: usize) -> Result<Vec<Vec<u32>>> {
    if big_q < 4 {
        return Err(Error::Precondition(format!("Q={big_q} < 4")));
    }
    if n == 0 {
        return Err(Error::Precondition("n must be ≥ 1".into()));
    }
    let rows = (big_q as usize)
        .checked_pow(n as u32 - 1)
        .filter(|r| r.checked_mul(big_q as usize).is_some())
        .ok_or_else(|| Error::Precondition("Q^n overflows".into()))?;
    let mut out = Vec::with_capacity(rows * big_q as usize);
    let mut start = vec![0u32; n];
    for row in 0..rows {
        let mut k = row;
        for d in start.iter_mut().take(n - 1) {
            *d = (k % big_q as usize) as u32;
            k /= big_q as usize;
        }
        for j in 0..big_q {
            out.push(start.iter().map(|&d| (d + j) % big_q).collect());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn covers_and_differs_everywhere() {
        for (q, n) in [(4, 2), (5, 2), (4, 3), (7, 1)] {
            let v = all_diff_ordering(q, n).unwrap();
            assert_eq!(v.len(), (q as usize).pow(n as u32));
            let set: HashSet<_> = v.iter().cloned().collect();
            assert_eq!(set.len(), v.len());
            for w in v.windows(2) {
                assert!(w[0].iter().zip(&w[1]).all(|(a, b)| a != b), "{w:?}");
            }
        }
        let v = all_diff_ordering(4, 2).unwrap();
        assert_eq!(&v[..4], &[vec![0, 0], vec![1, 1], vec![2, 2], vec![3, 3]]);
        assert_eq!(v[4], vec![1, 0]);
        assert!(all_diff_ordering(3, 2).is_err());
    }
}
