//! A shortened Hamming code locating single errors.

use mlcomp::codes::{err, odd, shortened_hamming};

fn main() -> mlcomp::Result<()> {
    let code = shortened_hamming(16)?;
    println!("k={} r={} length={}", code.k(), code.r(), code.n_hat());
    let u: Vec<u8> = (0..16).map(|i| (i * 7 % 3 == 0) as u8).collect();
    let word = code.encode(&u)?;
    let mut located = 0;
    for e in 0..code.n_hat() {
        let mut v = word.clone();
        v[e] ^= 1;
        located += (code.decode_error_position(&v)? == e + 1) as usize;
    }
    println!("single errors located: {located}/{}", code.n_hat());
    let q = 5;
    let flips: Vec<_> = (0..q).map(|a| (a, err(a, q), odd(err(a, q)))).collect();
    println!("err over q={q}: {flips:?}");
    Ok(())
}
