//! The Gray code constructions and their run counts.

use mlcomp::gray::{canonical_gray, doubling_gray, even_gray, product_gray, pseudo_gray};

fn main() -> mlcomp::Result<()> {
    let g4 = doubling_gray(4)?;
    println!("doubling G_4, {} runs:", g4.run_count());
    for (s, d) in g4.order().iter().zip(g4.delta()) {
        println!("  {:?}  delta {d}", s.digits());
    }
    for n in [2, 4, 8, 16] {
        let c = doubling_gray(n)?;
        let density = c.run_count() as f64 / c.len() as f64;
        println!("doubling n={n:>2}: runs {:>6}  runs/states {density:.4}", c.run_count());
    }
    for n in 1..=6 {
        println!("canonical n={n}: runs {}", canonical_gray(n, 2)?.run_count());
    }
    println!("product n=4: runs {}", product_gray(4)?.run_count());
    println!("even q=4 n=2: runs {}", even_gray(2, 4)?.run_count());
    let p = pseudo_gray(2, 3)?;
    println!("pseudo n=2 Q=3: length {} redundancy {}", p.len(), p.redundancy());
    Ok(())
}
