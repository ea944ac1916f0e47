//! The three-instruction swap, checked on every state and against the
//! breadth-first search for the shortest program.

use mlcomp::algebra::{all_instructions, swap_program};
use mlcomp::compiler::exact_complexity;
use mlcomp::formats::print_program;
use mlcomp::Transformation;

fn main() {
    for q in [2, 3, 5] {
        let p = swap_program(q);
        let swap = Transformation::from_fn(2, q, |x| vec![x[1], x[0]]);
        println!("q={q}: computes the swap: {}", p.compute() == swap);
    }
    let p = swap_program(2);
    print!("{}", print_program(&p));
    let best = exact_complexity(&p.compute(), &all_instructions(2, 2), 1 << 16);
    println!("shortest program at q=2: {best:?}");
}
