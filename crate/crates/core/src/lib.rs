//! Straight-line programs and synchronous machines over finite alphabets.

pub mod algebra;
pub mod cli;
pub mod codes;
pub mod compiler;
pub mod error;
pub mod formats;
pub mod gray;
pub mod machines;
pub mod sim;
pub mod verify;

pub use algebra::{Instruction, Program, State, Symbol, Transformation};
pub use compiler::{Compiler, GeneratingSet};
pub use error::{Error, Result};
