pub mod arith;
pub mod characters;
pub mod error;
pub mod lfunc;
pub mod mellin;
pub mod reciprocity;
pub mod specfun;
pub mod sums;

pub use error::{Error, Result};
