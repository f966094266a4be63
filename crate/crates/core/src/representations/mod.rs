//! Turnover and hyperelliptic representation candidates.

mod euler;
mod h5;
mod solver;
mod turnover;
mod words;

pub use euler::*;
pub use h5::*;
pub use solver::*;
pub use turnover::*;
pub use words::*;
