//! chi, e and tau from sections, and the identities relating them.

mod frames;
mod kaehler;
mod mesh;
mod quadrature;
mod report;
mod toledo;

pub use frames::*;
pub use kaehler::*;
pub use mesh::*;
pub use quadrature::*;
pub use report::*;
pub use toledo::*;
