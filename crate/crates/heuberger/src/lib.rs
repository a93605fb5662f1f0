//! Exact chromatic numbers of connected abelian Cayley graphs presented by
//! integer matrices, with machine-checkable certificates and a brute-force
//! finite-graph oracle for independent verification.

pub mod cayley;
pub mod certify;
pub mod classify;
pub mod error;
pub mod intmat;
pub mod normalform;
pub mod oracle;

pub use error::{Error, Result};
pub use intmat::HeubergerMatrix;
