//! Exact reduction of regularized elliptic multiple zeta values `I(k; τ)` to
//! admissible and `{0,1}`-index values, with an independent numerical
//! evaluator for checking the emitted identities.

pub mod cli;
pub mod error;
pub mod expr;
pub mod fay;
pub mod index;
pub mod numerics;
pub mod poly;
pub mod reduction;
pub mod relations;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use expr::{Expression, Monomial};
pub use index::Index;
pub use reduction::{reduce, ReductionTrace};
