//! Combinatorics of root stacks of log pairs: toric monoids and their
//! Kummer extensions, factorial orders on characters, strata of normal
//! crossings pairs, semi-orthogonal decomposition descriptors, and the
//! splitting of additive invariants along strata.

pub mod invariants;
mod json;
pub mod monoid;
pub mod oracles;
pub mod orders;
pub mod psod;
pub mod strata;

use thiserror::Error;

/// Any error raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Monoid(#[from] monoid::MonoidError),
    #[error(transparent)]
    Order(#[from] orders::OrderError),
    #[error(transparent)]
    Strata(#[from] strata::StrataError),
    #[error(transparent)]
    Psod(#[from] psod::PsodError),
    #[error(transparent)]
    Invariant(#[from] invariants::InvariantError),
}
