//! Character alphabets `Z_r`, `Z_{n!}`, `(Q/Z)_I` inside `Q ∩ (-1, 0]`, their
//! orders, and finite preorders with joins.

mod character;
mod preorder;
mod vector;

pub use character::{
    cmp_factorial_scalar, cmp_standard, factorial_big, factorial_u64, Character, FactorialForm,
    MAX_LEVEL,
};
pub use preorder::{join, strata_preorder, subset_label, subsets_by_size, Preorder};
pub use vector::{
    cmp_factorial_vector, cmp_product, count_characters, enumerate_characters, factorial_sort,
    is_prime, level_of_order, prime_to_part, standard_sort, support_partition, CharVector,
    Comparison, FactorialKeys, MAX_ENUMERATION,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("invalid character -{p}/{q}: need 0 <= p < q")]
    InvalidCharacter { p: u64, q: u64 },
    #[error("denominator {q} has factorial level above {}", MAX_LEVEL)]
    LevelTooLarge { q: u64 },
    #[error("denominator does not fit in 64 bits")]
    DenominatorOverflow,
    #[error("vectors have lengths {left} and {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("level r_{index} must be positive")]
    ZeroLevel { index: usize },
    #[error("index {index} out of range for {len} components")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("enumeration of {count} characters exceeds the limit")]
    TooLarge { count: String },
    #[error("relation is not reflexive at {0}")]
    NotReflexive(String),
    #[error("relation is not transitive: {0} <= {1} <= {2}")]
    NotTransitive(String, String, String),
}
