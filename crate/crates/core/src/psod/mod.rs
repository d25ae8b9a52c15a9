//! Descriptors of preordered semi-orthogonal decompositions: each factor is
//! a label (stratum, character) with provenance, listed in a linear
//! extension of the label order.

mod embedding;
mod nc;

pub use embedding::{check_embedding, embedding_check, EmbeddingReport};
pub(crate) use nc::aggregate;
pub use nc::{psod_nc, psod_simplicial, NcDescriptor, NcFactor, SimplicialDescriptor};

use crate::orders::{
    cmp_factorial_vector, cmp_product, count_characters, enumerate_characters, factorial_u64,
    standard_sort, support_partition, CharVector, Character, Comparison, OrderError,
    MAX_ENUMERATION,
};
use crate::strata::{SncComplex, StrataError};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PsodError {
    #[error("factorial order needs a diagonal level (n!, .., n!), got {0:?}")]
    NonDiagonalLevel(Vec<u64>),
    #[error("level has {found} entries for {components} components")]
    LevelLength { found: usize, components: usize },
    #[error("truncation level must be at least {min}, got {found}")]
    Truncation { min: u64, found: u64 },
    #[error("descriptor with {0} labels exceeds the limit")]
    TooLarge(String),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Strata(#[from] StrataError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Provenance {
    BaseStack,
    GerbeCharacter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Standard,
    Factorial,
}

impl std::str::FromStr for OrderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "standard" => Ok(OrderKind::Standard),
            "factorial" => Ok(OrderKind::Factorial),
            other => Err(format!(
                "unknown order {other:?}; expected standard or factorial"
            )),
        }
    }
}

/// Either a finite level `r` or a truncation `n` of the factorial tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Level {
    Truncation(u64),
    Finite(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorLabel {
    /// Component indices of the stratum.
    #[serde(skip)]
    pub support: Vec<usize>,
    /// Component names of the stratum.
    pub stratum: Vec<String>,
    #[serde(rename = "char")]
    pub character: CharVector,
    pub provenance: Provenance,
    /// Smallest `n` with the character in `Z_{n!}`.
    pub first_level: u64,
    /// The stratum is empty, so the factor is zero.
    pub zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsodDescriptor {
    pub level: Level,
    pub order: OrderKind,
    pub components: Vec<String>,
    pub labels: Vec<FactorLabel>,
}

impl PsodDescriptor {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The finite level `r` this descriptor lives at.
    pub fn levels(&self) -> Vec<u64> {
        match &self.level {
            Level::Finite(r) => r.clone(),
            Level::Truncation(n) => {
                vec![factorial_u64(*n).unwrap_or(u64::MAX); self.components.len()]
            }
        }
    }

    /// Compare two labels under this descriptor's order.
    pub fn compare(&self, a: &FactorLabel, b: &FactorLabel) -> Comparison {
        let r = match self.order {
            OrderKind::Standard => cmp_product(&a.character, &b.character),
            OrderKind::Factorial => cmp_factorial_vector(&a.character, &b.character),
        };
        r.expect("labels of one descriptor have equal length")
    }

    pub fn nonzero_labels(&self) -> impl Iterator<Item = &FactorLabel> {
        self.labels.iter().filter(|l| !l.zero)
    }

    pub fn characters(&self) -> Vec<CharVector> {
        self.labels.iter().map(|l| l.character.clone()).collect()
    }
}

fn label_for(c: &SncComplex, v: CharVector) -> FactorLabel {
    let support = support_partition(&v);
    FactorLabel {
        stratum: support.iter().map(|&i| c.components()[i].clone()).collect(),
        provenance: if support.is_empty() {
            Provenance::BaseStack
        } else {
            Provenance::GerbeCharacter
        },
        first_level: v.level(),
        zero: !c.is_nonempty(&support),
        support,
        character: v,
    }
}

fn diagonal_factorial(r: &[u64]) -> Option<u64> {
    let first = *r.first()?;
    if r.iter().any(|&x| x != first) {
        return None;
    }
    (1..=20).find(|&n| factorial_u64(n) == Some(first))
}

/// All labels `(J, χ)` with `χ ∈ Z*_{J,r}`, including the base label.
pub fn psod_snc(c: &SncComplex, r: &[u64], order: OrderKind) -> Result<PsodDescriptor, PsodError> {
    if r.len() != c.len() {
        return Err(PsodError::LevelLength {
            found: r.len(),
            components: c.len(),
        });
    }
    let level = match order {
        OrderKind::Factorial => {
            if c.is_empty() {
                Level::Truncation(1)
            } else {
                let n =
                    diagonal_factorial(r).ok_or_else(|| PsodError::NonDiagonalLevel(r.to_vec()))?;
                // n = 1 and n = 0 give the same level; keep the larger so 1 = 1!.
                Level::Truncation(n.max(1))
            }
        }
        OrderKind::Standard => Level::Finite(r.to_vec()),
    };
    let all: Vec<usize> = (0..c.len()).collect();
    let count = count_characters(r, &all, false, None)?;
    if count > BigUint::from(MAX_ENUMERATION) {
        return Err(PsodError::TooLarge(count.to_string()));
    }
    let mut chars = enumerate_characters(r, &all, false, None)?;
    if order == OrderKind::Standard {
        standard_sort(&mut chars);
    }
    let labels = chars.into_iter().map(|v| label_for(c, v)).collect();
    Ok(PsodDescriptor {
        level,
        order,
        components: c.components().to_vec(),
        labels,
    })
}

/// The truncation at level `n` of the factorial tower.
pub fn psod_infinite(c: &SncComplex, n: u64) -> Result<PsodDescriptor, PsodError> {
    if n == 0 {
        return Err(PsodError::Truncation { min: 1, found: n });
    }
    let r = factorial_u64(n).ok_or_else(|| PsodError::TooLarge(format!("({n}!)^{}", c.len())))?;
    psod_snc(c, &vec![r; c.len()], OrderKind::Factorial)
}

fn single_divisor() -> SncComplex {
    SncComplex::from_divisors(vec!["D".into()], &[], &[]).expect("one component")
}

/// One divisor, level `n!`, factorial order.
pub fn psod_single(n: u64) -> Result<PsodDescriptor, PsodError> {
    psod_infinite(&single_divisor(), n)
}

/// One divisor, level `r`, standard order.
pub fn psod_bls(r: u64) -> Result<PsodDescriptor, PsodError> {
    if r == 0 {
        return Err(PsodError::Truncation { min: 1, found: r });
    }
    psod_snc(&single_divisor(), &[r], OrderKind::Standard)
}

/// Comparison of the standard one-step decomposition at level `n!` with the
/// factorial one at truncation `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivergenceReport {
    pub level: u64,
    pub same_labels: bool,
    pub same_order: bool,
    /// Characters whose factors are not the same subcategory: those born at a
    /// lower level of the tower, hence pulled back rather than supported on `D`.
    pub flagged: Vec<Character>,
}

pub fn bls_divergence(n: u64) -> Result<DivergenceReport, PsodError> {
    let fact = psod_single(n)?;
    let r = factorial_u64(n).ok_or_else(|| PsodError::TooLarge(format!("{n}!")))?;
    let bls = psod_bls(r)?;
    let mut a: Vec<CharVector> = fact.characters();
    let mut b: Vec<CharVector> = bls.characters();
    let same_order = a == b;
    a.sort();
    b.sort();
    let flagged = fact
        .labels
        .iter()
        .filter(|l| l.provenance == Provenance::GerbeCharacter && l.first_level < n)
        .map(|l| l.character.0[0])
        .collect();
    Ok(DivergenceReport {
        level: n,
        same_labels: a == b,
        same_order,
        flagged,
    })
}
