//! Compatibility of the factorial tower under pullback: the labels at level
//! `(n-1)!` sit inside those at level `n!`, with the induced order.

use super::{psod_infinite, FactorLabel, PsodDescriptor, PsodError};
use crate::orders::{factorial_u64, CharVector, Character, Comparison};
use crate::strata::SncComplex;
use num_bigint::BigUint;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::HashMap;

/// Below this many lower labels every pair is compared directly.
pub const PAIRWISE_LIMIT: usize = 3000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMethod {
    Pairwise,
    Factorized,
    Descriptors,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub first: CharVector,
    pub second: CharVector,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub level: u64,
    pub lower_labels: String,
    pub upper_labels: String,
    pub method: CheckMethod,
    pub inclusion: bool,
    pub order: bool,
    pub violations: Vec<Violation>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.inclusion && self.order && self.violations.is_empty()
    }
}

/// Factorial digits at `level` from the top; `None` outside `Z_{level!}`.
fn digits_at(c: &Character, level: u64) -> Option<Vec<u64>> {
    c.factorial_digits(level)
}

/// The level of a character as read off its digits at `level`.
fn level_from_digits(d: &[u64], level: u64) -> u64 {
    d.iter()
        .position(|&x| x != 0)
        .map_or(1, |i| level - i as u64)
}

/// `<=!` on scalars computed from the digits at a fixed level.
fn scalar_at(x: &[u64], y: &[u64]) -> Ordering {
    // a larger digit is a smaller element
    y.cmp(x)
}

fn vector_at(a: &CharVector, b: &CharVector, level: u64) -> Option<Comparison> {
    let da: Vec<Vec<u64>> =
        a.0.iter()
            .map(|c| digits_at(c, level))
            .collect::<Option<_>>()?;
    let db: Vec<Vec<u64>> =
        b.0.iter()
            .map(|c| digits_at(c, level))
            .collect::<Option<_>>()?;
    let la = da
        .iter()
        .map(|d| level_from_digits(d, level))
        .max()
        .unwrap_or(1);
    let lb = db
        .iter()
        .map(|d| level_from_digits(d, level))
        .max()
        .unwrap_or(1);
    if la != lb {
        return Some(lb.cmp(&la).into());
    }
    let (mut less, mut greater) = (false, false);
    for (x, y) in da.iter().zip(&db) {
        match scalar_at(x, y) {
            Ordering::Less => less = true,
            Ordering::Greater => greater = true,
            Ordering::Equal => {}
        }
    }
    Some(match (less, greater) {
        (false, false) => Comparison::Equal,
        (true, false) => Comparison::Less,
        (false, true) => Comparison::Greater,
        (true, true) => Comparison::Incomparable,
    })
}

fn truncation_count(c: &SncComplex, n: u64) -> Result<BigUint, PsodError> {
    let r = factorial_u64(n).ok_or_else(|| PsodError::TooLarge(format!("{n}!")))?;
    let per = BigUint::from(r - 1);
    Ok(c.strata().iter().map(|j| per.pow(j.len() as u32)).sum())
}

/// Check that the level-`(n-1)!` labels of `c` embed into the level-`n!` ones
/// with the restricted order, without enumerating the upper level.
pub fn embedding_check(c: &SncComplex, n: u64) -> Result<EmbeddingReport, PsodError> {
    if n < 2 {
        return Err(PsodError::Truncation { min: 2, found: n });
    }
    let lower_count = truncation_count(c, n - 1)?;
    let upper_count = truncation_count(c, n)?;
    let r_low = factorial_u64(n - 1).expect("fits when n! does");
    let r_up = factorial_u64(n).expect("checked above");
    let mut violations = Vec::new();

    // every scalar of the lower level is a scalar of the upper one, at the same tower level
    let scalars: Vec<Character> = (0..r_low).map(|k| Character::of(k, r_low)).collect();
    let mut inclusion = true;
    for x in &scalars {
        let (Some(dl), Some(du)) = (digits_at(x, n - 1), digits_at(x, n)) else {
            inclusion = false;
            continue;
        };
        if !r_up.is_multiple_of(x.denominator())
            || level_from_digits(&dl, n - 1) != level_from_digits(&du, n)
        {
            inclusion = false;
            violations.push(Violation {
                first: CharVector(vec![*x]),
                second: CharVector(vec![*x]),
                reason: "level changes under pullback".into(),
            });
        }
    }

    let before = violations.len();
    let method = if lower_count <= BigUint::from(PAIRWISE_LIMIT) {
        let lower = psod_infinite(c, n - 1)?;
        for (i, a) in lower.labels.iter().enumerate() {
            for b in &lower.labels[i..] {
                compare_pair(&a.character, &b.character, n, &mut violations);
            }
        }
        CheckMethod::Pairwise
    } else {
        // vectors compare through their levels and entries, so the scalar relations decide
        let vs: Vec<CharVector> = scalars.iter().map(|x| CharVector(vec![*x])).collect();
        for (i, a) in vs.iter().enumerate() {
            for b in &vs[i..] {
                compare_pair(a, b, n, &mut violations);
            }
        }
        CheckMethod::Factorized
    };
    let order = violations.len() == before;
    Ok(EmbeddingReport {
        level: n,
        lower_labels: lower_count.to_string(),
        upper_labels: upper_count.to_string(),
        method,
        inclusion,
        order,
        violations,
    })
}

fn compare_pair(a: &CharVector, b: &CharVector, n: u64, out: &mut Vec<Violation>) {
    let low = vector_at(a, b, n - 1);
    let up = vector_at(a, b, n);
    if low != up {
        out.push(Violation {
            first: a.clone(),
            second: b.clone(),
            reason: format!("{low:?} at level {} but {up:?} at level {n}", n - 1),
        });
    }
}

fn key(l: &FactorLabel) -> (&[usize], &CharVector) {
    (&l.support, &l.character)
}

/// Compare two explicit descriptors: every lower label occurs in `upper`, and
/// every strict relation of `lower` holds in the sequence of `upper`.
pub fn check_embedding(lower: &PsodDescriptor, upper: &PsodDescriptor) -> EmbeddingReport {
    let pos: HashMap<(&[usize], &CharVector), usize> = upper
        .labels
        .iter()
        .enumerate()
        .map(|(i, l)| (key(l), i))
        .collect();
    let mut violations = Vec::new();
    let mut inclusion = true;
    for l in &lower.labels {
        if !pos.contains_key(&key(l)) {
            inclusion = false;
            violations.push(Violation {
                first: l.character.clone(),
                second: l.character.clone(),
                reason: "missing from the upper level".into(),
            });
        }
    }
    let mut order = true;
    let pairwise = lower.len() <= PAIRWISE_LIMIT;
    for (i, a) in lower.labels.iter().enumerate() {
        let later: &[FactorLabel] = if pairwise {
            &lower.labels[i + 1..]
        } else {
            &lower.labels[i + 1..(i + 2).min(lower.len())]
        };
        for b in later {
            let (Some(&pa), Some(&pb)) = (pos.get(&key(a)), pos.get(&key(b))) else {
                continue;
            };
            let cmp = upper.compare(a, b);
            let bad = match cmp {
                Comparison::Less => pa > pb,
                Comparison::Greater => pa < pb,
                _ => false,
            };
            if bad || lower.compare(a, b) != cmp {
                order = false;
                violations.push(Violation {
                    first: a.character.clone(),
                    second: b.character.clone(),
                    reason: format!("{cmp:?} but listed at positions {pa} and {pb}"),
                });
            }
        }
    }
    // the upper sequence itself must be a linear extension
    if pairwise && upper.len() <= PAIRWISE_LIMIT {
        for (i, a) in upper.labels.iter().enumerate() {
            for b in &upper.labels[i + 1..] {
                if upper.compare(a, b) == Comparison::Greater {
                    order = false;
                    violations.push(Violation {
                        first: a.character.clone(),
                        second: b.character.clone(),
                        reason: "listed before a smaller label".into(),
                    });
                }
            }
        }
    }
    EmbeddingReport {
        level: upper
            .levels()
            .first()
            .map_or(1, |&r| crate::orders::level_of_order(r)),
        lower_labels: lower.len().to_string(),
        upper_labels: upper.len().to_string(),
        method: CheckMethod::Descriptors,
        inclusion,
        order,
        violations,
    }
}
