//! Character vectors indexed by a component set, their orders, and the
//! enumeration of `Z_{J,r}` and `Z*_{J,r}`.

use super::character::{cmp_factorial_scalar, cmp_standard, level_of, Character};
use super::OrderError;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::cmp::{Ordering, Reverse};
use std::fmt;

/// Largest number of vectors [`enumerate_characters`] will materialize.
pub const MAX_ENUMERATION: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CharVector(pub Vec<Character>);

/// Result of comparing two elements under a partial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl Comparison {
    pub fn is_le(self) -> bool {
        matches!(self, Comparison::Less | Comparison::Equal)
    }
}

impl From<Ordering> for Comparison {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Comparison::Less,
            Ordering::Equal => Comparison::Equal,
            Ordering::Greater => Comparison::Greater,
        }
    }
}

impl CharVector {
    pub fn zero(len: usize) -> Self {
        CharVector(vec![Character::ZERO; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Character::is_zero)
    }

    /// Minimal `n` with every entry in `Z_{n!}`.
    pub fn level(&self) -> u64 {
        self.0.iter().map(Character::level).max().unwrap_or(1)
    }
}

impl fmt::Display for CharVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn check_lengths(a: &CharVector, b: &CharVector) -> Result<(), OrderError> {
    if a.len() != b.len() {
        return Err(OrderError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

fn componentwise(
    a: &CharVector,
    b: &CharVector,
    cmp: fn(&Character, &Character) -> Ordering,
) -> Comparison {
    let (mut some_less, mut some_greater) = (false, false);
    for (x, y) in a.0.iter().zip(&b.0) {
        match cmp(x, y) {
            Ordering::Less => some_less = true,
            Ordering::Greater => some_greater = true,
            Ordering::Equal => {}
        }
    }
    match (some_less, some_greater) {
        (false, false) => Comparison::Equal,
        (true, false) => Comparison::Less,
        (false, true) => Comparison::Greater,
        (true, true) => Comparison::Incomparable,
    }
}

/// The factorial order on vectors: higher common level first, then componentwise `<=!`.
pub fn cmp_factorial_vector(a: &CharVector, b: &CharVector) -> Result<Comparison, OrderError> {
    check_lengths(a, b)?;
    let (la, lb) = (a.level(), b.level());
    if la != lb {
        return Ok(lb.cmp(&la).into());
    }
    Ok(componentwise(a, b, cmp_factorial_scalar))
}

/// The componentwise numeric order.
pub fn cmp_product(a: &CharVector, b: &CharVector) -> Result<Comparison, OrderError> {
    check_lengths(a, b)?;
    Ok(componentwise(a, b, cmp_standard))
}

/// Indices of the nonzero entries.
pub fn support_partition(v: &CharVector) -> Vec<usize> {
    v.0.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, _)| i)
        .collect()
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `r` with every factor `p` removed.
pub fn prime_to_part(mut r: u64, p: u64) -> u64 {
    while r.is_multiple_of(p) {
        r /= p;
    }
    r
}

fn check_prime(prime_to: Option<u64>) -> Result<(), OrderError> {
    match prime_to {
        Some(p) if !is_prime(p) => Err(OrderError::NotPrime(p)),
        _ => Ok(()),
    }
}

fn check_levels(levels: &[u64], support: &[usize]) -> Result<(), OrderError> {
    if let Some(i) = levels.iter().position(|&r| r == 0) {
        return Err(OrderError::ZeroLevel { index: i });
    }
    if let Some(&j) = support.iter().find(|&&j| j >= levels.len()) {
        return Err(OrderError::IndexOutOfRange {
            index: j,
            len: levels.len(),
        });
    }
    Ok(())
}

/// Admissible entries of one coordinate: `Z_r` (or `Z_r \ 0`), filtered to
/// denominators prime to `p`, in increasing numeric order.
fn coordinate_values(r: u64, star: bool, prime_to: Option<u64>) -> Vec<Character> {
    (0..r)
        .rev()
        .map(|k| Character::of(k, r))
        .filter(|c| !(star && c.is_zero()))
        .filter(|c| prime_to.is_none_or(|p| c.denominator() % p != 0))
        .collect()
}

/// Number of vectors [`enumerate_characters`] would return.
pub fn count_characters(
    levels: &[u64],
    support: &[usize],
    star: bool,
    prime_to: Option<u64>,
) -> Result<BigUint, OrderError> {
    check_levels(levels, support)?;
    check_prime(prime_to)?;
    let mut seen = std::collections::BTreeSet::new();
    let mut total = BigUint::from(1u32);
    for &j in support {
        if !seen.insert(j) {
            continue;
        }
        let r = prime_to.map_or(levels[j], |p| prime_to_part(levels[j], p));
        total *= BigUint::from(if star { r - 1 } else { r });
    }
    Ok(total)
}

/// All vectors with entries in `Z_{r_j}` on `support` (nonzero if `star`)
/// and zero elsewhere, sorted by [`factorial_sort`].
pub fn enumerate_characters(
    levels: &[u64],
    support: &[usize],
    star: bool,
    prime_to: Option<u64>,
) -> Result<Vec<CharVector>, OrderError> {
    let count = count_characters(levels, support, star, prime_to)?;
    if count > BigUint::from(MAX_ENUMERATION) {
        return Err(OrderError::TooLarge {
            count: count.to_string(),
        });
    }
    let mut support: Vec<usize> = support.to_vec();
    support.sort_unstable();
    support.dedup();
    let choices: Vec<Vec<Character>> = support
        .iter()
        .map(|&j| coordinate_values(levels[j], star, prime_to))
        .collect();
    let mut out = Vec::new();
    if choices.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    let mut idx = vec![0usize; support.len()];
    loop {
        let mut v = CharVector::zero(levels.len());
        for (k, &j) in support.iter().enumerate() {
            v.0[j] = choices[k][idx[k]];
        }
        out.push(v);
        let mut k = support.len();
        loop {
            if k == 0 {
                factorial_sort(&mut out);
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Sort keys for a deterministic linear extension of `<=!` on vectors:
/// descending vector level, then lexicographic in each entry's rank in `Z_{N!}`.
pub struct FactorialKeys {
    level: u64,
}

impl FactorialKeys {
    pub fn for_vectors<'a>(vs: impl IntoIterator<Item = &'a CharVector>) -> Self {
        let level = vs.into_iter().map(CharVector::level).max().unwrap_or(1);
        FactorialKeys { level }
    }

    pub fn for_level(level: u64) -> Self {
        FactorialKeys { level }
    }

    pub fn scalar(&self, c: &Character) -> BigUint {
        match c.factorial_rank_u128(self.level) {
            Some(r) => BigUint::from(r),
            None => c.factorial_rank(self.level).expect("level covers entry"),
        }
    }

    pub fn vector(&self, v: &CharVector) -> (Reverse<u64>, Vec<BigUint>) {
        (
            Reverse(v.level()),
            v.0.iter().map(|c| self.scalar(c)).collect(),
        )
    }
}

/// Sort by the linear extension of `<=!` described on [`FactorialKeys`].
pub fn factorial_sort(vs: &mut [CharVector]) {
    let keys = FactorialKeys::for_vectors(vs.iter());
    if keys.level <= 33 {
        let fast = |v: &CharVector| -> (Reverse<u64>, Vec<u128>) {
            (
                Reverse(v.level()),
                v.0.iter()
                    .map(|c| c.factorial_rank_u128(keys.level).expect("in level"))
                    .collect(),
            )
        };
        vs.sort_by_cached_key(fast);
    } else {
        vs.sort_by_cached_key(|v| keys.vector(v));
    }
}

/// Sort lexicographically by numeric value; a linear extension of the product order.
pub fn standard_sort(vs: &mut [CharVector]) {
    vs.sort_by(|a, b| {
        a.0.iter()
            .zip(&b.0)
            .map(|(x, y)| cmp_standard(x, y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    });
}

/// Minimal factorial level containing `Z_r`.
pub fn level_of_order(r: u64) -> u64 {
    level_of(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(entries: &[(u64, u64)]) -> CharVector {
        CharVector(entries.iter().map(|&(p, q)| Character::of(p, q)).collect())
    }

    #[test]
    fn vector_comparisons() {
        let a = cv(&[(5, 6), (0, 1)]);
        let b = cv(&[(1, 2), (1, 2)]);
        assert_eq!(cmp_factorial_vector(&a, &b).unwrap(), Comparison::Less);
        let c = cv(&[(1, 2), (0, 1)]);
        let d = cv(&[(0, 1), (1, 2)]);
        assert_eq!(
            cmp_factorial_vector(&c, &d).unwrap(),
            Comparison::Incomparable
        );
        assert_eq!(cmp_factorial_vector(&c, &c).unwrap(), Comparison::Equal);
        assert_eq!(
            cmp_product(&cv(&[(1, 2), (2, 3)]), &cv(&[(1, 2), (1, 3)])).unwrap(),
            Comparison::Less
        );
        assert_eq!(cmp_product(&c, &d).unwrap(), Comparison::Incomparable);
        assert_eq!(cmp_product(&c, &c).unwrap(), Comparison::Equal);
        assert!(matches!(
            cmp_product(&c, &cv(&[(0, 1)])),
            Err(OrderError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn enumeration_examples() {
        let v = enumerate_characters(&[2, 3], &[1], true, None).unwrap();
        let mut got: Vec<CharVector> = v.clone();
        got.sort();
        let mut want = vec![cv(&[(0, 1), (1, 3)]), cv(&[(0, 1), (2, 3)])];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(
            enumerate_characters(&[2, 3], &[], true, None).unwrap(),
            vec![CharVector::zero(2)]
        );
        assert!(enumerate_characters(&[4], &[0], true, Some(2))
            .unwrap()
            .is_empty());
        assert!(matches!(
            enumerate_characters(&[4], &[0], true, Some(4)),
            Err(OrderError::NotPrime(4))
        ));
    }

    #[test]
    fn support_examples() {
        assert_eq!(
            support_partition(&cv(&[(0, 1), (1, 3), (1, 2)])),
            vec![1, 2]
        );
        assert!(support_partition(&CharVector::zero(3)).is_empty());
        let total: usize = [vec![], vec![0], vec![1], vec![0, 1]]
            .iter()
            .map(|j| enumerate_characters(&[2, 3], j, true, None).unwrap().len())
            .sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn counts_match_enumeration() {
        for r in 1..10 {
            for p in [None, Some(2), Some(3)] {
                let n = enumerate_characters(&[r, 6], &[0, 1], true, p)
                    .unwrap()
                    .len();
                assert_eq!(
                    count_characters(&[r, 6], &[0, 1], true, p).unwrap(),
                    BigUint::from(n)
                );
            }
        }
    }

    #[test]
    fn sorted_output_extends_order() {
        let v = enumerate_characters(&[6, 6], &[0, 1], false, None).unwrap();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                assert_ne!(
                    cmp_factorial_vector(&v[i], &v[j]).unwrap(),
                    Comparison::Greater
                );
            }
        }
        assert_eq!(*v.last().unwrap(), CharVector::zero(2));
    }
}
