//! Characters: rationals in `(-1, 0]` stored as `-p/q`, with the standard
//! numeric order and the factorial order.

use super::OrderError;
use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Largest factorial level a character may have.
pub const MAX_LEVEL: u64 = 100_000;

/// Largest level at which factorial digits fit in `u128`.
const FAST_LEVEL: u64 = 33;

/// The rational `-p/q` with `0 <= p < q`, reduced; zero is `(0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    p: u64,
    q: u64,
}

/// `|x| = p / n!` with `n` minimal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorialForm {
    #[serde(with = "crate::json::nat")]
    pub p: BigUint,
    pub n: u64,
}

impl Character {
    pub const ZERO: Character = Character { p: 0, q: 1 };

    /// The character `-p/q`; requires `0 <= p < q`.
    pub fn new(p: u64, q: u64) -> Result<Self, OrderError> {
        if q == 0 || p >= q {
            return Err(OrderError::InvalidCharacter { p, q });
        }
        let g = p.gcd(&q);
        let c = Character { p: p / g, q: q / g };
        if level_of(c.q) > MAX_LEVEL {
            return Err(OrderError::LevelTooLarge { q });
        }
        Ok(c)
    }

    /// `-k/r` for `0 <= k < r`; panics on invalid input.
    pub fn of(k: u64, r: u64) -> Self {
        Self::new(k, r).expect("valid character")
    }

    /// The representative in `(-1, 0]` of a rational modulo `Z`.
    pub fn from_rational(x: &BigRational) -> Result<Self, OrderError> {
        let frac = x - x.floor();
        // frac in [0,1); the representative in (-1,0] is frac - 1 unless frac = 0.
        if frac.is_zero() {
            return Ok(Self::ZERO);
        }
        let q = frac
            .denom()
            .to_u64()
            .ok_or(OrderError::DenominatorOverflow)?;
        let p = q - frac
            .numer()
            .to_u64()
            .ok_or(OrderError::DenominatorOverflow)?;
        Self::new(p, q)
    }

    pub fn numerator(&self) -> u64 {
        self.p
    }

    pub fn denominator(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0
    }

    pub fn value(&self) -> BigRational {
        BigRational::new(-num_bigint::BigInt::from(self.p), self.q.into())
    }

    /// Minimal `n` with `q | n!`.
    pub fn level(&self) -> u64 {
        level_of(self.q)
    }

    pub fn normal_factorial_form(&self) -> FactorialForm {
        let n = self.level();
        let p = BigUint::from(self.p) * (factorial_big(n) / BigUint::from(self.q));
        FactorialForm { p, n }
    }

    /// Factorial digits `d_N, d_{N-1}, .., d_2` of this character inside `Z_{N!}`.
    ///
    /// With `x = -A/N!` they are `d_N = A mod N`, then `A := A div N`, and so on.
    /// `None` if the character is not in `Z_{N!}`.
    pub fn factorial_digits(&self, level: u64) -> Option<Vec<u64>> {
        if self.level() > level {
            return None;
        }
        let mut out = Vec::with_capacity(level.saturating_sub(1) as usize);
        if level <= FAST_LEVEL {
            let mut a = self.p as u128 * (factorial_u128(level) / self.q as u128);
            for n in (2..=level).rev() {
                out.push((a % n as u128) as u64);
                a /= n as u128;
            }
        } else {
            let mut a = BigUint::from(self.p) * (factorial_big(level) / BigUint::from(self.q));
            for n in (2..=level).rev() {
                let (quot, rem) = a.div_rem(&BigUint::from(n));
                out.push(rem.to_u64().expect("digit below n"));
                a = quot;
            }
        }
        Some(out)
    }

    /// Position of this character in `(Z_{N!}, <=!)`, counting from 0 at the minimum.
    pub fn factorial_rank(&self, level: u64) -> Option<BigUint> {
        let digits = self.factorial_digits(level)?;
        let mut rank = BigUint::zero();
        // d_N is the most significant place; a larger digit is a smaller element.
        for (i, d) in digits.iter().enumerate() {
            let n = level - i as u64;
            rank = rank * BigUint::from(n) + BigUint::from(n - 1 - d);
        }
        Some(rank)
    }

    /// As [`Self::factorial_rank`], in `u128` for `N <= 33`.
    pub fn factorial_rank_u128(&self, level: u64) -> Option<u128> {
        if level > FAST_LEVEL {
            return None;
        }
        let digits = self.factorial_digits(level)?;
        let mut rank = 0u128;
        for (i, d) in digits.iter().enumerate() {
            let n = (level - i as u64) as u128;
            rank = rank * n + (n - 1 - *d as u128);
        }
        Some(rank)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p == 0 {
            write!(f, "0")
        } else {
            write!(f, "-{}/{}", self.p, self.q)
        }
    }
}

impl Serialize for Character {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.p, self.q].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Character {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [p, q] = <[u64; 2]>::deserialize(d)?;
        Character::new(p, q).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn level_of(q: u64) -> u64 {
    let mut rem = q;
    let mut n = 1u64;
    while rem > 1 {
        n += 1;
        if n > MAX_LEVEL {
            return n;
        }
        rem /= rem.gcd(&n);
    }
    n
}

pub(crate) fn factorial_u128(n: u64) -> u128 {
    (1..=n as u128).product()
}

pub fn factorial_big(n: u64) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

/// `n!` as `u64`, if it fits.
pub fn factorial_u64(n: u64) -> Option<u64> {
    (1..=n).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

/// Numeric order on `Q ∩ (-1, 0]`.
pub fn cmp_standard(x: &Character, y: &Character) -> Ordering {
    // -a/b < -c/d  iff  a*d > c*b
    let lhs = x.p as u128 * y.q as u128;
    let rhs = y.p as u128 * x.q as u128;
    rhs.cmp(&lhs)
}

/// The factorial order `<=!`: a higher factorial level comes first, and
/// within `Z_{n!}` the fiber recursion is read off the factorial digits.
pub fn cmp_factorial_scalar(x: &Character, y: &Character) -> Ordering {
    if x == y {
        return Ordering::Equal;
    }
    let (lx, ly) = (x.level(), y.level());
    if lx != ly {
        return ly.cmp(&lx);
    }
    let dx = x.factorial_digits(lx).expect("own level");
    let dy = y.factorial_digits(lx).expect("own level");
    dy.cmp(&dx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sixths() -> Vec<Character> {
        (0..6).map(|k| Character::of(k, 6)).collect()
    }

    #[test]
    fn construction_reduces() {
        assert_eq!(Character::of(3, 6), Character::of(1, 2));
        assert_eq!(Character::of(0, 7), Character::ZERO);
        assert!(Character::new(2, 2).is_err());
        assert!(Character::new(0, 0).is_err());
        assert_eq!(Character::of(2, 6).to_string(), "-1/3");
    }

    #[test]
    fn from_rational_wraps() {
        let c = Character::from_rational(&BigRational::new(1.into(), 3.into())).unwrap();
        assert_eq!(c, Character::of(2, 3));
        let c = Character::from_rational(&BigRational::new((-7).into(), 4.into())).unwrap();
        assert_eq!(c, Character::of(3, 4));
        let c = Character::from_rational(&BigRational::new(2.into(), 1.into())).unwrap();
        assert_eq!(c, Character::ZERO);
    }

    #[test]
    fn normal_forms() {
        let f = Character::of(1, 2).normal_factorial_form();
        assert_eq!((f.p, f.n), (1u32.into(), 2));
        let f = Character::of(1, 3).normal_factorial_form();
        assert_eq!((f.p, f.n), (2u32.into(), 3));
        let f = Character::ZERO.normal_factorial_form();
        assert_eq!((f.p, f.n), (0u32.into(), 1));
        assert_eq!(Character::of(1, 24).level(), 4);
        assert_eq!(Character::of(1, 5).level(), 5);
        assert_eq!(Character::of(1, 8).level(), 4);
        assert_eq!(Character::of(1, 9).level(), 6);
    }

    #[test]
    fn standard_examples() {
        assert_eq!(
            cmp_standard(&Character::of(5, 6), &Character::of(1, 6)),
            Ordering::Less
        );
        assert_eq!(
            cmp_standard(&Character::of(1, 2), &Character::of(3, 6)),
            Ordering::Equal
        );
        assert_eq!(
            cmp_standard(&Character::ZERO, &Character::of(1, 24)),
            Ordering::Greater
        );
    }

    #[test]
    fn factorial_chain_on_sixths() {
        let mut v = sixths();
        v.sort_by(cmp_factorial_scalar);
        let expected: Vec<Character> = [5, 2, 4, 1, 3, 0]
            .iter()
            .map(|&k| Character::of(k, 6))
            .collect();
        assert_eq!(v, expected);
        let ranks: Vec<u128> = expected
            .iter()
            .map(|c| c.factorial_rank_u128(3).unwrap())
            .collect();
        assert_eq!(ranks, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn factorial_mixed_levels() {
        let chain = [
            Character::of(1, 24),
            Character::of(2, 6),
            Character::of(4, 6),
            Character::of(1, 2),
        ];
        for w in chain.windows(2) {
            assert_eq!(
                cmp_factorial_scalar(&w[0], &w[1]),
                Ordering::Less,
                "{} vs {}",
                w[0],
                w[1]
            );
        }
    }

    #[test]
    fn big_and_fast_ranks_agree() {
        for k in 0..24 {
            let c = Character::of(k, 24);
            for level in 4..8 {
                let fast = c.factorial_rank_u128(level).unwrap();
                assert_eq!(c.factorial_rank(level).unwrap(), BigUint::from(fast));
            }
        }
        let c = Character::of(1, 35);
        let digits = c.factorial_digits(40).unwrap();
        assert_eq!(digits.len(), 39);
        assert!(c.factorial_rank_u128(40).is_none());
    }

    #[test]
    fn json_pairs() {
        let c: Character = serde_json::from_str("[2,6]").unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), "[1,3]");
        assert!(serde_json::from_str::<Character>("[3,2]").is_err());
    }
}
