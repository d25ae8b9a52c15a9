//! Additive value systems: integers, integer vectors, integer polynomials.

use super::InvariantError;
use crate::json;
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueSystem {
    Int,
    IntVector,
    Poly,
}

/// Which invariant the values stand for.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InvariantKind {
    #[default]
    K,
    /// Complexified G-theory.
    G,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Int(BigInt),
    IntVector(Vec<BigInt>),
    /// Coefficients, constant term first, without trailing zeros.
    Poly(Vec<BigInt>),
}

impl Value {
    pub fn system(&self) -> ValueSystem {
        match self {
            Value::Int(_) => ValueSystem::Int,
            Value::IntVector(_) => ValueSystem::IntVector,
            Value::Poly(_) => ValueSystem::Poly,
        }
    }

    pub fn int(x: i64) -> Self {
        Value::Int(x.into())
    }

    pub fn vector(xs: &[i64]) -> Self {
        Value::IntVector(xs.iter().map(|&x| x.into()).collect())
    }

    pub fn poly(xs: &[i64]) -> Self {
        Value::Poly(trim(xs.iter().map(|&x| x.into()).collect()))
    }

    /// The zero of the same shape.
    pub fn zero_like(&self) -> Self {
        match self {
            Value::Int(_) => Value::Int(BigInt::zero()),
            Value::IntVector(v) => Value::IntVector(vec![BigInt::zero(); v.len()]),
            Value::Poly(_) => Value::Poly(Vec::new()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Int(x) => x.is_zero(),
            Value::IntVector(v) | Value::Poly(v) => v.iter().all(Zero::is_zero),
        }
    }

    pub fn add(&self, other: &Value) -> Result<Value, InvariantError> {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => Ok(Value::Int(a + b)),
            (Value::IntVector(a), Value::IntVector(b)) if a.len() == b.len() => Ok(
                Value::IntVector(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            ),
            (Value::Poly(a), Value::Poly(b)) => {
                let n = a.len().max(b.len());
                let get = |v: &Vec<BigInt>, i: usize| v.get(i).cloned().unwrap_or_default();
                Ok(Value::Poly(trim(
                    (0..n).map(|i| get(a, i) + get(b, i)).collect(),
                )))
            }
            _ => Err(InvariantError::ValueMismatch(format!(
                "cannot add {self} and {other}"
            ))),
        }
    }

    pub fn scale(&self, k: &BigUint) -> Value {
        let k = BigInt::from(k.clone());
        match self {
            Value::Int(a) => Value::Int(a * &k),
            Value::IntVector(v) => Value::IntVector(v.iter().map(|x| x * &k).collect()),
            Value::Poly(v) => Value::Poly(trim(v.iter().map(|x| x * &k).collect())),
        }
    }

    fn parse(system: ValueSystem, raw: serde_json::Value) -> Result<Value, String> {
        #[derive(Deserialize)]
        #[serde(transparent)]
        struct I(#[serde(with = "json::int")] BigInt);
        #[derive(Deserialize)]
        #[serde(transparent)]
        struct V(#[serde(with = "json::int_vec")] Vec<BigInt>);
        match system {
            ValueSystem::Int => serde_json::from_value::<I>(raw).map(|x| Value::Int(x.0)),
            ValueSystem::IntVector => {
                serde_json::from_value::<V>(raw).map(|x| Value::IntVector(x.0))
            }
            ValueSystem::Poly => serde_json::from_value::<V>(raw).map(|x| Value::Poly(trim(x.0))),
        }
        .map_err(|e| e.to_string())
    }
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Int(x) => json::write_int(x, s),
            Value::IntVector(v) | Value::Poly(v) => json::int_vec::serialize(v, s),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(x) => write!(f, "{x}"),
            Value::IntVector(v) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(", "))
            }
            Value::Poly(v) => {
                let mut terms = Vec::new();
                for (i, c) in v.iter().enumerate().rev() {
                    if c.is_zero() {
                        continue;
                    }
                    let sign = if c.is_negative() { "-" } else { "+" };
                    let a = c.abs();
                    let coeff = if a == BigInt::from(1) && i > 0 {
                        String::new()
                    } else {
                        a.to_string()
                    };
                    let mono = match i {
                        0 => String::new(),
                        1 => "t".into(),
                        _ => format!("t^{i}"),
                    };
                    terms.push((sign, format!("{coeff}{mono}")));
                }
                if terms.is_empty() {
                    return write!(f, "0");
                }
                let mut out = String::new();
                for (k, (sign, t)) in terms.iter().enumerate() {
                    match (k, *sign) {
                        (0, "-") => out.push('-'),
                        (0, _) => {}
                        (_, s) => out.push_str(&format!(" {s} ")),
                    }
                    out.push_str(t);
                }
                write!(f, "{out}")
            }
        }
    }
}

/// Values of an additive invariant on labelled strata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub value_system: ValueSystem,
    pub invariant: InvariantKind,
    pub values: BTreeMap<String, Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAssignment {
    value_system: ValueSystem,
    #[serde(default)]
    invariant: InvariantKind,
    values: BTreeMap<String, serde_json::Value>,
}

impl<'de> Deserialize<'de> for Assignment {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = RawAssignment::deserialize(d)?;
        let mut values = BTreeMap::new();
        for (k, v) in raw.values {
            let parsed = Value::parse(raw.value_system, v)
                .map_err(|e| D::Error::custom(format!("value of {k:?}: {e}")))?;
            values.insert(k, parsed);
        }
        Assignment::new(raw.value_system, raw.invariant, values).map_err(D::Error::custom)
    }
}

impl Serialize for Assignment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::Error;
        let values = self
            .values
            .iter()
            .map(|(k, v)| serde_json::to_value(v).map(|v| (k.clone(), v)))
            .collect::<Result<_, _>>()
            .map_err(S::Error::custom)?;
        RawAssignment {
            value_system: self.value_system,
            invariant: self.invariant,
            values,
        }
        .serialize(s)
    }
}

impl Assignment {
    pub fn new(
        value_system: ValueSystem,
        invariant: InvariantKind,
        values: BTreeMap<String, Value>,
    ) -> Result<Self, InvariantError> {
        let mut width = None;
        for (k, v) in &values {
            if v.system() != value_system {
                return Err(InvariantError::ValueMismatch(format!(
                    "{k:?} is not a {value_system:?} value"
                )));
            }
            if let Value::IntVector(x) = v {
                match width {
                    None => width = Some(x.len()),
                    Some(w) if w != x.len() => {
                        return Err(InvariantError::ValueMismatch(format!(
                            "{k:?} has length {} but other values have length {w}",
                            x.len()
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(Assignment {
            value_system,
            invariant,
            values,
        })
    }

    /// Integer values from `(label, value)` pairs.
    pub fn ints(pairs: &[(&str, i64)]) -> Self {
        let values = pairs
            .iter()
            .map(|(k, v)| (k.to_string(), Value::int(*v)))
            .collect();
        Assignment {
            value_system: ValueSystem::Int,
            invariant: InvariantKind::K,
            values,
        }
    }

    pub fn with_invariant(mut self, kind: InvariantKind) -> Self {
        self.invariant = kind;
        self
    }

    pub fn get(&self, label: &str) -> Option<&Value> {
        self.values.get(label)
    }

    /// The zero value of this system.
    pub fn zero(&self) -> Value {
        match self.values.values().next() {
            Some(v) => v.zero_like(),
            None => match self.value_system {
                ValueSystem::Int => Value::Int(BigInt::zero()),
                ValueSystem::IntVector => Value::IntVector(Vec::new()),
                ValueSystem::Poly => Value::Poly(Vec::new()),
            },
        }
    }

    /// Labelwise sum, over the labels of `self`.
    pub fn add(&self, other: &Assignment) -> Result<Assignment, InvariantError> {
        let mut values = BTreeMap::new();
        for (k, v) in &self.values {
            let w = other
                .values
                .get(k)
                .ok_or_else(|| InvariantError::MissingValue(k.clone()))?;
            values.insert(k.clone(), v.add(w)?);
        }
        Assignment::new(self.value_system, self.invariant, values)
    }

    pub fn scale(&self, k: &BigUint) -> Assignment {
        let values = self
            .values
            .iter()
            .map(|(l, v)| (l.clone(), v.scale(k)))
            .collect();
        Assignment {
            value_system: self.value_system,
            invariant: self.invariant,
            values,
        }
    }
}
