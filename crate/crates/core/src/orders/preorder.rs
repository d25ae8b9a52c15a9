//! Finite preorders as explicit relation matrices.

use super::OrderError;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// A reflexive transitive relation on labelled elements; `le[i][j]` means `i <= j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preorder {
    elements: Vec<String>,
    le: Vec<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPreorder {
    elements: Vec<String>,
    pairs: Vec<(usize, usize)>,
}

impl Serialize for Preorder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawPreorder {
            elements: self.elements.clone(),
            pairs: self.pairs(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Preorder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawPreorder::deserialize(d)?;
        Preorder::from_pairs(raw.elements, &raw.pairs).map_err(serde::de::Error::custom)
    }
}

impl Preorder {
    /// Build from a relation, checking reflexivity and transitivity.
    pub fn from_relation(
        elements: Vec<String>,
        le: impl Fn(usize, usize) -> bool,
    ) -> Result<Self, OrderError> {
        let n = elements.len();
        let matrix = (0..n).map(|i| (0..n).map(|j| le(i, j)).collect()).collect();
        let p = Preorder {
            elements,
            le: matrix,
        };
        p.validate()?;
        Ok(p)
    }

    /// Build from the full list of related pairs `(i, j)` meaning `i <= j`.
    pub fn from_pairs(elements: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, OrderError> {
        let n = elements.len();
        let mut le = vec![vec![false; n]; n];
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(OrderError::IndexOutOfRange {
                    index: i.max(j),
                    len: n,
                });
            }
            le[i][j] = true;
        }
        let p = Preorder { elements, le };
        p.validate()?;
        Ok(p)
    }

    /// The reflexive transitive closure of the given pairs.
    pub fn generated_by(
        elements: Vec<String>,
        pairs: &[(usize, usize)],
    ) -> Result<Self, OrderError> {
        let n = elements.len();
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(OrderError::IndexOutOfRange {
                    index: i.max(j),
                    len: n,
                });
            }
            le[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i][k] {
                    for j in 0..n {
                        if le[k][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
        }
        Ok(Preorder { elements, le })
    }

    fn validate(&self) -> Result<(), OrderError> {
        let n = self.len();
        for i in 0..n {
            if !self.le[i][i] {
                return Err(OrderError::NotReflexive(self.elements[i].clone()));
            }
        }
        for i in 0..n {
            for k in 0..n {
                if !self.le[i][k] {
                    continue;
                }
                for j in 0..n {
                    if self.le[k][j] && !self.le[i][j] {
                        return Err(OrderError::NotTransitive(
                            self.elements[i].clone(),
                            self.elements[k].clone(),
                            self.elements[j].clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.le[i][j]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.le[i][j])
            .collect()
    }

    pub fn relation_count(&self) -> usize {
        self.le
            .iter()
            .map(|r| r.iter().filter(|&&b| b).count())
            .sum()
    }
}

/// The join `P * Q`: disjoint union with every element of `P` below every
/// element of `Q`. Clashing labels are suffixed with `'` until unique.
pub fn join(p: &Preorder, q: &Preorder) -> Preorder {
    let mut taken: BTreeSet<String> = p.elements.iter().cloned().collect();
    let mut elements = p.elements.clone();
    for label in &q.elements {
        let mut l = label.clone();
        while taken.contains(&l) {
            l.push('\'');
        }
        taken.insert(l.clone());
        elements.push(l);
    }
    let np = p.len();
    let n = elements.len();
    let le = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (i < np, j < np) {
                    (true, true) => p.le[i][j],
                    (false, false) => q.le[i - np][j - np],
                    (true, false) => true,
                    (false, true) => false,
                })
                .collect()
        })
        .collect();
    Preorder { elements, le }
}

/// Label of a subset of components, e.g. `{1,2}`.
pub fn subset_label(components: &[String], subset: &[usize]) -> String {
    let names: Vec<&str> = subset.iter().map(|&i| components[i].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

/// All subsets of `0..n`, ordered by size and then lexicographically.
pub fn subsets_by_size(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u64..1 << n)
        .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
        .collect();
    out.sort_by(|a: &Vec<usize>, b: &Vec<usize>| (a.len(), a).cmp(&(b.len(), b)));
    out
}

/// The preorder on strata: `J <= J'` iff `|J| >= |J'|`.
pub fn strata_preorder(components: &[String], ambient_dim: usize) -> Preorder {
    if ambient_dim < components.len() {
        log::warn!(
            "ambient dimension {} is below the number of components {}; codimensions may exceed it",
            ambient_dim,
            components.len()
        );
    }
    let subsets = subsets_by_size(components.len());
    let elements = subsets
        .iter()
        .map(|s| subset_label(components, s))
        .collect();
    let le = subsets
        .iter()
        .map(|a| subsets.iter().map(|b| a.len() >= b.len()).collect())
        .collect();
    Preorder { elements, le }
}
