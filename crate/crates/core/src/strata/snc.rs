//! Simple normal crossings incidence data: which intersections `D_J` are nonempty.

use super::StrataError;
use crate::orders::subsets_by_size;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Optional per-stratum payload.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    /// Number of connected pieces of `D_J`, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pieces: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SncComplex {
    components: Vec<String>,
    /// Nonempty strata as sorted index sets; always contains `[]` and is downward closed.
    nonempty: BTreeSet<Vec<usize>>,
    meta: BTreeMap<Vec<usize>, StratumMeta>,
    dimension: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSnc {
    components: Vec<String>,
    #[serde(default)]
    strata: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    empty: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    meta: Vec<RawMeta>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeta {
    stratum: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pieces: Option<u64>,
}

impl Serialize for SncComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let names = |j: &Vec<usize>| -> Vec<String> {
            j.iter().map(|&i| self.components[i].clone()).collect()
        };
        let strata = self
            .strata()
            .into_iter()
            .filter(|j| j.len() >= 2)
            .map(|j| names(&j))
            .collect();
        let empty = self.minimal_empty().iter().map(names).collect();
        let meta = self
            .meta
            .iter()
            .map(|(j, m)| RawMeta {
                stratum: names(j),
                name: m.name.clone(),
                dimension: m.dimension,
                pieces: m.pieces,
            })
            .collect();
        RawSnc {
            components: self.components.clone(),
            strata,
            empty,
            dimension: self.dimension,
            meta,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SncComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawSnc::deserialize(d)?;
        let mut c = SncComplex::from_divisors(raw.components, &raw.strata, &raw.empty)
            .map_err(serde::de::Error::custom)?;
        c.dimension = raw.dimension;
        for m in raw.meta {
            let j = c.indices(&m.stratum).map_err(serde::de::Error::custom)?;
            c.meta.insert(
                j,
                StratumMeta {
                    name: m.name,
                    dimension: m.dimension,
                    pieces: m.pieces,
                },
            );
        }
        Ok(c)
    }
}

impl SncComplex {
    /// Build from the listed nonempty strata and explicitly empty ones.
    ///
    /// Every component and every subset of a listed stratum is nonempty; a
    /// listed stratum whose subsets were missing is completed with a warning.
    pub fn from_divisors(
        components: Vec<String>,
        nonempty: &[Vec<String>],
        empty: &[Vec<String>],
    ) -> Result<Self, StrataError> {
        let mut seen = BTreeSet::new();
        for c in &components {
            if !seen.insert(c) {
                return Err(StrataError::DuplicateComponent(c.clone()));
            }
        }
        let mut c = SncComplex {
            components,
            nonempty: BTreeSet::new(),
            meta: BTreeMap::new(),
            dimension: None,
        };
        let declared: BTreeSet<Vec<usize>> = nonempty
            .iter()
            .map(|s| c.indices(s))
            .collect::<Result<_, _>>()?;
        let empties: BTreeSet<Vec<usize>> = empty
            .iter()
            .map(|s| c.indices(s))
            .collect::<Result<_, _>>()?;

        for e in &empties {
            if e.is_empty() {
                return Err(StrataError::InconsistentIncidence(
                    "the empty intersection is the whole space".into(),
                ));
            }
            if let Some(d) = declared.iter().find(|d| is_subset(e, d)) {
                return Err(StrataError::InconsistentIncidence(format!(
                    "{} is declared empty but {} is nonempty",
                    c.display(e),
                    c.display(d)
                )));
            }
        }
        let mut closure = BTreeSet::new();
        closure.insert(Vec::new());
        for i in 0..c.components.len() {
            if !empties.contains(&vec![i]) {
                closure.insert(vec![i]);
            }
        }
        let mut completed = Vec::new();
        for d in &declared {
            for sub in subsets(d) {
                if closure.insert(sub.clone()) && sub.len() >= 2 && !declared.contains(&sub) {
                    completed.push(sub);
                }
            }
        }
        for sub in completed {
            log::warn!(
                "stratum {} added to make the incidence data downward closed",
                c.display(&sub)
            );
        }
        c.nonempty = closure;
        Ok(c)
    }

    /// All `J` nonempty up to the given codimension bound.
    pub fn all_nonempty(components: Vec<String>, max_codim: usize) -> Result<Self, StrataError> {
        let n = components.len();
        let strata: Vec<Vec<String>> = subsets_by_size(n)
            .into_iter()
            .filter(|j| j.len() <= max_codim)
            .map(|j| j.iter().map(|&i| components[i].clone()).collect())
            .collect();
        Self::from_divisors(components, &strata, &[])
    }

    pub fn with_dimension(mut self, dim: usize) -> Self {
        self.dimension = Some(dim);
        self
    }

    pub fn set_meta(&mut self, j: Vec<usize>, meta: StratumMeta) {
        self.meta.insert(j, meta);
    }

    pub fn components(&self) -> &[String] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.dimension
    }

    pub fn meta(&self, j: &[usize]) -> Option<&StratumMeta> {
        self.meta.get(j)
    }

    pub fn is_nonempty(&self, j: &[usize]) -> bool {
        let mut key = j.to_vec();
        key.sort_unstable();
        key.dedup();
        self.nonempty.contains(&key)
    }

    /// Nonempty strata ordered by codimension, then lexicographically.
    pub fn strata(&self) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = self.nonempty.iter().cloned().collect();
        v.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        v
    }

    /// Minimal empty strata.
    pub fn minimal_empty(&self) -> Vec<Vec<usize>> {
        if self.components.len() > 20 {
            return Vec::new();
        }
        subsets_by_size(self.components.len())
            .into_iter()
            .filter(|j| !self.nonempty.contains(j))
            .filter(|j| j.iter().all(|&x| self.nonempty.contains(&without(j, x))))
            .collect()
    }

    /// Number of connected pieces of `D_J` (1 unless recorded otherwise, 0 if empty).
    pub fn pieces(&self, j: &[usize]) -> u64 {
        if !self.is_nonempty(j) {
            return 0;
        }
        self.meta.get(j).and_then(|m| m.pieces).unwrap_or(1)
    }

    pub fn indices(&self, names: &[String]) -> Result<Vec<usize>, StrataError> {
        let mut out: Vec<usize> = names
            .iter()
            .map(|n| {
                self.components
                    .iter()
                    .position(|c| c == n)
                    .ok_or_else(|| StrataError::UnknownComponent(n.clone()))
            })
            .collect::<Result<_, _>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// `X` for the empty stratum, the recorded name if any, else `D_{a,b}`.
    pub fn stratum_label(&self, j: &[usize]) -> String {
        if j.is_empty() {
            return "X".into();
        }
        if let Some(name) = self.meta.get(j).and_then(|m| m.name.clone()) {
            return name;
        }
        self.display(j)
    }

    /// `D_{a,b}` regardless of recorded names.
    pub fn display(&self, j: &[usize]) -> String {
        if j.is_empty() {
            return "X".into();
        }
        let names: Vec<&str> = j.iter().map(|&i| self.components[i].as_str()).collect();
        format!("D_{{{}}}", names.join(","))
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

fn without(j: &[usize], x: usize) -> Vec<usize> {
    j.iter().copied().filter(|&y| y != x).collect()
}

fn subsets(j: &[usize]) -> Vec<Vec<usize>> {
    (0u64..1 << j.len())
        .map(|mask| {
            (0..j.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| j[i])
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn projective_plane_boundary() {
        let c = SncComplex::from_divisors(
            s(&["1", "2", "3"]),
            &[s(&["1", "2"]), s(&["1", "3"]), s(&["2", "3"])],
            &[],
        )
        .unwrap();
        assert_eq!(c.strata().len(), 7);
        assert!(!c.is_nonempty(&[0, 1, 2]));
        assert_eq!(c.minimal_empty(), vec![vec![0, 1, 2]]);
        assert_eq!(c.stratum_label(&[0, 2]), "D_{1,3}");
    }

    #[test]
    fn single_component() {
        let c = SncComplex::from_divisors(s(&["1"]), &[], &[]).unwrap();
        assert_eq!(c.strata(), vec![vec![], vec![0]]);
    }

    #[test]
    fn monotonicity_violation() {
        let err =
            SncComplex::from_divisors(s(&["1", "2"]), &[s(&["1", "2"])], &[s(&["1"])]).unwrap_err();
        assert!(matches!(err, StrataError::InconsistentIncidence(_)));
    }

    #[test]
    fn completes_downward() {
        let c =
            SncComplex::from_divisors(s(&["a", "b", "c"]), &[s(&["a", "b", "c"])], &[]).unwrap();
        assert_eq!(c.strata().len(), 8);
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"components":["1","2","3"],"strata":[["1","2"],["1","3"],["2","3"]],"dimension":2,
            "meta":[{"stratum":["1","2"],"name":"p12","pieces":1}]}"#;
        let c: SncComplex = serde_json::from_str(text).unwrap();
        assert_eq!(c.stratum_label(&[0, 1]), "p12");
        let back: SncComplex = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<SncComplex>(r#"{"components":["1"],"bogus":1}"#).is_err());
    }
}
