//! Normal crossings incidence data: crossings carry branch records, so a
//! component may cross itself. Strictification blows up point-like
//! non-simple crossings until every crossing has distinct components.

use super::snc::{SncComplex, StratumMeta};
use super::StrataError;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// One local branch of a component through a crossing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Branch(pub String, pub u32);

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.0, self.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Crossing {
    pub branches: Vec<Branch>,
    pub codim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl Crossing {
    pub fn is_simple(&self) -> bool {
        let labels: BTreeSet<&str> = self.branches.iter().map(|b| b.0.as_str()).collect();
        labels.len() == self.branches.len()
    }

    fn describe(&self) -> String {
        match &self.name {
            Some(n) => n.clone(),
            None => self
                .branches
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("*"),
        }
    }

    /// Label of the normalization of this crossing's points.
    fn point_label(&self) -> String {
        format!("{}^v", self.name.as_deref().unwrap_or("x"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NcComplex {
    components: Vec<String>,
    crossings: Vec<Crossing>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dimension: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNc {
    components: Vec<String>,
    #[serde(default)]
    crossings: Vec<Crossing>,
    #[serde(default)]
    dimension: Option<usize>,
}

impl<'de> Deserialize<'de> for NcComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawNc::deserialize(d)?;
        NcComplex::new(raw.components, raw.crossings, raw.dimension)
            .map_err(serde::de::Error::custom)
    }
}

/// A stratum of an NC complex, for [`normalize_stratum`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NcStratum {
    Base,
    Component(String),
    Crossing(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupStep {
    pub center: String,
    pub codim: usize,
    pub exceptional: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlowupLog(pub Vec<BlowupStep>);

impl BlowupLog {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Labelled pieces of a normalized stratum with multiplicities.
pub type Breakdown = Vec<(String, u64)>;

/// Result of strictification, with enough provenance to relabel strata of
/// the output by normalized strata of the input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Strictification {
    pub complex: SncComplex,
    pub log: BlowupLog,
    pub crossings: Vec<Crossing>,
    /// Normalized breakdown of each nonempty stratum of `complex`, keyed by its label.
    #[serde(skip)]
    breakdown: BTreeMap<Vec<usize>, Breakdown>,
}

impl Strictification {
    pub fn breakdown(&self, j: &[usize]) -> Option<&Breakdown> {
        self.breakdown.get(j)
    }
}

impl NcComplex {
    pub fn new(
        components: Vec<String>,
        crossings: Vec<Crossing>,
        dimension: Option<usize>,
    ) -> Result<Self, StrataError> {
        let known: BTreeSet<&String> = components.iter().collect();
        if known.len() != components.len() {
            let dup = components
                .iter()
                .find(|c| components.iter().filter(|d| d == c).count() > 1)
                .unwrap();
            return Err(StrataError::DuplicateComponent(dup.clone()));
        }
        for (k, x) in crossings.iter().enumerate() {
            if let Some(b) = x.branches.iter().find(|b| !known.contains(&b.0)) {
                return Err(StrataError::UnknownComponent(b.0.clone()));
            }
            let distinct: BTreeSet<&Branch> = x.branches.iter().collect();
            if distinct.len() != x.branches.len() {
                return Err(StrataError::InvalidCrossing {
                    index: k,
                    reason: "repeated branch record".into(),
                });
            }
            if x.codim != x.branches.len() {
                return Err(StrataError::InvalidCrossing {
                    index: k,
                    reason: format!("codimension {} but {} branches", x.codim, x.branches.len()),
                });
            }
            if x.codim < 2 {
                return Err(StrataError::InvalidCrossing {
                    index: k,
                    reason: "a crossing needs two branches".into(),
                });
            }
            if let Some(d) = dimension {
                if x.codim > d {
                    return Err(StrataError::InvalidCrossing {
                        index: k,
                        reason: format!("codimension {} exceeds dimension {}", x.codim, d),
                    });
                }
            }
        }
        Ok(NcComplex {
            components,
            crossings,
            dimension,
        })
    }

    pub fn components(&self) -> &[String] {
        &self.components
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    /// Ambient dimension; defaults to the deepest crossing codimension.
    pub fn dimension(&self) -> usize {
        self.dimension
            .unwrap_or_else(|| self.crossings.iter().map(|c| c.codim).max().unwrap_or(1))
    }

    pub fn is_simple(&self) -> bool {
        self.crossings.iter().all(Crossing::is_simple)
    }

    /// Pairs `(i, j)`: crossing `i` lies in the closure of crossing `j`.
    pub fn closure(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, a) in self.crossings.iter().enumerate() {
            for (j, b) in self.crossings.iter().enumerate() {
                if i != j
                    && b.branches.len() < a.branches.len()
                    && b.branches.iter().all(|x| a.branches.contains(x))
                {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Components with two branches through a common crossing.
    pub fn self_crossing(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for x in &self.crossings {
            for b in &x.branches {
                if x.branches.iter().filter(|c| c.0 == b.0).count() > 1 {
                    out.insert(b.0.clone());
                }
            }
        }
        out
    }

    /// View a simple complex as SNC data, counting pieces per stratum.
    pub fn as_snc(&self) -> Result<SncComplex, StrataError> {
        if !self.is_simple() {
            return Err(StrataError::NotSimple);
        }
        snc_of(&self.components, &self.crossings, Some(self.dimension()))
    }
}

fn snc_of(
    components: &[String],
    crossings: &[Crossing],
    dim: Option<usize>,
) -> Result<SncComplex, StrataError> {
    let mut pieces: BTreeMap<Vec<String>, u64> = BTreeMap::new();
    for x in crossings {
        let mut labels: Vec<String> = x.branches.iter().map(|b| b.0.clone()).collect();
        labels.sort_by_key(|l| components.iter().position(|c| c == l));
        *pieces.entry(labels).or_default() += 1;
    }
    let strata: Vec<Vec<String>> = pieces.keys().cloned().collect();
    let mut snc = SncComplex::from_divisors(components.to_vec(), &strata, &[])?;
    if let Some(d) = dim {
        snc = snc.with_dimension(d);
    }
    for (labels, n) in pieces {
        if n > 1 {
            let j = snc.indices(&labels)?;
            snc.set_meta(
                j,
                StratumMeta {
                    pieces: Some(n),
                    ..Default::default()
                },
            );
        }
    }
    Ok(snc)
}

pub fn is_simple(nc: &NcComplex) -> bool {
    nc.is_simple()
}

/// Blow up non-simple crossings, deepest first, until the complex is simple.
///
/// Only point-like centers are supported: a non-simple crossing whose
/// codimension is below the ambient dimension is rejected.
pub fn strictification(nc: &NcComplex) -> Result<Strictification, StrataError> {
    let dim = nc.dimension();
    let mut crossings = nc.crossings.clone();
    let mut components = nc.components.clone();
    let mut log = BlowupLog::default();
    // exceptional label -> (codim of center, point label)
    let mut exceptional: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut counter = 0usize;
    while let Some(depth) = crossings
        .iter()
        .filter(|x| !x.is_simple())
        .map(|x| x.codim)
        .max()
    {
        if depth < dim {
            let bad = crossings
                .iter()
                .find(|x| !x.is_simple() && x.codim == depth)
                .unwrap();
            return Err(StrataError::UnsupportedConfiguration(format!(
                "non-simple crossing {} has codimension {} in dimension {}",
                bad.describe(),
                depth,
                dim
            )));
        }
        let mut next = Vec::new();
        for x in crossings {
            if x.is_simple() || x.codim != depth {
                next.push(x);
                continue;
            }
            let label = loop {
                counter += 1;
                let l = format!("E{counter}");
                if !components.contains(&l) {
                    break l;
                }
            };
            components.push(label.clone());
            log.0.push(BlowupStep {
                center: x.describe(),
                codim: x.codim,
                exceptional: label.clone(),
            });
            exceptional.insert(label.clone(), (x.codim, x.point_label()));
            // E is a projective space meeting the strict transforms in hyperplanes
            // in general position: one crossing per proper nonempty branch subset.
            let k = x.branches.len();
            for mask in 1u64..(1 << k) - 1 {
                let t: Vec<Branch> = (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| x.branches[i].clone())
                    .collect();
                let mut branches = vec![Branch(label.clone(), 1)];
                branches.extend(t);
                let c = Crossing {
                    codim: branches.len(),
                    branches,
                    name: None,
                };
                if !c.is_simple() {
                    return Err(StrataError::UnsupportedConfiguration(format!(
                        "blowing up {} leaves a positive-dimensional self-crossing",
                        x.describe()
                    )));
                }
                next.push(c);
            }
        }
        crossings = next;
    }

    let complex = snc_of(&components, &crossings, Some(dim))?;
    let selfx = nc.self_crossing();
    let mut breakdown = BTreeMap::new();
    for j in complex.strata() {
        let names: Vec<&String> = j.iter().map(|&i| &complex.components()[i]).collect();
        let exc: Vec<&String> = names
            .iter()
            .copied()
            .filter(|n| exceptional.contains_key(*n))
            .collect();
        let b: Breakdown = if j.is_empty() {
            let mut b = vec![("X".to_string(), 1)];
            for (codim, point) in exceptional.values() {
                push(&mut b, point, *codim as u64 - 1);
            }
            b
        } else if exc.is_empty() && j.len() == 1 {
            let c = names[0];
            let label = if selfx.contains(c) {
                format!("{c}^v")
            } else {
                c.clone()
            };
            vec![(label, 1)]
        } else if exc.is_empty() {
            vec![(complex.display(&j), 1)]
        } else if exc.len() == 1 {
            let (codim, point) = &exceptional[exc[0]];
            // E ∩ (|J|-1 strict transforms) is a projective space of dimension codim - |J|.
            let copies = (*codim + 1 - j.len()) as u64 * complex.pieces(&j);
            vec![(point.clone(), copies)]
        } else {
            return Err(StrataError::UnsupportedConfiguration(
                "two exceptional divisors meet".into(),
            ));
        };
        breakdown.insert(j, b);
    }
    Ok(Strictification {
        complex,
        log,
        crossings,
        breakdown,
    })
}

fn push(b: &mut Breakdown, label: &str, n: u64) {
    if n == 0 {
        return;
    }
    match b.iter_mut().find(|(l, _)| l == label) {
        Some(e) => e.1 += n,
        None => b.push((label.to_string(), n)),
    }
}

pub fn strictify(nc: &NcComplex) -> Result<(SncComplex, BlowupLog), StrataError> {
    let s = strictification(nc)?;
    Ok((s.complex, s.log))
}

/// Normalized pieces of a stratum of the input pair.
pub fn normalize_stratum(nc: &NcComplex, s: &NcStratum) -> Result<Breakdown, StrataError> {
    match s {
        NcStratum::Base => Ok(vec![("X".into(), 1)]),
        NcStratum::Component(c) => {
            if !nc.components.contains(c) {
                return Err(StrataError::UnknownComponent(c.clone()));
            }
            if nc.self_crossing().contains(c) {
                Ok(vec![(format!("{c}^v"), 1)])
            } else {
                Ok(vec![(c.clone(), 1)])
            }
        }
        NcStratum::Crossing(k) => {
            let x = nc
                .crossings
                .get(*k)
                .ok_or_else(|| StrataError::UnknownStratum(format!("crossing {k}")))?;
            if x.is_simple() {
                let mut labels: Vec<&str> = x.branches.iter().map(|b| b.0.as_str()).collect();
                labels.sort_by_key(|l| nc.components.iter().position(|c| c == l));
                Ok(vec![(
                    x.name
                        .clone()
                        .unwrap_or_else(|| format!("D_{{{}}}", labels.join(","))),
                    1,
                )])
            } else {
                Ok(vec![(x.point_label(), x.branches.len() as u64)])
            }
        }
    }
}
