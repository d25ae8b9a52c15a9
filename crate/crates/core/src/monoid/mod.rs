//! Exact algorithms on toric monoids and their rational cones.
//!
//! A [`ToricMonoid`] is given by generators in an ambient lattice `Z^n`. The
//! ambient lattice is only a coordinate frame: primitivity of ray generators
//! and all quotient groups are taken relative to the group `P^gp` generated by
//! the monoid.

mod cone;
mod kummer;
pub mod lattice;

pub use kummer::KummerExtension;

use cone::{Cone, Frame, Membership};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Lattice-point budget for the saturation helpers.
pub const SATURATION_BUDGET: u64 = 4_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("the monoid has no nonzero generator")]
    ZeroMonoid,
    #[error("the monoid is not sharp: its cone contains a line")]
    NotSharp,
    #[error("the monoid is not simplicial: its extremal rays are linearly dependent")]
    NotSimplicial,
    #[error("generator {index} has length {found}, expected rank {rank}")]
    RankMismatch {
        index: usize,
        found: usize,
        rank: usize,
    },
    #[error("generator {0} is zero")]
    ZeroGenerator(usize),
    #[error("lattice-point enumeration too large ({points} points)")]
    TooLarge { points: String },
}

/// An element of the ambient lattice.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(#[serde(with = "crate::json::int_vec")] pub Vec<BigInt>);

impl LatticeVector {
    pub fn from_i64(v: &[i64]) -> Self {
        LatticeVector(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A vector of reduced rationals; serialized as `[[num, den], ...]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalVector(pub Vec<BigRational>);

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for RationalVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Pair(
            #[serde(with = "crate::json::int")] BigInt,
            #[serde(with = "crate::json::int")] BigInt,
        );
        let pairs: Vec<Pair> = self
            .0
            .iter()
            .map(|q| Pair(q.numer().clone(), q.denom().clone()))
            .collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Pair(
            #[serde(with = "crate::json::int")] BigInt,
            #[serde(with = "crate::json::int")] BigInt,
        );
        let pairs: Vec<Pair> = Vec::deserialize(d)?;
        pairs
            .into_iter()
            .map(|Pair(n, d)| {
                if d.is_zero() {
                    Err(serde::de::Error::custom("zero denominator"))
                } else {
                    Ok(BigRational::new(n, d))
                }
            })
            .collect::<Result<_, _>>()
            .map(RationalVector)
    }
}

/// A finitely generated sharp monoid inside `Z^rank`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToricMonoid {
    rank: usize,
    generators: Vec<LatticeVector>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMonoid {
    rank: usize,
    generators: Vec<LatticeVector>,
}

impl<'de> Deserialize<'de> for ToricMonoid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawMonoid::deserialize(d)?;
        ToricMonoid::new(raw.rank, raw.generators).map_err(serde::de::Error::custom)
    }
}

/// The face lattice of a cone: faces are sets of extremal rays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceLattice {
    pub rays: Vec<LatticeVector>,
    /// Ordered by dimension, then lexicographically by ray positions.
    pub faces: Vec<Face>,
    /// Pairs `(i, j)` with `faces[i]` a proper face of `faces[j]`.
    pub inclusions: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub dim: usize,
    pub rays: Vec<usize>,
}

/// Generators expressed in a frame for `P^gp`, with the cone they span.
struct Chart {
    frame: Frame,
    gens: Vec<Vec<BigInt>>,
    cone: Cone,
}

impl ToricMonoid {
    pub fn new(rank: usize, generators: Vec<LatticeVector>) -> Result<Self, MonoidError> {
        for (index, g) in generators.iter().enumerate() {
            if g.0.len() != rank {
                return Err(MonoidError::RankMismatch {
                    index,
                    found: g.0.len(),
                    rank,
                });
            }
            if g.is_zero() {
                return Err(MonoidError::ZeroGenerator(index));
            }
        }
        Ok(ToricMonoid { rank, generators })
    }

    pub fn from_i64(rank: usize, generators: &[&[i64]]) -> Result<Self, MonoidError> {
        Self::new(
            rank,
            generators
                .iter()
                .map(|g| LatticeVector::from_i64(g))
                .collect(),
        )
    }

    /// The free monoid `N^rank` on the standard basis.
    pub fn free(rank: usize) -> Self {
        let gens = (0..rank)
            .map(|i| LatticeVector((0..rank).map(|j| BigInt::from((i == j) as u8)).collect()))
            .collect();
        ToricMonoid {
            rank,
            generators: gens,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    fn raw_generators(&self) -> Vec<Vec<BigInt>> {
        self.generators.iter().map(|g| g.0.clone()).collect()
    }

    fn chart(&self) -> Result<Chart, MonoidError> {
        let raw = self.raw_generators();
        let frame = Frame::spanned_by(&raw, self.rank);
        let gens: Vec<Vec<BigInt>> = raw
            .iter()
            .map(|g| frame.coords(g).expect("generator lies in its own lattice"))
            .collect();
        let cone = Cone::new(&gens, frame.dim())?;
        Ok(Chart { frame, gens, cone })
    }

    /// Hermite basis of the subgroup `P^gp` of `Z^rank`.
    pub fn group_lattice(&self) -> Vec<LatticeVector> {
        lattice::hermite_rows(&self.raw_generators())
            .into_iter()
            .map(LatticeVector)
            .collect()
    }

    /// Primitive generators (in `P^gp`) of the extremal rays, lexicographically sorted.
    pub fn extremal_rays(&self) -> Result<Vec<LatticeVector>, MonoidError> {
        let chart = self.chart()?;
        Ok(sorted_rays(&chart))
    }

    pub fn is_simplicial(&self) -> Result<bool, MonoidError> {
        let rays = self.extremal_rays()?;
        let rows: Vec<Vec<BigInt>> = rays.iter().map(|r| r.0.clone()).collect();
        Ok(lattice::rank(&rows) == rows.len())
    }

    /// The unique minimal generating set, lexicographically sorted.
    pub fn indecomposables(&self) -> Result<Vec<LatticeVector>, MonoidError> {
        if self.generators.is_empty() {
            return Ok(Vec::new());
        }
        let chart = self.chart()?;
        Ok(irreducibles(&chart.cone, &chart.gens)
            .into_iter()
            .map(|c| LatticeVector(chart.frame.embed(&c)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect())
    }

    /// Whether `v` lies in the monoid.
    pub fn contains(&self, v: &LatticeVector) -> Result<bool, MonoidError> {
        if v.is_zero() {
            return Ok(true);
        }
        if self.generators.is_empty() {
            return Ok(false);
        }
        let chart = self.chart()?;
        let Some(c) = chart.frame.coords(&v.0) else {
            return Ok(false);
        };
        Ok(Membership::new(&chart.cone, &chart.gens).contains(&c))
    }

    /// Whether every point of `P^gp` inside the cone already lies in the monoid.
    pub fn is_saturated(&self) -> Result<bool, MonoidError> {
        if self.generators.is_empty() {
            return Ok(true);
        }
        let chart = self.chart()?;
        let rays = chart.cone.ray_vectors();
        let points = cone::parallelepiped_points(&rays, chart.cone.dim, SATURATION_BUDGET)?;
        let mut member = Membership::new(&chart.cone, &chart.gens);
        Ok(rays.iter().chain(points.iter()).all(|p| member.contains(p)))
    }

    /// The saturation `cone ∩ Z^rank`, returned by its indecomposables.
    ///
    /// Desk-scale helper: enumerates lattice points of the fundamental
    /// parallelepipeds of all simplicial subcones spanned by extremal rays.
    pub fn saturate(&self) -> Result<ToricMonoid, MonoidError> {
        if self.generators.is_empty() {
            return Ok(self.clone());
        }
        let raw = self.raw_generators();
        // Z^n ∩ (Q-span of P): first d rows of the inverse Smith column transform.
        let span = lattice::hermite_rows(&raw);
        let smith = lattice::smith_normal_form(&span, self.rank);
        let saturated_basis: Vec<Vec<BigInt>> = smith.right_inverse[..span.len()].to_vec();
        let frame = Frame::spanned_by(&saturated_basis, self.rank);
        let gens: Vec<Vec<BigInt>> = raw
            .iter()
            .map(|g| {
                frame
                    .coords(g)
                    .expect("generator lies in the saturated lattice")
            })
            .collect();
        let cone = Cone::new(&gens, frame.dim())?;
        let rays = cone.ray_vectors();
        let points = cone::parallelepiped_points(&rays, cone.dim, SATURATION_BUDGET)?;
        let all: Vec<Vec<BigInt>> = gens
            .iter()
            .chain(rays.iter())
            .chain(points.iter())
            .cloned()
            .collect();
        let basis = irreducibles(&cone, &all);
        let generators = basis
            .into_iter()
            .map(|c| LatticeVector(frame.embed(&c)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        Ok(ToricMonoid {
            rank: self.rank,
            generators,
        })
    }

    /// All faces of the cone, from the zero face up to the full cone.
    pub fn face_strata(&self) -> Result<FaceLattice, MonoidError> {
        if self.generators.is_empty() {
            return Ok(FaceLattice {
                rays: Vec::new(),
                faces: vec![Face {
                    dim: 0,
                    rays: Vec::new(),
                }],
                inclusions: Vec::new(),
            });
        }
        let chart = self.chart()?;
        let (rays, perm) = sorted_rays_with_positions(&chart);
        let raw_rays = chart.cone.ray_vectors();
        let mut faces: Vec<Face> = chart
            .cone
            .faces()
            .into_iter()
            .map(|set| {
                let vecs: Vec<Vec<BigInt>> = set.iter().map(|&i| raw_rays[i].clone()).collect();
                let mut positions: Vec<usize> = set.iter().map(|&i| perm[i]).collect();
                positions.sort_unstable();
                Face {
                    dim: lattice::rank(&vecs),
                    rays: positions,
                }
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.rays).cmp(&(b.dim, &b.rays)));
        let mut inclusions = Vec::new();
        for (i, a) in faces.iter().enumerate() {
            for (j, b) in faces.iter().enumerate() {
                if i != j
                    && a.rays.len() < b.rays.len()
                    && a.rays.iter().all(|r| b.rays.contains(r))
                {
                    inclusions.push((i, j));
                }
            }
        }
        Ok(FaceLattice {
            rays,
            faces,
            inclusions,
        })
    }

    pub fn canonical_kummer_extension(&self) -> Result<KummerExtension, MonoidError> {
        kummer::canonical_kummer_extension(self)
    }
}

fn sorted_rays(chart: &Chart) -> Vec<LatticeVector> {
    sorted_rays_with_positions(chart).0
}

/// Rays embedded in the ambient lattice and sorted, plus the position of
/// each `cone.rays` entry in that sorted list.
fn sorted_rays_with_positions(chart: &Chart) -> (Vec<LatticeVector>, Vec<usize>) {
    let embedded: Vec<LatticeVector> = chart
        .cone
        .ray_vectors()
        .iter()
        .map(|r| LatticeVector(chart.frame.embed(r)))
        .collect();
    let mut order: Vec<usize> = (0..embedded.len()).collect();
    order.sort_by(|&a, &b| embedded[a].cmp(&embedded[b]));
    let mut perm = vec![0; embedded.len()];
    for (pos, &orig) in order.iter().enumerate() {
        perm[orig] = pos;
    }
    let sorted = order.iter().map(|&i| embedded[i].clone()).collect();
    (sorted, perm)
}

fn irreducibles(cone: &Cone, gens: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut member = Membership::new(cone, gens);
    gens.iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .filter(|g| !member.is_decomposable(g))
        .cloned()
        .collect()
}
