//! Rational cones in lattice coordinates: facets, extremal rays, faces and
//! monoid membership. Everything here works in a full-rank frame `Z^d`.

use super::lattice::{self, dot, echelon_coordinates, hermite_rows, primitive, to_rational};
use super::MonoidError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// A sublattice of `Z^n` given by an echelon basis, used as a coordinate frame.
#[derive(Clone, Debug)]
pub(crate) struct Frame {
    pub basis: Vec<Vec<BigInt>>,
    pub ambient: usize,
}

impl Frame {
    pub fn spanned_by(vectors: &[Vec<BigInt>], ambient: usize) -> Frame {
        Frame {
            basis: hermite_rows(vectors),
            ambient,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rational_coords(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        echelon_coordinates(&self.basis, v)
    }

    /// Integer coordinates, or `None` if `v` is not in the lattice.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = self.rational_coords(&to_rational(v))?;
        c.into_iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect()
    }

    pub fn embed(&self, c: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.ambient];
        for (x, row) in c.iter().zip(&self.basis) {
            for (o, b) in out.iter_mut().zip(row) {
                *o += x * b;
            }
        }
        out
    }

    pub fn embed_rational(&self, c: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.ambient];
        for (x, row) in c.iter().zip(&self.basis) {
            for (o, b) in out.iter_mut().zip(row) {
                *o += x * BigRational::from_integer(b.clone());
            }
        }
        out
    }
}

/// A pointed full-dimensional cone in `Q^d` with its facet description.
#[derive(Clone, Debug)]
pub(crate) struct Cone {
    pub dim: usize,
    /// Distinct primitive directions of the generators.
    pub directions: Vec<Vec<BigInt>>,
    /// Primitive inward facet normals.
    pub facets: Vec<Vec<BigInt>>,
    /// Indices into `directions` spanning extremal rays.
    pub rays: Vec<usize>,
}

impl Cone {
    pub fn new(gens: &[Vec<BigInt>], dim: usize) -> Result<Cone, MonoidError> {
        let directions: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| primitive(g))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if directions.is_empty() {
            return Err(MonoidError::ZeroMonoid);
        }
        let facets = if dim == 1 {
            let positive = directions.iter().all(|g| g[0].is_positive());
            let negative = directions.iter().all(|g| g[0].is_negative());
            if !(positive || negative) {
                return Err(MonoidError::NotSharp);
            }
            vec![vec![if positive {
                BigInt::one()
            } else {
                -BigInt::one()
            }]]
        } else {
            let facets = facet_normals(&directions, dim);
            if lattice::rank(&facets) < dim {
                return Err(MonoidError::NotSharp);
            }
            facets
        };
        let rays = (0..directions.len())
            .filter(|&i| {
                let tight: Vec<Vec<BigInt>> = facets
                    .iter()
                    .filter(|f| dot(f, &directions[i]).is_zero())
                    .cloned()
                    .collect();
                lattice::rank(&tight) == dim - 1
            })
            .collect();
        Ok(Cone {
            dim,
            directions,
            facets,
            rays,
        })
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.facets.iter().all(|f| !dot(f, x).is_negative())
    }

    /// A linear form positive on every nonzero element of the cone.
    pub fn grading(&self) -> Vec<BigInt> {
        let mut w = vec![BigInt::zero(); self.dim];
        for f in &self.facets {
            for (a, b) in w.iter_mut().zip(f) {
                *a += b;
            }
        }
        w
    }

    pub fn ray_vectors(&self) -> Vec<Vec<BigInt>> {
        self.rays
            .iter()
            .map(|&i| self.directions[i].clone())
            .collect()
    }

    /// Faces as sets of positions into `ray_vectors()`, zero face and full cone included.
    pub fn faces(&self) -> Vec<BTreeSet<usize>> {
        let rays = self.ray_vectors();
        let on = |f: &Vec<BigInt>| -> BTreeSet<usize> {
            (0..rays.len())
                .filter(|&i| dot(f, &rays[i]).is_zero())
                .collect()
        };
        let mut faces: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        faces.insert((0..rays.len()).collect());
        let mut frontier: Vec<BTreeSet<usize>> = self.facets.iter().map(on).collect();
        let facet_sets = frontier.clone();
        while let Some(face) = frontier.pop() {
            if !faces.insert(face.clone()) {
                continue;
            }
            for fs in &facet_sets {
                let meet: BTreeSet<usize> = face.intersection(fs).copied().collect();
                if !faces.contains(&meet) {
                    frontier.push(meet);
                }
            }
        }
        faces.into_iter().collect()
    }
}

fn facet_normals(directions: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let mut found = BTreeSet::new();
    for subset in combinations(directions.len(), dim - 1) {
        let vecs: Vec<Vec<BigInt>> = subset.iter().map(|&i| directions[i].clone()).collect();
        let Some(normal) = lattice::hyperplane_normal(&vecs, dim) else {
            continue;
        };
        let values: Vec<BigInt> = directions.iter().map(|g| dot(&normal, g)).collect();
        if values.iter().all(|v| !v.is_negative()) {
            found.insert(normal);
        } else if values.iter().all(|v| !v.is_positive()) {
            found.insert(normal.iter().map(|x| -x).collect());
        }
    }
    found.into_iter().collect()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Membership in the monoid generated by `gens`, by graded descent.
pub(crate) struct Membership<'a> {
    cone: &'a Cone,
    gens: Vec<(BigInt, Vec<BigInt>)>,
    grading: Vec<BigInt>,
    memo: BTreeMap<Vec<BigInt>, bool>,
}

impl<'a> Membership<'a> {
    pub fn new(cone: &'a Cone, gens: &[Vec<BigInt>]) -> Self {
        let grading = cone.grading();
        let mut gens: Vec<(BigInt, Vec<BigInt>)> = gens
            .iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(|g| (dot(&grading, g), g.clone()))
            .collect();
        gens.sort();
        Membership {
            cone,
            gens,
            grading,
            memo: BTreeMap::new(),
        }
    }

    pub fn contains(&mut self, x: &[BigInt]) -> bool {
        if x.iter().all(Zero::is_zero) {
            return true;
        }
        if !self.cone.contains(x) {
            return false;
        }
        if let Some(&known) = self.memo.get(x) {
            return known;
        }
        let deg = dot(&self.grading, x);
        let candidates: Vec<Vec<BigInt>> = self
            .gens
            .iter()
            .take_while(|(d, _)| *d <= deg)
            .map(|(_, g)| g.clone())
            .collect();
        let mut result = false;
        for g in candidates {
            let rest: Vec<BigInt> = x.iter().zip(&g).map(|(a, b)| a - b).collect();
            if self.contains(&rest) {
                result = true;
                break;
            }
        }
        self.memo.insert(x.to_vec(), result);
        result
    }

    /// Whether `x` is a sum of a generator and a nonzero monoid element.
    pub fn is_decomposable(&mut self, x: &[BigInt]) -> bool {
        let deg = dot(&self.grading, x);
        let candidates: Vec<Vec<BigInt>> = self
            .gens
            .iter()
            .take_while(|(d, _)| *d < deg)
            .map(|(_, g)| g.clone())
            .collect();
        candidates.into_iter().any(|g| {
            let rest: Vec<BigInt> = x.iter().zip(&g).map(|(a, b)| a - b).collect();
            self.contains(&rest)
        })
    }
}

/// Lattice points `x != 0` of the half-open parallelepipeds `sum λ_i r_i`,
/// `λ ∈ [0,1)^d`, over every linearly independent `d`-subset of rays.
pub(crate) fn parallelepiped_points(
    rays: &[Vec<BigInt>],
    dim: usize,
    budget: u64,
) -> Result<BTreeSet<Vec<BigInt>>, MonoidError> {
    let mut points = BTreeSet::new();
    for subset in combinations(rays.len(), dim) {
        let chosen: Vec<Vec<BigInt>> = subset.iter().map(|&i| rays[i].clone()).collect();
        if lattice::determinant(&chosen).is_zero() {
            continue;
        }
        let q: Vec<Vec<BigRational>> = chosen.iter().map(|r| to_rational(r)).collect();
        let lo: Vec<BigInt> = (0..dim)
            .map(|k| {
                chosen
                    .iter()
                    .map(|r| r[k].clone().min(BigInt::zero()))
                    .sum()
            })
            .collect();
        let hi: Vec<BigInt> = (0..dim)
            .map(|k| {
                chosen
                    .iter()
                    .map(|r| r[k].clone().max(BigInt::zero()))
                    .sum()
            })
            .collect();
        let size = lo
            .iter()
            .zip(&hi)
            .fold(BigInt::one(), |acc, (l, h)| acc * (h - l + 1u32));
        if size > BigInt::from(budget) {
            return Err(MonoidError::TooLarge {
                points: size.to_string(),
            });
        }
        let mut cur = lo.clone();
        loop {
            let lambda = lattice::solve_square(&q, &to_rational(&cur)).expect("independent rays");
            let inside = lambda
                .iter()
                .all(|l| !l.is_negative() && *l < BigRational::one());
            if inside && cur.iter().any(|x| !x.is_zero()) {
                points.insert(cur.clone());
            }
            // odometer step
            let mut k = 0;
            loop {
                if k == dim {
                    break;
                }
                if cur[k] < hi[k] {
                    cur[k] += 1;
                    break;
                }
                cur[k] = lo[k].clone();
                k += 1;
            }
            if k == dim {
                break;
            }
        }
    }
    Ok(points)
}
