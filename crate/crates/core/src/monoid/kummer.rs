//! The canonical minimal free Kummer extension of a simplicial monoid.

use super::lattice::{self, to_rational};
use super::{LatticeVector, MonoidError, RationalVector, ToricMonoid};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KummerExtension {
    pub source: ToricMonoid,
    /// Primitive ray generators `p_j` in `P^gp`, lexicographically sorted.
    pub rays: Vec<LatticeVector>,
    /// `p_j / c_j` in ambient coordinates.
    pub target_basis: Vec<RationalVector>,
    /// The `c_j`.
    #[serde(with = "crate::json::nat_vec")]
    pub root_orders: Vec<BigUint>,
    /// Invariant factors `> 1` of `Z·target_basis / P^gp`.
    #[serde(with = "crate::json::nat_vec")]
    pub quotient_invariant_factors: Vec<BigUint>,
    /// `coordinate_weights[j][k]`: the class of the `j`-th target basis vector
    /// in the `k`-th cyclic factor of the quotient.
    pub coordinate_weights: Vec<Vec<u64>>,
    /// Non-ray indecomposables `q_i` with their coordinates in the `p_j`.
    pub other_indecomposables: Vec<(LatticeVector, RationalVector)>,
}

impl KummerExtension {
    pub fn is_identity(&self) -> bool {
        self.root_orders.iter().all(One::is_one) && self.quotient_invariant_factors.is_empty()
    }

    /// Order of the quotient group.
    pub fn group_order(&self) -> BigUint {
        self.quotient_invariant_factors.iter().product()
    }
}

pub(super) fn canonical_kummer_extension(m: &ToricMonoid) -> Result<KummerExtension, MonoidError> {
    let chart = m.chart()?;
    let dim = chart.cone.dim;
    let mut rays = chart.cone.ray_vectors();
    rays.sort_by_key(|r| chart.frame.embed(r));
    if rays.len() != dim || lattice::rank(&rays) != dim {
        return Err(MonoidError::NotSimplicial);
    }
    let ray_q: Vec<Vec<BigRational>> = rays.iter().map(|r| to_rational(r)).collect();
    let irreducible = super::irreducibles(&chart.cone, &chart.gens);

    let mut c: Vec<BigInt> = vec![BigInt::one(); dim];
    let mut others = Vec::new();
    for q in irreducible.iter().filter(|q| !rays.contains(q)) {
        let coords = lattice::solve_square(&ray_q, &to_rational(q)).expect("rays form a basis");
        for (cj, x) in c.iter_mut().zip(&coords) {
            *cj = cj.lcm(x.denom());
        }
        others.push((LatticeVector(chart.frame.embed(q)), RationalVector(coords)));
    }

    let target_basis = rays
        .iter()
        .zip(&c)
        .map(|(r, cj)| {
            let scaled: Vec<BigRational> = r
                .iter()
                .map(|x| BigRational::new(x.clone(), cj.clone()))
                .collect();
            RationalVector(chart.frame.embed_rational(&scaled))
        })
        .collect();

    // Integer coordinates of the generators of P in the target basis.
    let relations: Vec<Vec<BigInt>> = irreducible
        .iter()
        .map(|g| {
            let coords = lattice::solve_square(&ray_q, &to_rational(g)).expect("rays form a basis");
            coords
                .iter()
                .zip(&c)
                .map(|(x, cj)| {
                    let v = x * BigRational::from_integer(cj.clone());
                    debug_assert!(v.is_integer());
                    v.to_integer()
                })
                .collect()
        })
        .collect();
    let smith = lattice::smith_normal_form(&relations, dim);
    let cyclic: Vec<(usize, BigInt)> = smith
        .diagonal
        .iter()
        .enumerate()
        .filter(|(_, d)| *d > &BigInt::one())
        .map(|(k, d)| (k, d.clone()))
        .collect();
    let coordinate_weights = (0..dim)
        .map(|j| {
            cyclic
                .iter()
                .map(|(k, d)| {
                    let w = smith.right[j][*k].mod_floor(d);
                    u64::try_from(&w).expect("weight fits in 64 bits")
                })
                .collect()
        })
        .collect();

    Ok(KummerExtension {
        source: m.clone(),
        rays: rays
            .iter()
            .map(|r| LatticeVector(chart.frame.embed(r)))
            .collect(),
        target_basis,
        root_orders: c
            .iter()
            .map(|x| x.abs().to_biguint().expect("positive"))
            .collect(),
        quotient_invariant_factors: cyclic
            .iter()
            .map(|(_, d)| d.to_biguint().expect("positive"))
            .collect(),
        coordinate_weights,
        other_indecomposables: others,
    })
}
