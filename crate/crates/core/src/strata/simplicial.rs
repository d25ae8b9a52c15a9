//! Simplicial charts, their canonical root pairs, and fixed-locus index data
//! for a finite abelian group acting diagonally on affine space.

use super::snc::SncComplex;
use super::StrataError;
use crate::monoid::{KummerExtension, ToricMonoid};
use crate::orders::prime_to_part;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// Largest group order for which fixed loci are enumerated.
pub const MAX_GROUP_ORDER: u64 = 1_000_000;

/// A single global chart given by a simplicial monoid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplicialChart {
    pub monoid: ToricMonoid,
    /// Positions (in sorted ray order) of the rays lying in the boundary; all by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Vec<usize>>,
    /// Component names for the boundary rays; `1, 2, ..` by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

/// One irreducible component of a fixed locus `Y^g`, tagged by `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedComponent {
    pub element: Vec<u64>,
    /// Indices (into the complex's components) of the coordinates cut out.
    pub stratum: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedLocusData {
    pub invariant_factors: Vec<u64>,
    /// `weights[j][k]`: weight of coordinate `j` under the `k`-th cyclic factor.
    pub weights: Vec<Vec<u64>>,
    /// Coordinate of each boundary component.
    pub boundary: Vec<usize>,
    /// The disjoint union `F` over nontrivial group elements.
    pub fixed: Vec<FixedComponent>,
}

impl FixedLocusData {
    /// The trivial group on `components` coordinates.
    pub fn trivial(components: usize) -> Self {
        FixedLocusData {
            invariant_factors: Vec::new(),
            weights: vec![Vec::new(); components],
            boundary: (0..components).collect(),
            fixed: Vec::new(),
        }
    }

    /// Fixed-locus data of `Z/d_1 x .. x Z/d_k` acting on `A^n` with the given weights.
    pub fn from_action(
        invariant_factors: Vec<u64>,
        weights: Vec<Vec<u64>>,
        boundary: Vec<usize>,
    ) -> Result<Self, StrataError> {
        if let Some(w) = weights.iter().find(|w| w.len() != invariant_factors.len()) {
            return Err(StrataError::UnsupportedAction(format!(
                "weight vector of length {} for {} cyclic factors",
                w.len(),
                invariant_factors.len()
            )));
        }
        if invariant_factors.contains(&0) {
            return Err(StrataError::UnsupportedAction(
                "infinite cyclic factor".into(),
            ));
        }
        if let Some(&b) = boundary.iter().find(|&&b| b >= weights.len()) {
            return Err(StrataError::UnsupportedAction(format!(
                "boundary coordinate {b} out of range"
            )));
        }
        let order = invariant_factors
            .iter()
            .try_fold(1u64, |acc, &d| acc.checked_mul(d));
        match order {
            Some(o) if o <= MAX_GROUP_ORDER => {}
            _ => {
                return Err(StrataError::UnsupportedAction(
                    "group too large to enumerate".into(),
                ))
            }
        }
        let mut fixed = Vec::new();
        let mut g = vec![0u64; invariant_factors.len()];
        loop {
            // advance to the next element; the identity is skipped
            let mut k = 0;
            while k < g.len() {
                g[k] += 1;
                if g[k] < invariant_factors[k] {
                    break;
                }
                g[k] = 0;
                k += 1;
            }
            if k == g.len() {
                break;
            }
            let moved: Vec<usize> = (0..weights.len())
                .filter(|&j| {
                    weights[j]
                        .iter()
                        .zip(&g)
                        .zip(&invariant_factors)
                        .any(|((w, x), d)| (w * x) % d != 0)
                })
                .collect();
            let mut stratum = Vec::with_capacity(moved.len());
            for j in moved {
                match boundary.iter().position(|&b| b == j) {
                    Some(i) => stratum.push(i),
                    None => {
                        return Err(StrataError::UnsupportedAction(format!(
                            "fixed locus of {g:?} is cut out by the non-boundary coordinate {j}"
                        )))
                    }
                }
            }
            stratum.sort_unstable();
            fixed.push(FixedComponent {
                element: g.clone(),
                stratum,
            });
        }
        Ok(FixedLocusData {
            invariant_factors,
            weights,
            boundary,
            fixed,
        })
    }

    /// `F_S`: fixed components containing the stratum `S`.
    pub fn fixed_over(&self, s: &[usize]) -> Vec<&FixedComponent> {
        self.fixed
            .iter()
            .filter(|t| t.stratum.iter().all(|j| s.contains(j)))
            .collect()
    }

    pub fn group_order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }
}

/// `|Z*_{S,r}| + sum over T in F_S of |Z*_{T,r}|`, counting characters with
/// denominators dividing `r` (and prime to `prime_to`, if given).
pub fn fixed_locus_index(
    data: &FixedLocusData,
    complex: &SncComplex,
    s: &[usize],
    r: u64,
    prime_to: Option<u64>,
) -> Result<BigUint, StrataError> {
    if s.iter().any(|&j| j >= complex.len()) || !complex.is_nonempty(s) {
        return Err(StrataError::UnknownStratum(format!("{s:?}")));
    }
    let base = prime_to.map_or(r, |p| prime_to_part(r, p));
    let per = BigUint::from(base.saturating_sub(1));
    let mut total = per.pow(s.len() as u32);
    for t in data.fixed_over(s) {
        total += per.pow(t.stratum.len() as u32);
    }
    Ok(total)
}

/// The canonical root pair of a chart: the SNC complex of the free basis and
/// the fixed-locus data of the quotient group.
pub fn canonical_root_pair(
    chart: &SimplicialChart,
) -> Result<(SncComplex, FixedLocusData, KummerExtension), StrataError> {
    let ext = chart.monoid.canonical_kummer_extension()?;
    let n = ext.rays.len();
    let boundary = chart.boundary.clone().unwrap_or_else(|| (0..n).collect());
    let names = match &chart.names {
        Some(v) if v.len() == boundary.len() => v.clone(),
        Some(v) => {
            return Err(StrataError::UnsupportedAction(format!(
                "{} names for {} boundary rays",
                v.len(),
                boundary.len()
            )))
        }
        None => (1..=boundary.len()).map(|i| i.to_string()).collect(),
    };
    let factors: Vec<u64> = ext
        .quotient_invariant_factors
        .iter()
        .map(|d| {
            d.to_u64()
                .ok_or_else(|| StrataError::UnsupportedAction("group too large".into()))
        })
        .collect::<Result<_, _>>()?;
    let fixed =
        FixedLocusData::from_action(factors, ext.coordinate_weights.clone(), boundary.clone())?;
    let complex = SncComplex::all_nonempty(names, boundary.len())?.with_dimension(n);
    Ok((complex, fixed, ext))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1_chart() -> SimplicialChart {
        SimplicialChart {
            monoid: ToricMonoid::from_i64(2, &[&[2, 0], &[1, 1], &[0, 2]]).unwrap(),
            boundary: None,
            names: None,
        }
    }

    #[test]
    fn a1_root_pair() {
        let (c, f, _) = canonical_root_pair(&a1_chart()).unwrap();
        assert_eq!(c.components().len(), 2);
        assert!(c.is_nonempty(&[0, 1]));
        assert_eq!(f.invariant_factors, vec![2]);
        assert_eq!(f.weights, vec![vec![1], vec![1]]);
        assert_eq!(
            f.fixed,
            vec![FixedComponent {
                element: vec![1],
                stratum: vec![0, 1]
            }]
        );
        let origin = fixed_locus_index(&f, &c, &[0, 1], 2, None).unwrap();
        assert_eq!(origin, BigUint::from(2u32));
        let axis = fixed_locus_index(&f, &c, &[0], 2, None).unwrap();
        assert_eq!(axis, BigUint::from(1u32));
    }

    #[test]
    fn free_chart_trivial_group() {
        let chart = SimplicialChart {
            monoid: ToricMonoid::free(2),
            boundary: None,
            names: None,
        };
        let (c, f, ext) = canonical_root_pair(&chart).unwrap();
        assert!(ext.is_identity());
        assert!(f.fixed.is_empty());
        assert_eq!(c.strata().len(), 4);
        assert_eq!(
            fixed_locus_index(&f, &c, &[0, 1], 3, None).unwrap(),
            BigUint::from(4u32)
        );
    }

    #[test]
    fn one_third_chart_group() {
        let m = ToricMonoid::from_i64(2, &[&[1, 0], &[1, 3]])
            .unwrap()
            .saturate()
            .unwrap();
        let chart = SimplicialChart {
            monoid: m,
            boundary: None,
            names: None,
        };
        let (c, f, _) = canonical_root_pair(&chart).unwrap();
        assert_eq!(c.components().len(), 2);
        assert_eq!(f.invariant_factors, vec![3]);
        assert_eq!(f.fixed.len(), 2);
    }

    #[test]
    fn level_one_counts_vanish() {
        let (c, f, _) = canonical_root_pair(&a1_chart()).unwrap();
        assert_eq!(
            fixed_locus_index(&f, &c, &[0, 1], 1, None).unwrap(),
            BigUint::from(0u32)
        );
        assert!(fixed_locus_index(&f, &c, &[5], 1, None).is_err());
    }

    #[test]
    fn non_boundary_fixed_locus_rejected() {
        // Z/2 moving coordinate 1, which is not in the boundary
        assert!(FixedLocusData::from_action(vec![2], vec![vec![0], vec![1]], vec![0]).is_err());
    }
}
