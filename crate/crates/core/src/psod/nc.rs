//! Descriptors for normal crossings pairs (through strictification) and for
//! simplicial charts (through the canonical root pair).

use super::{psod_infinite, FactorLabel, Level, OrderKind, PsodDescriptor, PsodError};
use crate::monoid::KummerExtension;
use crate::orders::factorial_u64;
use crate::strata::{
    canonical_root_pair, strictification, BlowupLog, Breakdown, FixedLocusData, NcComplex,
    SimplicialChart, SncComplex,
};
use num_bigint::BigUint;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NcFactor {
    #[serde(flatten)]
    pub label: FactorLabel,
    /// Normalized pieces of the original pair this factor lives on.
    pub normalized: Breakdown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NcDescriptor {
    pub level: Level,
    pub order: OrderKind,
    /// Components of the strictified pair.
    pub components: Vec<String>,
    pub blowups: BlowupLog,
    /// Breakdown of the base factor, from the blow-up formula.
    pub base: Breakdown,
    pub factors: Vec<NcFactor>,
    /// Number of factors on each normalized piece, summed over all labels.
    pub totals: Vec<(String, String)>,
}

impl NcDescriptor {
    /// The aggregate count for one normalized label.
    pub fn total(&self, label: &str) -> Option<BigUint> {
        self.totals
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, n)| n.parse().expect("decimal"))
    }

    pub fn descriptor(&self) -> PsodDescriptor {
        PsodDescriptor {
            level: self.level.clone(),
            order: self.order,
            components: self.components.clone(),
            labels: self.factors.iter().map(|f| f.label.clone()).collect(),
        }
    }
}

/// Strictify, build the truncated descriptor on the result, and relabel each
/// factor by normalized strata of `nc`.
pub fn psod_nc(nc: &NcComplex, n: u64) -> Result<NcDescriptor, PsodError> {
    let s = strictification(nc)?;
    let d = psod_infinite(&s.complex, n)?;
    let factors: Vec<NcFactor> = d
        .labels
        .into_iter()
        .map(|label| {
            let normalized = if label.zero {
                Vec::new()
            } else {
                s.breakdown(&label.support)
                    .cloned()
                    .expect("every nonempty stratum has a breakdown")
            };
            NcFactor { label, normalized }
        })
        .collect();
    let r = factorial_u64(n).expect("enumerated above");
    let totals = aggregate(&s.complex, r, |j| {
        s.breakdown(j).cloned().unwrap_or_default()
    })
    .into_iter()
    .map(|(l, n)| (l, n.to_string()))
    .collect();
    let base = s.breakdown(&[]).cloned().unwrap_or_default();
    Ok(NcDescriptor {
        level: d.level,
        order: d.order,
        components: d.components,
        blowups: s.log,
        base,
        factors,
        totals,
    })
}

/// `sum_J (r-1)^{|J|} * breakdown(J)` over nonempty strata, merged by label.
pub(crate) fn aggregate(
    c: &SncComplex,
    r: u64,
    breakdown: impl Fn(&[usize]) -> Breakdown,
) -> Vec<(String, BigUint)> {
    let per = BigUint::from(r - 1);
    let mut order = Vec::new();
    let mut sums: BTreeMap<String, BigUint> = BTreeMap::new();
    for j in c.strata() {
        let w = per.pow(j.len() as u32);
        for (label, m) in breakdown(&j) {
            if !sums.contains_key(&label) {
                order.push(label.clone());
            }
            *sums.entry(label).or_default() += &w * BigUint::from(m);
        }
    }
    order
        .into_iter()
        .map(|l| {
            let v = sums.remove(&l).expect("recorded");
            (l, v)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicialDescriptor {
    #[serde(flatten)]
    pub descriptor: PsodDescriptor,
    pub extension: KummerExtension,
    pub fixed: FixedLocusData,
}

/// Canonical root pair of the chart, then the truncated descriptor on it.
/// Strata are named by the boundary of the root pair, marked with a prime.
pub fn psod_simplicial(chart: &SimplicialChart, n: u64) -> Result<SimplicialDescriptor, PsodError> {
    let (complex, fixed, extension) = canonical_root_pair(chart)?;
    let primed: Vec<String> = complex
        .components()
        .iter()
        .map(|c| format!("{c}'"))
        .collect();
    let mut renamed = SncComplex::all_nonempty(primed, complex.len())?;
    if let Some(d) = complex.dimension() {
        renamed = renamed.with_dimension(d);
    }
    let descriptor = psod_infinite(&renamed, n)?;
    Ok(SimplicialDescriptor {
        descriptor,
        extension,
        fixed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::ToricMonoid;
    use crate::psod::Provenance;
    use crate::strata::{Branch, Crossing};

    fn node(c: &str, name: Option<&str>) -> Crossing {
        Crossing {
            branches: vec![Branch(c.into(), 1), Branch(c.into(), 2)],
            codim: 2,
            name: name.map(Into::into),
        }
    }

    #[test]
    fn nodal_pair_level_two() {
        let nc = NcComplex::new(vec!["C".into()], vec![node("C", None)], Some(2)).unwrap();
        let d = psod_nc(&nc, 2).unwrap();
        assert_eq!(d.blowups.len(), 1);
        // C, E1 with C ∩ E1 nonempty: 1 + 1 + 1 + 1 labels at level 2
        assert_eq!(d.factors.len(), 4);
        assert_eq!(d.base, vec![("X".to_string(), 1), ("x^v".to_string(), 1)]);
        assert_eq!(d.total("X"), Some(BigUint::from(1u32)));
        assert_eq!(d.total("C^v"), Some(BigUint::from(1u32)));
        assert_eq!(d.total("x^v"), Some(BigUint::from(5u32)));
        let base = d
            .factors
            .iter()
            .find(|f| f.label.provenance == Provenance::BaseStack)
            .unwrap();
        assert_eq!(base.normalized, d.base);
    }

    #[test]
    fn simple_input_matches_snc() {
        let nc = NcComplex::new(
            vec!["A".into(), "B".into()],
            vec![Crossing {
                branches: vec![Branch("A".into(), 1), Branch("B".into(), 1)],
                codim: 2,
                name: None,
            }],
            None,
        )
        .unwrap();
        let d = psod_nc(&nc, 3).unwrap();
        assert!(d.blowups.is_empty());
        assert_eq!(
            d.descriptor(),
            psod_infinite(&nc.as_snc().unwrap(), 3).unwrap()
        );
    }

    #[test]
    fn blow_up_order_irrelevant() {
        let make =
            |xs: Vec<Crossing>| NcComplex::new(vec!["C".into(), "D".into()], xs, Some(2)).unwrap();
        let a = psod_nc(&make(vec![node("C", Some("p")), node("D", Some("q"))]), 2).unwrap();
        let b = psod_nc(&make(vec![node("D", Some("q")), node("C", Some("p"))]), 2).unwrap();
        let mut ta = a.totals.clone();
        let mut tb = b.totals.clone();
        ta.sort();
        tb.sort();
        assert_eq!(ta, tb);
        assert_eq!(a.factors.len(), b.factors.len());
    }

    #[test]
    fn a1_chart() {
        let chart = SimplicialChart {
            monoid: ToricMonoid::from_i64(2, &[&[2, 0], &[1, 1], &[0, 2]]).unwrap(),
            boundary: None,
            names: None,
        };
        let d = psod_simplicial(&chart, 2).unwrap();
        assert_eq!(d.descriptor.len(), 4);
        assert_eq!(
            d.descriptor.components,
            vec!["1'".to_string(), "2'".to_string()]
        );
        let points = d
            .descriptor
            .labels
            .iter()
            .filter(|l| l.support.len() == 2)
            .count();
        assert_eq!(points, 1);
    }

    #[test]
    fn free_chart_is_plain() {
        let chart = SimplicialChart {
            monoid: ToricMonoid::free(2),
            boundary: None,
            names: None,
        };
        let d = psod_simplicial(&chart, 3).unwrap();
        assert_eq!(d.descriptor.len(), 36);
        assert!(d.fixed.fixed.is_empty());
    }
}
