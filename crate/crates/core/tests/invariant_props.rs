use logsod::invariants::{decompose_finite, decompose_kfl, etale_filter, Assignment, Value};
use logsod::orders::factorial_u64;
use logsod::psod::{psod_snc, OrderKind};
use logsod::strata::SncComplex;
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = SncComplex> {
    (1usize..=3).prop_flat_map(|k| {
        let subset = prop::collection::btree_set(0..k, 2..=k.max(2))
            .prop_map(|s| s.into_iter().collect::<Vec<_>>());
        let strata = if k >= 2 {
            prop::collection::vec(subset, 0..3).boxed()
        } else {
            Just(Vec::new()).boxed()
        };
        strata.prop_map(move |declared| {
            let comps: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
            let named: Vec<Vec<String>> = declared
                .iter()
                .map(|s| s.iter().map(|&i| comps[i].clone()).collect())
                .collect();
            SncComplex::from_divisors(comps, &named, &[]).unwrap()
        })
    })
}

/// An integer value on every nonempty stratum, drawn from `seed`.
fn values(c: &SncComplex, seed: &[i64]) -> Assignment {
    let labels: Vec<String> = c.strata().iter().map(|j| c.display(j)).collect();
    let pairs: Vec<(&str, i64)> = labels
        .iter()
        .zip(seed.iter().cycle())
        .map(|(l, &v)| (l.as_str(), v))
        .collect();
    Assignment::ints(&pairs)
}

fn seeds() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-9i64..=9, 1..=8)
}

fn int(v: &Value) -> BigInt {
    match v {
        Value::Int(x) => x.clone(),
        other => panic!("expected an integer, got {other}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn truncation_matches_finite_level(c in complex(), n in 1u64..=5, seed in seeds()) {
        let v = values(&c, &seed);
        let r = factorial_u64(n).unwrap();
        let kfl = decompose_kfl(&c, &v, n).unwrap();
        let fin = decompose_finite(&c, &vec![r; c.len()], &v).unwrap();
        prop_assert_eq!(&kfl.total, &fin.total);
        for (a, b) in kfl.rows.iter().zip(&fin.rows) {
            prop_assert_eq!(&a.multiplicity, &b.multiplicity);
        }
    }

    #[test]
    fn additive_and_homogeneous(c in complex(), r in prop::collection::vec(1u64..=6, 3), s1 in seeds(), s2 in seeds(), k in 0u32..5) {
        let r = &r[..c.len()];
        let (v, w) = (values(&c, &s1), values(&c, &s2));
        let sum = decompose_finite(&c, r, &v.add(&w).unwrap()).unwrap();
        let separate = int(&decompose_finite(&c, r, &v).unwrap().total) + int(&decompose_finite(&c, r, &w).unwrap().total);
        prop_assert_eq!(int(&sum.total), separate);
        let scaled = decompose_finite(&c, r, &v.scale(&BigUint::from(k))).unwrap();
        prop_assert_eq!(int(&scaled.total), int(&decompose_finite(&c, r, &v).unwrap().total) * BigInt::from(k));
    }

    #[test]
    fn total_sums_nonzero_labels(c in complex(), r in prop::collection::vec(1u64..=5, 3), seed in seeds()) {
        let r = &r[..c.len()];
        let v = values(&c, &seed);
        let d = psod_snc(&c, r, OrderKind::Standard).unwrap();
        let by_labels: BigInt = d
            .nonzero_labels()
            .map(|l| int(v.get(&c.display(&l.support)).unwrap()))
            .sum();
        prop_assert_eq!(int(&decompose_finite(&c, r, &v).unwrap().total), by_labels);
    }

    #[test]
    fn prime_filter_is_idempotent_and_commutes(c in complex(), r in prop::collection::vec(1u64..=12, 3), seed in seeds()) {
        let r = &r[..c.len()];
        let v = values(&c, &seed.iter().map(|x| x.abs()).collect::<Vec<_>>());
        let full = decompose_finite(&c, r, &v).unwrap();
        let two = etale_filter(&full, 2).unwrap();
        prop_assert_eq!(&etale_filter(&two, 2).unwrap(), &two);
        let a = etale_filter(&two, 3).unwrap();
        let b = etale_filter(&etale_filter(&full, 3).unwrap(), 2).unwrap();
        prop_assert_eq!(&a, &b);
        // with nonnegative values, filtering can only drop contributions
        prop_assert!(int(&a.total) <= int(&two.total));
        prop_assert!(int(&two.total) <= int(&full.total));
        for (x, y) in two.rows.iter().zip(&full.rows) {
            prop_assert!(x.multiplicity <= y.multiplicity);
        }
    }
}

#[test]
fn projective_line_counts_classes() {
    let c = SncComplex::from_divisors(vec!["pt".into()], &[], &[]).unwrap();
    let v = Assignment::ints(&[("X", 2), ("pt", 1)]);
    for r in 1..=30u64 {
        let report = decompose_finite(&c, &[r], &v).unwrap();
        assert_eq!(int(&report.total), BigInt::from(r + 1), "r = {r}");
    }
}

#[test]
fn filter_rejects_composites() {
    let c = SncComplex::from_divisors(vec!["pt".into()], &[], &[]).unwrap();
    let report = decompose_finite(&c, &[6], &Assignment::ints(&[("X", 2), ("pt", 1)])).unwrap();
    assert!(etale_filter(&report, 4).is_err());
    assert!(etale_filter(&report, 1).is_err());
}
