use logsod::oracles::factorial_chain;
use logsod::orders::{
    cmp_factorial_scalar, cmp_factorial_vector, count_characters, enumerate_characters,
    factorial_big, factorial_sort, factorial_u64, join, prime_to_part, CharVector, Character,
    Comparison, Preorder,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use std::cmp::Ordering;

fn in_level(n: u64) -> impl Strategy<Value = Character> {
    let q = factorial_u64(n).unwrap();
    (0..q).prop_map(move |p| Character::of(p, q))
}

fn position(chain: &[BigRational], c: &Character) -> usize {
    chain
        .iter()
        .position(|x| *x == c.value())
        .expect("character in chain")
}

fn vector(n: u64, len: usize) -> impl Strategy<Value = CharVector> {
    prop::collection::vec(in_level(n), len).prop_map(CharVector)
}

/// Entries drawn from mixed levels up to `n`.
fn mixed(n: u64, len: usize) -> impl Strategy<Value = CharVector> {
    prop::collection::vec((1..=n).prop_flat_map(in_level), len).prop_map(CharVector)
}

fn preorder(prefix: &'static str) -> impl Strategy<Value = Preorder> {
    (1usize..=4)
        .prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 0..6)))
        .prop_map(move |(n, pairs)| {
            let labels = (0..n).map(|i| format!("{prefix}{i}")).collect();
            Preorder::generated_by(labels, &pairs).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scalar_order_matches_chain(n in 1u64..=6, seed in any::<(u64, u64)>()) {
        let q = factorial_u64(n).unwrap();
        let (x, y) = (Character::of(seed.0 % q, q), Character::of(seed.1 % q, q));
        let chain = factorial_chain(n);
        prop_assert_eq!(cmp_factorial_scalar(&x, &y), position(&chain, &x).cmp(&position(&chain, &y)));
        prop_assert_eq!(x.factorial_rank(n).unwrap(), BigUint::from(position(&chain, &x)));
    }

    #[test]
    fn scalar_order_is_antisymmetric_and_transitive(n in 1u64..=7, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let q = factorial_u64(n).unwrap();
        let (x, y, z) = (Character::of(a % q, q), Character::of(b % q, q), Character::of(c % q, q));
        prop_assert_eq!(cmp_factorial_scalar(&x, &y), cmp_factorial_scalar(&y, &x).reverse());
        if cmp_factorial_scalar(&x, &y).is_le() && cmp_factorial_scalar(&y, &z).is_le() {
            prop_assert!(cmp_factorial_scalar(&x, &z).is_le());
        }
        if cmp_factorial_scalar(&x, &y) == Ordering::Equal {
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn normal_form_round_trips(p in 0u64..5040, q in 1u64..5040, shift in -3i64..=3) {
        let c = Character::new(p % q, q).unwrap();
        let form = c.normal_factorial_form();
        let value = BigRational::new(-BigInt::from(form.p.clone()), BigInt::from(factorial_big(form.n)));
        prop_assert_eq!(value.clone(), c.value());
        // minimal: the denominator does not divide (n-1)!
        if form.n > 1 {
            prop_assert!(!(factorial_big(form.n - 1) % BigUint::from(c.denominator())).is_zero());
        }
        prop_assert!(form.p < factorial_big(form.n));
        let moved = value + BigRational::from_integer(BigInt::from(shift));
        prop_assert_eq!(Character::from_rational(&moved).unwrap(), c);
    }

    #[test]
    fn vector_order_is_a_partial_order(vs in prop::collection::vec(mixed(4, 3), 3)) {
        let le = |a: &CharVector, b: &CharVector| cmp_factorial_vector(a, b).unwrap().is_le();
        for a in &vs {
            prop_assert!(le(a, a));
            for b in &vs {
                if le(a, b) && le(b, a) {
                    prop_assert_eq!(a, b);
                }
                for c in &vs {
                    if le(a, b) && le(b, c) {
                        prop_assert!(le(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn factorial_sort_is_a_linear_extension(vs in prop::collection::vec(vector(3, 2), 1..30)) {
        let mut sorted = vs.clone();
        factorial_sort(&mut sorted);
        for i in 0..sorted.len() {
            for j in i + 1..sorted.len() {
                prop_assert_ne!(cmp_factorial_vector(&sorted[j], &sorted[i]).unwrap(), Comparison::Less);
            }
        }
    }

    #[test]
    fn strict_strata_partition_the_box(r in prop::collection::vec(1u64..=8, 1..=4)) {
        let k = r.len();
        let mut total = BigUint::zero();
        for mask in 0u32..1 << k {
            let support: Vec<usize> = (0..k).filter(|&j| mask >> j & 1 == 1).collect();
            let n = count_characters(&r, &support, true, None).unwrap();
            let listed = enumerate_characters(&r, &support, true, None).unwrap();
            prop_assert_eq!(BigUint::from(listed.len()), n.clone());
            prop_assert!(listed.iter().all(|v| logsod::orders::support_partition(v) == support));
            total += n;
        }
        let all: Vec<usize> = (0..k).collect();
        prop_assert_eq!(total, BigUint::from(r.iter().product::<u64>()));
        prop_assert_eq!(count_characters(&r, &all, false, None).unwrap(), BigUint::from(r.iter().product::<u64>()));
    }

    #[test]
    fn prime_filter_keeps_coprime_denominators(
        r in prop::collection::vec(1u64..=12, 1..=3),
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        scale in 1u64..=4,
    ) {
        let all: Vec<usize> = (0..r.len()).collect();
        let kept = enumerate_characters(&r, &all, false, Some(p)).unwrap();
        prop_assert!(kept.iter().all(|v| v.0.iter().all(|c| c.denominator() % p != 0)));
        let want: u64 = r.iter().map(|&x| prime_to_part(x, p)).product();
        prop_assert_eq!(kept.len() as u64, want);
        // raising each level to a multiple cannot lose characters
        let bigger: Vec<u64> = r.iter().map(|x| x * scale).collect();
        prop_assert!(count_characters(&bigger, &all, true, Some(p)).unwrap() >= count_characters(&r, &all, true, Some(p)).unwrap());
        prop_assert!(count_characters(&r, &all, false, Some(p)).unwrap() <= count_characters(&r, &all, false, None).unwrap());
    }

    #[test]
    fn join_is_associative(p in preorder("a"), q in preorder("b"), r in preorder("c")) {
        prop_assert_eq!(join(&join(&p, &q), &r), join(&p, &join(&q, &r)));
        let pq = join(&p, &q);
        prop_assert_eq!(pq.relation_count(), p.relation_count() + q.relation_count() + p.len() * q.len());
    }

    #[test]
    fn join_renames_clashes(p in preorder("a"), q in preorder("a")) {
        let pq = join(&p, &q);
        prop_assert_eq!(pq.len(), p.len() + q.len());
        let labels: std::collections::BTreeSet<&String> = pq.elements().iter().collect();
        prop_assert_eq!(labels.len(), pq.len());
    }
}

#[test]
fn chains_restrict() {
    for n in 2..=6 {
        let lower = factorial_chain(n - 1);
        let upper = factorial_chain(n);
        let q = factorial_big(n - 1);
        let restricted: Vec<BigRational> = upper
            .into_iter()
            .filter(|x| (&q % BigUint::try_from(x.denom().clone()).unwrap()).is_zero())
            .collect();
        assert_eq!(restricted, lower, "n = {n}");
    }
}
