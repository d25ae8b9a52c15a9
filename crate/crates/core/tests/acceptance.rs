//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use logsod::invariants::{
    decompose_finite, decompose_fixed_locus, decompose_kfl, decompose_simplicial_complexified,
};
use logsod::invariants::{etale_filter, Assignment, Value};
use logsod::oracles::{
    kummer_fixtures, kummer_oracle, order_oracle, partition_oracle, weighted_projective_collection,
};
use logsod::orders::{
    cmp_factorial_scalar, count_characters, factorial_u64, CharVector, Character,
};
use logsod::psod::{bls_divergence, embedding_check, psod_bls, psod_single};
use logsod::strata::{strictification, FixedLocusData, NcComplex, SimplicialChart, SncComplex};
use num_bigint::BigUint;
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

struct Outcome {
    passed: bool,
    detail: String,
}

fn ok(detail: impl Into<String>) -> Outcome {
    Outcome {
        passed: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        passed: false,
        detail: detail.into(),
    }
}

fn check(cond: bool, pass: impl Into<String>, failure: impl FnOnce() -> String) -> Outcome {
    if cond {
        ok(pass)
    } else {
        fail(failure())
    }
}

fn fixture(name: &str) -> serde_json::Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    serde_json::from_str(&std::fs::read_to_string(&path).expect("fixture readable"))
        .expect("fixture is json")
}

fn names(k: usize) -> Vec<String> {
    (1..=k).map(|i| i.to_string()).collect()
}

fn c1_sixths() -> Outcome {
    let mut z6: Vec<Character> = (0..6).map(|k| Character::of(k, 6)).collect();
    z6.sort_by(cmp_factorial_scalar);
    let want: Vec<Character> = [5, 2, 4, 1, 3, 0]
        .iter()
        .map(|&k| Character::of(k, 6))
        .collect();
    if z6 != want {
        let got: Vec<String> = z6.iter().map(ToString::to_string).collect();
        return fail(format!("Z_6 sorted as {}", got.join(", ")));
    }
    let chain = [
        Character::of(1, 24),
        Character::of(2, 6),
        Character::of(4, 6),
        Character::of(1, 2),
    ];
    let strict = chain
        .windows(2)
        .all(|w| cmp_factorial_scalar(&w[0], &w[1]) == Ordering::Less);
    check(
        strict,
        "-5/6 < -2/6 < -4/6 < -1/6 < -3/6 < 0 and -1/24 < -2/6 < -4/6 < -1/2",
        || "the four-term chain is not strictly increasing".into(),
    )
}

fn c2_order_axioms() -> Outcome {
    for n in 1..=6 {
        let r = order_oracle(n, false);
        if !r.passed {
            return fail(format!("n = {n}: {:?}", r.counterexample));
        }
    }
    ok("comparator matches the fiber-recursion chain on every pair, n <= 6, and restricts")
}

fn c3_partition() -> Outcome {
    // brute tuple bucketing where the boxes are small
    let brute = partition_oracle(6, 3);
    if !brute.passed {
        return fail(format!("{:?}", brute.counterexample));
    }
    // the identity itself and the library counts for every vector
    let mut vectors = 0;
    for len in 1..=5usize {
        let total = 6u64.pow(len as u32);
        for code in 0..total {
            let r: Vec<u64> = (0..len)
                .map(|i| code / 6u64.pow(i as u32) % 6 + 1)
                .collect();
            let mut sum = BigUint::from(0u32);
            let mut formula = 0u64;
            for mask in 0u32..1 << len {
                let support: Vec<usize> = (0..len).filter(|&j| mask >> j & 1 == 1).collect();
                formula += support.iter().map(|&j| r[j] - 1).product::<u64>();
                sum += count_characters(&r, &support, true, None).expect("valid levels");
            }
            let prod: u64 = r.iter().product();
            if formula != prod || sum != BigUint::from(prod) {
                return fail(format!(
                    "r = {r:?}: formula {formula}, library {sum}, product {prod}"
                ));
            }
            vectors += 1;
        }
    }
    ok(format!(
        "{vectors} level vectors, brute bucketing up to |I| = 3"
    ))
}

fn c4_kummer() -> Outcome {
    let fixtures = kummer_fixtures();
    if fixtures.len() < 10 {
        return fail(format!("only {} fixtures", fixtures.len()));
    }
    let res = kummer_oracle(&fixtures, false);
    if !res.passed {
        return fail(format!("{:?}", res.counterexample));
    }
    let factors = |name: &str| -> Vec<BigUint> {
        let m = &fixtures
            .iter()
            .find(|(n, _)| n == name)
            .expect("named fixture")
            .1;
        m.canonical_kummer_extension()
            .expect("simplicial")
            .quotient_invariant_factors
    };
    let a1 = factors("A1");
    let third = factors("one-third chart");
    check(
        a1 == vec![BigUint::from(2u32)] && third == vec![BigUint::from(3u32)],
        format!(
            "{} fixtures minimal; A1 quotient [2], 1/3 quotient [3]",
            fixtures.len()
        ),
        || format!("A1 quotient {a1:?}, 1/3 quotient {third:?}"),
    )
}

fn c5_tower() -> Outcome {
    let complexes = [
        SncComplex::all_nonempty(names(1), 1).expect("fixture"),
        SncComplex::all_nonempty(names(2), 2).expect("fixture"),
        SncComplex::all_nonempty(names(3), 3).expect("fixture"),
    ];
    for c in &complexes {
        for n in 2..=6 {
            match embedding_check(c, n) {
                Ok(r) if r.passed() => {}
                Ok(r) => {
                    return fail(format!(
                        "{} components, n = {n}: {:?}",
                        c.len(),
                        r.violations.first()
                    ))
                }
                Err(e) => return fail(format!("{} components, n = {n}: {e}", c.len())),
            }
        }
    }
    ok("1, 2 and 3 components, 2 <= n <= 6")
}

fn c6_ranks() -> Outcome {
    let line = SncComplex::all_nonempty(vec!["pt".into()], 1).expect("fixture");
    let v = Assignment::ints(&[("X", 2), ("pt", 1)]);
    for r in 1..=12 {
        let expected = weighted_projective_collection(&[1, r]).len() as i64;
        let total = decompose_finite(&line, &[r], &v).map(|rep| rep.total);
        if total != Ok(Value::int(expected)) || expected != r as i64 + 1 {
            return fail(format!(
                "r = {r}: {total:?}, collection of length {expected}"
            ));
        }
    }
    let plane = SncComplex::from_divisors(
        names(3),
        &[
            vec!["1".into(), "2".into()],
            vec!["1".into(), "3".into()],
            vec!["2".into(), "3".into()],
        ],
        &[],
    )
    .expect("fixture");
    let ranks = Assignment::ints(&[
        ("X", 3),
        ("D_{1}", 2),
        ("D_{2}", 2),
        ("D_{3}", 2),
        ("D_{1,2}", 1),
        ("D_{1,3}", 1),
        ("D_{2,3}", 1),
    ]);
    let total = decompose_finite(&plane, &[2, 2, 2], &ranks).map(|rep| rep.total);
    check(
        total == Ok(Value::int(12)),
        "P^1 gives r + 1 for r <= 12; P^2 gives 12",
        || format!("P^2 total {total:?}"),
    )
}

fn c7_divergence() -> Outcome {
    let report = match bls_divergence(3) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string()),
    };
    let (Ok(one_step), Ok(tower)) = (psod_bls(6), psod_single(3)) else {
        return fail("descriptor construction failed");
    };
    let a: BTreeSet<CharVector> = one_step.characters().into_iter().collect();
    let b: BTreeSet<CharVector> = tower.characters().into_iter().collect();
    let flagged = report.flagged == vec![Character::of(3, 6)];
    let orders_differ = one_step.characters() != tower.characters();
    check(
        a == b && report.same_labels && !report.same_order && orders_differ && flagged,
        "same labels, -3/6 flagged, orders differ",
        || format!("{report:?}"),
    )
}

fn c8_strictification() -> Outcome {
    let nc = |name: &str| -> NcComplex {
        serde_json::from_value(fixture(name)["nc"].clone()).expect("nc fixture")
    };
    let mut seen = Vec::new();
    for (name, steps, crossings) in [("nodal.json", 1, 2), ("two_nodes.json", 2, 4)] {
        let s = match strictification(&nc(name)) {
            Ok(s) => s,
            Err(e) => return fail(format!("{name}: {e}")),
        };
        let simple = s.crossings.iter().all(|x| x.is_simple());
        if s.log.len() != steps || s.crossings.len() != crossings || !simple {
            return fail(format!(
                "{name}: {} steps, {} crossings, simple = {simple}",
                s.log.len(),
                s.crossings.len()
            ));
        }
        seen.push(format!("{name} {steps} step(s) / {crossings} crossings"));
    }
    ok(seen.join(", "))
}

fn c9_fixed_locus() -> Outcome {
    let scene = fixture("a1_surface.json");
    let chart: SimplicialChart =
        serde_json::from_value(scene["simplicial"].clone()).expect("chart fixture");
    let g: Assignment =
        serde_json::from_value(scene["assignment"].clone()).expect("assignment fixture");
    let report = match decompose_simplicial_complexified(&chart, &g, 2) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string()),
    };
    let origin = report.multiplicity("D_{1,2}").cloned();
    if origin != Some(BigUint::from(2u32)) {
        return fail(format!("origin coefficient {origin:?}"));
    }
    let c = SncComplex::all_nonempty(names(2), 2).expect("fixture");
    for n in 1..=4u64 {
        let r = factorial_u64(n).expect("small");
        let trivial =
            decompose_fixed_locus(&c, &FixedLocusData::trivial(2), &g, r).map(|x| x.total);
        let kfl = decompose_kfl(&c, &g, n).map(|x| x.total);
        if trivial != kfl {
            return fail(format!(
                "n = {n}: trivial group {trivial:?}, truncation {kfl:?}"
            ));
        }
    }
    ok("origin coefficient 2; trivial group equals the truncated formula for n <= 4")
}

fn c10_prime_filter() -> Outcome {
    let d = SncComplex::all_nonempty(vec!["D".into()], 1).expect("fixture");
    let v = Assignment::ints(&[("X", 0), ("D", 1)]);
    let at_four = decompose_finite(&d, &[4], &v).and_then(|rep| etale_filter(&rep, 2));
    match &at_four {
        Ok(rep)
            if rep.multiplicity("D_{D}") == Some(&BigUint::from(0u32))
                && rep.total == Value::int(0) => {}
        other => return fail(format!("level 4, p = 2: {other:?}")),
    }
    for p in [2u64, 3, 5, 7] {
        for r in 1..=60u64 {
            let full = decompose_finite(&d, &[r], &v).expect("valid");
            let filtered = etale_filter(&full, p).expect("prime");
            let m =
                |rep: &logsod::invariants::DecompositionReport| rep.rows[0].multiplicity.clone();
            if m(&filtered) > m(&full) {
                return fail(format!(
                    "r = {r}, p = {p}: {} filtered above {} unfiltered",
                    m(&filtered),
                    m(&full)
                ));
            }
        }
    }
    ok("level 4 with p = 2 has multiplicity 0; filtered <= unfiltered for r <= 60")
}

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "1 factorial order on Z_6",
            c1_sixths,
            Some(Duration::from_millis(1)),
        ),
        (
            "2 order axioms n <= 6",
            c2_order_axioms,
            Some(Duration::from_secs(10)),
        ),
        (
            "3 partition identity",
            c3_partition,
            Some(Duration::from_secs(5)),
        ),
        (
            "4 Kummer minimality",
            c4_kummer,
            Some(Duration::from_secs(30)),
        ),
        (
            "5 tower compatibility",
            c5_tower,
            Some(Duration::from_secs(60)),
        ),
        ("6 K-theory ranks", c6_ranks, Some(Duration::from_secs(1))),
        ("7 one-step divergence", c7_divergence, None),
        (
            "8 strictification",
            c8_strictification,
            Some(Duration::from_secs(1)),
        ),
        ("9 fixed-locus truncation", c9_fixed_locus, None),
        ("10 prime-to-p filter", c10_prime_filter, None),
    ];
    let mut failures = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let passed = outcome.passed && in_time;
        if !passed {
            failures += 1;
        }
        let budget = limit.map_or(String::new(), |l| format!(" (limit {l:?})"));
        let late = if in_time {
            String::new()
        } else {
            " over time limit;".into()
        };
        println!(
            "{} criterion {name}: {}{late} [{elapsed:.2?}{budget}]",
            if passed { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    println!("{} of 10 criteria passed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
