//! Brute-force cross-checks. Each oracle recomputes a quantity by a route
//! that shares no code with the production path and compares the two.

use crate::invariants::{decompose_finite, etale_filter, Assignment, Value};
use crate::monoid::{KummerExtension, ToricMonoid};
use crate::orders::{cmp_factorial_scalar, count_characters, factorial_u64, Character};
use crate::psod::{check_embedding, embedding_check, psod_infinite};
use crate::strata::SncComplex;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub name: String,
    pub passed: bool,
    /// Number of individual comparisons made.
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl OracleResult {
    fn new(name: &str) -> Self {
        OracleResult {
            name: name.into(),
            passed: true,
            checked: 0,
            counterexample: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.passed {
            self.passed = false;
            self.counterexample = Some(what());
        }
    }
}

/// Deliberate corruption of one oracle's production input, for negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    Order,
    Kummer,
    Tower,
}

impl std::str::FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "order" => Ok(Fault::Order),
            "kummer" => Ok(Fault::Kummer),
            "tower" => Ok(Fault::Tower),
            _ => Err(format!("unknown fault {s:?}")),
        }
    }
}

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

/// `(Z_{n!}, <=!)` as a list, built by the fiber recursion: every element of
/// the previous level spawns `y - d/n!` for `d = n-1, .., 0`, largest shift first.
pub fn factorial_chain(n: u64) -> Vec<BigRational> {
    let mut chain = vec![BigRational::zero()];
    let mut fact = BigInt::one();
    for k in 2..=n {
        fact *= BigInt::from(k);
        let mut next = Vec::with_capacity(chain.len() * k as usize);
        for d in (0..k).rev() {
            let shift = BigRational::new(BigInt::from(d), fact.clone());
            next.extend(chain.iter().map(|y| y - &shift));
        }
        chain = next;
    }
    chain
}

fn char_value(c: &Character) -> BigRational {
    -q(c.numerator() as i64, c.denominator() as i64)
}

/// The production order on `Z_{n!}` against [`factorial_chain`], for every
/// pair, together with restriction to `Z_{(n-1)!}`.
pub fn order_oracle(n: u64, fault: bool) -> OracleResult {
    let mut res = OracleResult::new(&format!("factorial order on Z_{{{n}!}}"));
    let chain = factorial_chain(n);
    let r = factorial_u64(n).expect("small level");
    let mut sorted: Vec<Character> = (0..r).map(|k| Character::of(k, r)).collect();
    sorted.sort_by(cmp_factorial_scalar);
    if fault && sorted.len() > 2 {
        sorted.swap(0, 1);
    }
    let values: Vec<BigRational> = sorted.iter().map(char_value).collect();
    for (i, (a, b)) in values.iter().zip(&chain).enumerate() {
        res.check(a == b, || {
            format!("position {i}: production {a}, chain {b}")
        });
    }
    // pairwise: the comparator agrees with chain positions, so it is a total order
    let position: std::collections::HashMap<&BigRational, usize> =
        chain.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let elems: Vec<Character> = (0..r).map(|k| Character::of(k, r)).collect();
    for x in &elems {
        let px = position[&char_value(x)];
        for y in &elems {
            let py = position[&char_value(y)];
            let c = cmp_factorial_scalar(x, y);
            res.check(
                c == px.cmp(&py) && c == cmp_factorial_scalar(y, x).reverse(),
                || format!("{x} vs {y}: {c:?}, chain positions {px} and {py}"),
            );
        }
    }
    if n >= 2 {
        let lower = factorial_chain(n - 1);
        let r_low = BigInt::from(factorial_u64(n - 1).expect("small level"));
        let restricted: Vec<&BigRational> = chain
            .iter()
            .filter(|x| (&r_low % x.denom()).is_zero())
            .collect();
        res.check(
            restricted.len() == lower.len() && restricted.iter().zip(&lower).all(|(a, b)| *a == b),
            || {
                format!(
                    "restriction of Z_{{{n}!}} to Z_{{{}!}} differs from the lower chain",
                    n - 1
                )
            },
        );
    }
    res
}

/// `sum over J of prod_{j in J}(r_j - 1) = prod r_j`, counting tuples by support.
pub fn partition_oracle(max_entry: u64, max_len: usize) -> OracleResult {
    let mut res = OracleResult::new("partition identity");
    for len in 1..=max_len {
        let mut r = vec![1u64; len];
        loop {
            // brute count of tuples in prod Z_{r_j}, bucketed by support mask
            let mut buckets = vec![0u64; 1 << len];
            let mut k = vec![0u64; len];
            loop {
                let mask = (0..len)
                    .filter(|&j| k[j] != 0)
                    .fold(0usize, |m, j| m | 1 << j);
                buckets[mask] += 1;
                let mut i = 0;
                while i < len {
                    k[i] += 1;
                    if k[i] < r[i] {
                        break;
                    }
                    k[i] = 0;
                    i += 1;
                }
                if i == len {
                    break;
                }
            }
            let total: u64 = r.iter().product();
            for (mask, &count) in buckets.iter().enumerate() {
                let support: Vec<usize> = (0..len).filter(|&j| mask >> j & 1 == 1).collect();
                let formula: u64 = support.iter().map(|&j| r[j] - 1).product();
                let prod = count_characters(&r, &support, true, None).ok();
                res.check(count == formula && prod == Some(BigUint::from(count)), || {
                    format!("r = {r:?}, J = {support:?}: {count} tuples, formula {formula}, library {prod:?}")
                });
            }
            res.check(buckets.iter().sum::<u64>() == total, || {
                format!("r = {r:?}: buckets do not sum to {total}")
            });
            let mut i = 0;
            while i < len {
                r[i] += 1;
                if r[i] <= max_entry {
                    break;
                }
                r[i] = 1;
                i += 1;
            }
            if i == len {
                break;
            }
        }
    }
    res
}

fn det(m: &[Vec<i128>]) -> i128 {
    // Bareiss elimination, exact over the integers
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    go(0, m, k, &mut cur, &mut out);
    out
}

/// Index of the lattice spanned by `gens` in `Z^n`: the gcd of maximal minors
/// (0 if the span is not full rank).
pub fn lattice_index(gens: &[Vec<i128>], n: usize) -> i128 {
    subsets(gens.len(), n).iter().fold(0i128, |g, s| {
        let rows: Vec<Vec<i128>> = s.iter().map(|&i| gens[i].clone()).collect();
        g.gcd(&det(&rows))
    })
}

fn primitive(v: &[i128]) -> Vec<i128> {
    let g = v.iter().fold(0i128, |g, x| g.gcd(x));
    v.iter().map(|x| x / g).collect()
}

/// Extremal ray directions of the cone over `gens`, assumed pointed. A
/// direction is dropped when it is a nonnegative combination of at most `n`
/// linearly independent other directions, which suffices by Caratheodory.
pub fn extremal_rays_by_exclusion(gens: &[Vec<i128>], n: usize) -> Vec<Vec<i128>> {
    let mut dirs: Vec<Vec<i128>> = Vec::new();
    for g in gens {
        let p = primitive(g);
        if !dirs.contains(&p) {
            dirs.push(p);
        }
    }
    let mut rays: Vec<Vec<i128>> = (0..dirs.len())
        .filter(|&i| {
            let others: Vec<&Vec<i128>> = dirs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v)
                .collect();
            !(1..=n.min(others.len())).any(|k| {
                subsets(others.len(), k).iter().any(|s| {
                    let cols: Vec<&Vec<i128>> = s.iter().map(|&j| others[j]).collect();
                    in_cone_of(&dirs[i], &cols, n)
                })
            })
        })
        .map(|i| dirs[i].clone())
        .collect();
    rays.sort();
    rays
}

// u = sum of lambda_s * cols[s] with lambda >= 0, for independent cols
fn in_cone_of(u: &[i128], cols: &[&Vec<i128>], n: usize) -> bool {
    let k = cols.len();
    for rows in subsets(n, k) {
        let minor = |replace: Option<usize>| -> i128 {
            let m: Vec<Vec<i128>> = rows
                .iter()
                .map(|&r| {
                    (0..k)
                        .map(|c| if replace == Some(c) { u[r] } else { cols[c][r] })
                        .collect()
                })
                .collect();
            det(&m)
        };
        let d = minor(None);
        if d == 0 {
            continue;
        }
        let num: Vec<i128> = (0..k).map(|c| minor(Some(c))).collect();
        let fits = (0..n).all(|r| d * u[r] == (0..k).map(|c| num[c] * cols[c][r]).sum::<i128>());
        return fits && num.iter().all(|x| x.signum() * d.signum() >= 0);
    }
    false
}

fn to_i128(v: &[BigInt]) -> Vec<i128> {
    v.iter()
        .map(|x| x.to_i128().expect("small fixture"))
        .collect()
}

/// Minimal free Kummer extensions: the output root orders contain the monoid,
/// and no smaller root orders in the box below them do.
pub fn kummer_oracle(fixtures: &[(String, ToricMonoid)], fault: bool) -> OracleResult {
    let mut res = OracleResult::new("Kummer minimality");
    for (name, m) in fixtures {
        let ext = match m.canonical_kummer_extension() {
            Ok(e) => e,
            Err(e) => {
                res.check(false, || format!("{name}: {e}"));
                continue;
            }
        };
        let mut c: Vec<u64> = ext
            .root_orders
            .iter()
            .map(|x| x.to_u64().expect("small"))
            .collect();
        if fault {
            if let Some(first) = c.first_mut() {
                *first *= 2;
            }
        }
        check_kummer(&mut res, name, m, &ext, &c);
    }
    res
}

fn check_kummer(
    res: &mut OracleResult,
    name: &str,
    m: &ToricMonoid,
    ext: &KummerExtension,
    c: &[u64],
) {
    let n = m.rank();
    let gens: Vec<Vec<i128>> = m.generators().iter().map(|g| to_i128(&g.0)).collect();
    let base_index = lattice_index(&gens, n);
    if base_index == 0 {
        res.check(false, || {
            format!("{name}: generators do not span a full-rank lattice")
        });
        return;
    }
    // primitive ray generators inside the group lattice
    let rays: Vec<Vec<i128>> = extremal_rays_by_exclusion(&gens, n)
        .into_iter()
        .map(|u| {
            (1..=1000)
                .map(|k| u.iter().map(|x| x * k).collect::<Vec<i128>>())
                .find(|v| {
                    let mut with = gens.clone();
                    with.push(v.clone());
                    lattice_index(&with, n) == base_index
                })
                .expect("some multiple lies in the lattice")
        })
        .collect();
    let mut produced: Vec<Vec<i128>> = ext.rays.iter().map(|r| to_i128(&r.0)).collect();
    produced.sort();
    let mut expected = rays.clone();
    expected.sort();
    res.check(produced == expected, || {
        format!("{name}: rays {produced:?}, oracle found {expected:?}")
    });
    if produced != expected || rays.len() != n {
        return;
    }
    let d = det(&produced);
    // Cramer: coordinates of each generator in the ray basis
    let coords: Vec<Vec<BigRational>> = gens
        .iter()
        .map(|g| {
            (0..n)
                .map(|j| {
                    let mut m = produced.clone();
                    m[j] = g.clone();
                    BigRational::new(det(&m).into(), d.into())
                })
                .collect()
        })
        .collect();
    let contains = |cv: &[u64]| {
        coords.iter().all(|a| {
            a.iter().zip(cv).all(|(x, &cj)| {
                let y = x * BigRational::from_integer(cj.into());
                y.is_integer() && !y.is_negative()
            })
        })
    };
    res.check(contains(c), || {
        format!("{name}: root orders {c:?} do not contain the monoid")
    });
    let mut box_point = vec![1u64; n];
    loop {
        if box_point.as_slice() != c {
            let ok = !contains(&box_point);
            res.check(ok, || {
                format!("{name}: smaller root orders {box_point:?} already contain the monoid")
            });
        }
        let mut i = 0;
        while i < n {
            box_point[i] += 1;
            if box_point[i] <= c[i] {
                break;
            }
            box_point[i] = 1;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    // [target lattice : P^gp] = index(P^gp) * prod c / |det(rays)|
    let prod_c: i128 = c.iter().map(|&x| x as i128).product();
    let group = base_index * prod_c / d.abs();
    let reported: BigUint = ext.group_order();
    res.check(BigUint::from(group as u128) == reported, || {
        format!("{name}: quotient of order {reported}, lattice indices give {group}")
    });
}

/// Simplicial monoids of rank at most 3. Entries flagged `true` are cones,
/// saturated in the ambient lattice; the others are monoids already saturated
/// in their own group.
pub fn kummer_fixtures() -> Vec<(String, ToricMonoid)> {
    let cones: Vec<(&str, usize, bool, Vec<Vec<i64>>)> = vec![
        ("free rank 1", 1, true, vec![vec![1]]),
        ("free rank 2", 2, true, vec![vec![1, 0], vec![0, 1]]),
        (
            "free rank 3",
            3,
            true,
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        ),
        ("A1", 2, false, vec![vec![2, 0], vec![1, 1], vec![0, 2]]),
        ("one-third chart", 2, true, vec![vec![1, 0], vec![1, 3]]),
        ("one-fifth 2", 2, true, vec![vec![1, 0], vec![2, 5]]),
        ("cone (0,1),(2,3)", 2, true, vec![vec![0, 1], vec![2, 3]]),
        ("cone (1,0),(1,4)", 2, true, vec![vec![1, 0], vec![1, 4]]),
        (
            "A1 x N",
            3,
            false,
            vec![vec![2, 0, 0], vec![1, 1, 0], vec![0, 2, 0], vec![0, 0, 1]],
        ),
        (
            "index four",
            3,
            false,
            vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2], vec![1, 1, 1]],
        ),
        (
            "cone (1,0,0),(0,1,0),(1,1,3)",
            3,
            true,
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 3]],
        ),
        (
            "cone (1,0,0),(0,1,0),(1,2,2)",
            3,
            true,
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 2, 2]],
        ),
        ("rank 1 even", 1, true, vec![vec![2]]),
    ];
    cones
        .into_iter()
        .map(|(name, rank, cone, gens)| {
            let refs: Vec<&[i64]> = gens.iter().map(Vec::as_slice).collect();
            let m = ToricMonoid::from_i64(rank, &refs).expect("fixture");
            let m = if cone {
                m.saturate().expect("fixture saturates")
            } else {
                m
            };
            debug_assert!(m.is_saturated().expect("fixture"));
            (name.to_string(), m)
        })
        .collect()
}

/// The library's extremal rays against [`extremal_rays_by_exclusion`].
pub fn rays_oracle(fixtures: &[(String, ToricMonoid)]) -> OracleResult {
    let mut res = OracleResult::new("extremal rays");
    for (name, m) in fixtures {
        let gens: Vec<Vec<i128>> = m.generators().iter().map(|g| to_i128(&g.0)).collect();
        let mut found: Vec<Vec<i128>> = extremal_rays_by_exclusion(&gens, m.rank());
        found.sort();
        match m.extremal_rays() {
            Ok(rays) => {
                let mut dirs: Vec<Vec<i128>> =
                    rays.iter().map(|r| primitive(&to_i128(&r.0))).collect();
                dirs.sort();
                res.check(dirs == found, || {
                    format!("{name}: library {dirs:?}, oracle {found:?}")
                });
            }
            Err(e) => res.check(false, || format!("{name}: {e}")),
        }
    }
    res
}

fn complexes() -> Vec<(String, SncComplex)> {
    let names = |k: usize| (1..=k).map(|i| i.to_string()).collect::<Vec<_>>();
    let p2 = SncComplex::from_divisors(
        names(3),
        &[
            names(2),
            vec!["1".into(), "3".into()],
            vec!["2".into(), "3".into()],
        ],
        &[],
    )
    .expect("fixture");
    vec![
        (
            "single divisor".into(),
            SncComplex::all_nonempty(names(1), 1).expect("fixture"),
        ),
        (
            "two components".into(),
            SncComplex::all_nonempty(names(2), 2).expect("fixture"),
        ),
        (
            "three components".into(),
            SncComplex::all_nonempty(names(3), 3).expect("fixture"),
        ),
        ("triangle".into(), p2),
    ]
}

/// Tower compatibility for `2 <= n <= max_n`: the library check, plus explicit
/// descriptor comparison where the upper level is small.
pub fn tower_oracle(max_n: u64, fault: bool) -> OracleResult {
    let mut res = OracleResult::new("tower embedding");
    for (name, c) in complexes() {
        for n in 2..=max_n {
            match embedding_check(&c, n) {
                Ok(r) => res.check(r.passed(), || {
                    format!("{name}, n = {n}: {:?}", r.violations.first())
                }),
                Err(e) => res.check(false, || format!("{name}, n = {n}: {e}")),
            }
            let upper_size = factorial_u64(n).map(|r| (r as u128).pow(c.len() as u32));
            if upper_size.is_some_and(|s| s <= 3000) {
                let (Ok(low), Ok(mut up)) = (psod_infinite(&c, n - 1), psod_infinite(&c, n)) else {
                    res.check(false, || format!("{name}, n = {n}: descriptor failed"));
                    continue;
                };
                if fault && up.len() > 1 {
                    let last = up.len() - 1;
                    up.labels.swap(0, last);
                }
                let r = check_embedding(&low, &up);
                res.check(r.passed(), || {
                    format!("{name}, n = {n}: {:?}", r.violations.first())
                });
            }
        }
    }
    res
}

/// Length of the collection `O, O(1), .., O(w_0 + .. + w_k - 1)` on the
/// weighted projective line with weights `w`.
pub fn weighted_projective_collection(weights: &[u64]) -> Vec<u64> {
    (0..weights.iter().sum()).collect()
}

/// The r-th root of `(P^1, point)` is the weighted line with weights `(1, r)`.
pub fn projective_line_oracle(max_r: u64) -> OracleResult {
    let mut res = OracleResult::new("projective line counts");
    let c = SncComplex::all_nonempty(vec!["pt".into()], 1).expect("fixture");
    let v = Assignment::ints(&[("X", 2), ("pt", 1)]);
    for r in 1..=max_r {
        let expected = weighted_projective_collection(&[1, r]).len() as i64;
        match decompose_finite(&c, &[r], &v) {
            Ok(rep) => res.check(rep.total == Value::int(expected), || {
                format!("r = {r}: total {}, collection {expected}", rep.total)
            }),
            Err(e) => res.check(false, || format!("r = {r}: {e}")),
        }
    }
    res
}

/// Prime-to-p counts by direct enumeration of `k/r`.
pub fn prime_filter_oracle(max_r: u64) -> OracleResult {
    let mut res = OracleResult::new("prime-to-p filter");
    let c = SncComplex::all_nonempty(vec!["D".into()], 1).expect("fixture");
    let v = Assignment::ints(&[("X", 0), ("D", 1)]);
    for p in [2u64, 3, 5, 7] {
        for r in 1..=max_r {
            let brute = (1..r).filter(|&k| (r / k.gcd(&r)) % p != 0).count() as i64;
            let unfiltered = r as i64 - 1;
            let rep = decompose_finite(&c, &[r], &v).and_then(|rep| etale_filter(&rep, p));
            match rep {
                Ok(f) => res.check(f.total == Value::int(brute) && brute <= unfiltered, || {
                    format!("r = {r}, p = {p}: report {}, enumeration {brute}", f.total)
                }),
                Err(e) => res.check(false, || format!("r = {r}, p = {p}: {e}")),
            }
        }
    }
    res
}

/// Every oracle at the given exhaustive level.
pub fn run_all(level: u64, fault: Option<Fault>) -> Vec<OracleResult> {
    let fixtures = kummer_fixtures();
    let mut out = vec![
        rays_oracle(&fixtures),
        kummer_oracle(&fixtures, fault == Some(Fault::Kummer)),
    ];
    let mut order = OracleResult::new(&format!("factorial order up to level {level}"));
    for n in 1..=level {
        let r = order_oracle(n, fault == Some(Fault::Order) && n == level);
        order.checked += r.checked;
        if !r.passed && order.passed {
            order.passed = false;
            order.counterexample = r.counterexample;
        }
    }
    out.push(order);
    out.push(partition_oracle(6, if level >= 5 { 5 } else { 4 }));
    out.push(tower_oracle(level.max(2), fault == Some(Fault::Tower)));
    out.push(projective_line_oracle(12));
    out.push(prime_filter_oracle(24));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_level_three() {
        let want: Vec<BigRational> = [5, 2, 4, 1, 3, 0].iter().map(|&k| -q(k, 6)).collect();
        assert_eq!(factorial_chain(3), want);
        assert_eq!(factorial_chain(1), vec![BigRational::zero()]);
    }

    #[test]
    fn determinants() {
        assert_eq!(det(&[vec![2, 0], vec![1, 1]]), 2);
        assert_eq!(det(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(lattice_index(&[vec![2, 0], vec![1, 1], vec![0, 2]], 2), 2);
    }

    #[test]
    fn exclusion_finds_square_rays() {
        let gens = vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 1]];
        assert_eq!(extremal_rays_by_exclusion(&gens, 3).len(), 4);
        let redundant = vec![vec![1, 0], vec![1, 1], vec![0, 1]];
        assert_eq!(
            extremal_rays_by_exclusion(&redundant, 2),
            vec![vec![0, 1], vec![1, 0]]
        );
    }

    #[test]
    fn all_pass_small() {
        for r in run_all(3, None) {
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn faults_detected() {
        assert!(!order_oracle(3, true).passed);
        let fixtures = kummer_fixtures();
        assert!(!kummer_oracle(&fixtures, true).passed);
        assert!(!tower_oracle(3, true).passed);
    }
}
