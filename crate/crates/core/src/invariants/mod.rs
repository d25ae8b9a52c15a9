//! Splitting of additive invariants along strata: each nonempty stratum
//! contributes its value once per nontrivial character supported on it.

mod value;

pub use value::{Assignment, InvariantKind, Value, ValueSystem};

use crate::json;
use crate::orders::{factorial_u64, is_prime, prime_to_part, OrderError};
use crate::psod::{aggregate, Level, PsodError};
use crate::strata::{
    canonical_root_pair, fixed_locus_index, strictification, FixedLocusData, NcComplex,
    SimplicialChart, SncComplex, StrataError,
};
use num_bigint::BigUint;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("no value for stratum {0}")]
    MissingValue(String),
    #[error("assignment names {0:?}, which is not a stratum of the input")]
    UnknownLabel(String),
    #[error("incompatible values: {0}")]
    ValueMismatch(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("level {0} is too large")]
    LevelTooLarge(String),
    #[error(transparent)]
    Psod(#[from] PsodError),
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    Finite,
    Kfl,
    Nc,
    Simplicial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub stratum: String,
    #[serde(with = "json::nat")]
    pub multiplicity: BigUint,
    /// Multiplicity as a function of the truncation level, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counting_function: Option<String>,
    pub value: Value,
    pub contribution: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Inputs {
    Finite {
        complex: SncComplex,
        levels: Vec<u64>,
    },
    Kfl {
        complex: SncComplex,
        n: u64,
    },
    Nc {
        nc: NcComplex,
        n: u64,
    },
    Fixed {
        complex: SncComplex,
        fixed: FixedLocusData,
        r: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub kind: ReportKind,
    pub invariant: InvariantKind,
    pub value_system: ValueSystem,
    pub level: Level,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub prime_to: Vec<u64>,
    pub base: Value,
    pub rows: Vec<Row>,
    pub total: Value,
    pub trace: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Counts depend on the chosen strictification.
    pub construction_dependent: bool,
    #[serde(skip)]
    inputs: Inputs,
    #[serde(skip)]
    assignment: Assignment,
}

impl DecompositionReport {
    pub fn multiplicity(&self, stratum: &str) -> Option<&BigUint> {
        self.rows
            .iter()
            .find(|r| r.stratum == stratum)
            .map(|r| &r.multiplicity)
    }

    /// Aligned text table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let level = match &self.level {
            Level::Truncation(n) => format!("truncation n = {n}"),
            Level::Finite(r) => format!("level r = {r:?}"),
        };
        let _ = writeln!(
            out,
            "{:?} decomposition of {:?} ({level})",
            self.kind, self.invariant
        );
        if !self.prime_to.is_empty() {
            let _ = writeln!(out, "characters prime to {:?}", self.prime_to);
        }
        let header = [
            "stratum",
            "multiplicity",
            "counting",
            "value",
            "contribution",
        ];
        let mut table: Vec<[String; 5]> = vec![header.map(String::from)];
        table.push([
            "X".into(),
            "1".into(),
            String::new(),
            self.base.to_string(),
            self.base.to_string(),
        ]);
        for r in &self.rows {
            table.push([
                r.stratum.clone(),
                r.multiplicity.to_string(),
                r.counting_function.clone().unwrap_or_default(),
                r.value.to_string(),
                r.contribution.to_string(),
            ]);
        }
        let widths: Vec<usize> = (0..5)
            .map(|k| {
                table
                    .iter()
                    .map(|row| row[k].chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        for row in &table {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        }
        let _ = writeln!(out, "total = {}", self.total);
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

fn effective(r: u64, primes: &[u64]) -> u64 {
    primes.iter().fold(r, |acc, &p| prime_to_part(acc, p))
}

fn factorial(n: u64) -> Result<u64, InvariantError> {
    factorial_u64(n).ok_or_else(|| InvariantError::LevelTooLarge(format!("{n}!")))
}

/// Keys under which the value of `D_J` may be given.
fn keys_for(c: &SncComplex, j: &[usize]) -> Vec<String> {
    let mut keys = vec![c.stratum_label(j), c.display(j)];
    if j.len() == 1 {
        keys.push(c.components()[j[0]].clone());
    }
    keys.dedup();
    keys
}

fn lookup(v: &Assignment, keys: &[String]) -> Result<Value, InvariantError> {
    keys.iter()
        .find_map(|k| v.get(k).cloned())
        .ok_or_else(|| InvariantError::MissingValue(keys[0].clone()))
}

fn check_labels(v: &Assignment, allowed: &BTreeSet<String>) -> Result<(), InvariantError> {
    match v.values.keys().find(|k| !allowed.contains(*k)) {
        Some(k) => Err(InvariantError::UnknownLabel(k.clone())),
        None => Ok(()),
    }
}

fn snc_labels(c: &SncComplex) -> BTreeSet<String> {
    let mut all = BTreeSet::from(["X".to_string()]);
    for j in c.strata() {
        all.extend(keys_for(c, &j));
    }
    for j in c.minimal_empty() {
        all.extend(keys_for(c, &j));
    }
    all
}

struct Term {
    stratum: String,
    multiplicity: BigUint,
    counting: Option<String>,
    value: Value,
}

#[allow(clippy::too_many_arguments)]
fn finish(
    kind: ReportKind,
    level: Level,
    primes: Vec<u64>,
    v: &Assignment,
    inputs: Inputs,
    terms: Vec<Term>,
    notes: Vec<String>,
    construction_dependent: bool,
) -> Result<DecompositionReport, InvariantError> {
    let base = lookup(v, &["X".into()])?;
    let mut total = base.clone();
    let mut trace = base.to_string();
    let mut rows = Vec::with_capacity(terms.len());
    for t in terms {
        let contribution = t.value.scale(&t.multiplicity);
        total = total.add(&contribution)?;
        let _ = write!(trace, " + {}*{}", t.multiplicity, t.value);
        rows.push(Row {
            stratum: t.stratum,
            multiplicity: t.multiplicity,
            counting_function: t.counting,
            value: t.value,
            contribution,
        });
    }
    let _ = write!(trace, " = {total}");
    Ok(DecompositionReport {
        kind,
        invariant: v.invariant,
        value_system: v.value_system,
        level,
        prime_to: primes,
        base,
        rows,
        total,
        trace,
        notes,
        construction_dependent,
        inputs,
        assignment: v.clone(),
    })
}

fn power_label(var: &str, k: usize) -> String {
    match k {
        0 => "1".into(),
        1 => format!("({var}-1)"),
        _ => format!("({var}-1)^{k}"),
    }
}

fn snc_terms(
    c: &SncComplex,
    levels: &[u64],
    v: &Assignment,
    counting: Option<&str>,
) -> Result<Vec<Term>, InvariantError> {
    let mut terms = Vec::new();
    for j in c.strata().into_iter().filter(|j| !j.is_empty()) {
        let multiplicity: BigUint = j.iter().map(|&i| BigUint::from(levels[i] - 1)).product();
        terms.push(Term {
            stratum: c.stratum_label(&j),
            multiplicity,
            counting: counting.map(|var| power_label(var, j.len())),
            value: lookup(v, &keys_for(c, &j))?,
        });
    }
    Ok(terms)
}

fn empty_notes(c: &SncComplex) -> Vec<String> {
    c.minimal_empty()
        .iter()
        .map(|j| format!("{} is empty and contributes 0", c.display(j)))
        .collect()
}

fn run_finite(
    c: &SncComplex,
    levels: &[u64],
    v: &Assignment,
    primes: Vec<u64>,
) -> Result<DecompositionReport, InvariantError> {
    if levels.len() != c.len() {
        return Err(OrderError::LengthMismatch {
            left: levels.len(),
            right: c.len(),
        }
        .into());
    }
    if let Some(index) = levels.iter().position(|&r| r == 0) {
        return Err(OrderError::ZeroLevel { index }.into());
    }
    check_labels(v, &snc_labels(c))?;
    let eff: Vec<u64> = levels.iter().map(|&r| effective(r, &primes)).collect();
    let terms = snc_terms(c, &eff, v, None)?;
    let inputs = Inputs::Finite {
        complex: c.clone(),
        levels: levels.to_vec(),
    };
    finish(
        ReportKind::Finite,
        Level::Finite(levels.to_vec()),
        primes,
        v,
        inputs,
        terms,
        empty_notes(c),
        false,
    )
}

/// `v(X) + sum over nonempty D_J of prod_{j in J} (r_j - 1) v(D_J)`.
pub fn decompose_finite(
    c: &SncComplex,
    levels: &[u64],
    v: &Assignment,
) -> Result<DecompositionReport, InvariantError> {
    run_finite(c, levels, v, Vec::new())
}

fn run_kfl(
    c: &SncComplex,
    n: u64,
    v: &Assignment,
    primes: Vec<u64>,
) -> Result<DecompositionReport, InvariantError> {
    if n == 0 {
        return Err(PsodError::Truncation { min: 1, found: 0 }.into());
    }
    check_labels(v, &snc_labels(c))?;
    let r = effective(factorial(n)?, &primes);
    let var = if primes.is_empty() { "n!" } else { "n!'" };
    let terms = snc_terms(c, &vec![r; c.len()], v, Some(var))?;
    let mut notes = empty_notes(c);
    notes.push(
        "without truncation each D_J occurs once for every character in (Q/Z)*_J; counts are evaluated at level n!"
            .into(),
    );
    let inputs = Inputs::Kfl {
        complex: c.clone(),
        n,
    };
    finish(
        ReportKind::Kfl,
        Level::Truncation(n),
        primes,
        v,
        inputs,
        terms,
        notes,
        false,
    )
}

/// The Kummer-flat splitting truncated at level `n!`: `D_J` occurs `(n!-1)^{|J|}` times.
pub fn decompose_kfl(
    c: &SncComplex,
    v: &Assignment,
    n: u64,
) -> Result<DecompositionReport, InvariantError> {
    run_kfl(c, n, v, Vec::new())
}

fn run_nc(
    nc: &NcComplex,
    n: u64,
    v: &Assignment,
    primes: Vec<u64>,
) -> Result<DecompositionReport, InvariantError> {
    if n == 0 {
        return Err(PsodError::Truncation { min: 1, found: 0 }.into());
    }
    let s = strictification(nc)?;
    let r = effective(factorial(n)?, &primes);
    let totals = aggregate(&s.complex, r, |j| {
        s.breakdown(j).cloned().unwrap_or_default()
    });
    let allowed: BTreeSet<String> = totals.iter().map(|(l, _)| l.clone()).collect();
    check_labels(v, &allowed)?;
    let mut terms = Vec::new();
    for (label, m) in totals {
        if label == "X" {
            continue;
        }
        let value = lookup(v, std::slice::from_ref(&label))?;
        terms.push(Term {
            stratum: label,
            multiplicity: m,
            counting: None,
            value,
        });
    }
    let construction_dependent = !s.log.is_empty();
    let mut notes = Vec::new();
    if construction_dependent {
        notes.push(format!(
            "multiplicities are those of the strictification by {} blow-up(s); other resolutions may index the copies differently",
            s.log.len()
        ));
    }
    let inputs = Inputs::Nc { nc: nc.clone(), n };
    finish(
        ReportKind::Nc,
        Level::Truncation(n),
        primes,
        v,
        inputs,
        terms,
        notes,
        construction_dependent,
    )
}

/// Values on normalized strata of a normal crossings pair, aggregated
/// through its strictification.
pub fn decompose_nc(
    nc: &NcComplex,
    v: &Assignment,
    n: u64,
) -> Result<DecompositionReport, InvariantError> {
    run_nc(nc, n, v, Vec::new())
}

fn run_fixed(
    c: &SncComplex,
    fixed: &FixedLocusData,
    r: u64,
    v: &Assignment,
    primes: Vec<u64>,
) -> Result<DecompositionReport, InvariantError> {
    if r == 0 {
        return Err(OrderError::ZeroLevel { index: 0 }.into());
    }
    check_labels(v, &snc_labels(c))?;
    if v.invariant != InvariantKind::G {
        log::warn!(
            "the fixed-locus formula decomposes complexified G-theory; assignment is tagged {:?}",
            v.invariant
        );
    }
    let eff = effective(r, &primes);
    let mut terms = Vec::new();
    for s in c.strata().into_iter().filter(|j| !j.is_empty()) {
        let multiplicity = fixed_locus_index(fixed, c, &s, eff, None)?;
        let mut parts = vec![power_label("r", s.len())];
        parts.extend(
            fixed
                .fixed_over(&s)
                .iter()
                .map(|t| power_label("r", t.stratum.len())),
        );
        terms.push(Term {
            stratum: c.stratum_label(&s),
            multiplicity,
            counting: Some(parts.join(" + ")),
            value: lookup(v, &keys_for(c, &s))?,
        });
    }
    let notes = vec![format!(
        "group of order {} acting with {} nontrivial elements",
        fixed.group_order(),
        fixed.fixed.len()
    )];
    let inputs = Inputs::Fixed {
        complex: c.clone(),
        fixed: fixed.clone(),
        r,
    };
    finish(
        ReportKind::Simplicial,
        Level::Finite(vec![r]),
        primes,
        v,
        inputs,
        terms,
        notes,
        false,
    )
}

/// Complexified splitting with fixed-locus corrections for a diagonal
/// abelian action on the canonical root pair.
pub fn decompose_fixed_locus(
    c: &SncComplex,
    fixed: &FixedLocusData,
    g: &Assignment,
    r: u64,
) -> Result<DecompositionReport, InvariantError> {
    run_fixed(c, fixed, r, g, Vec::new())
}

/// [`decompose_fixed_locus`] on the canonical root pair of a chart.
pub fn decompose_simplicial_complexified(
    chart: &SimplicialChart,
    g: &Assignment,
    r: u64,
) -> Result<DecompositionReport, InvariantError> {
    let (c, fixed, _) = canonical_root_pair(chart)?;
    decompose_fixed_locus(&c, &fixed, g, r)
}

/// Recompute a report counting only characters whose order is prime to `p`.
pub fn etale_filter(
    report: &DecompositionReport,
    p: u64,
) -> Result<DecompositionReport, InvariantError> {
    if !is_prime(p) {
        return Err(InvariantError::NotPrime(p));
    }
    let mut primes = report.prime_to.clone();
    if !primes.contains(&p) {
        primes.push(p);
        primes.sort_unstable();
    }
    let v = &report.assignment;
    match &report.inputs {
        Inputs::Finite { complex, levels } => run_finite(complex, levels, v, primes),
        Inputs::Kfl { complex, n } => run_kfl(complex, *n, v, primes),
        Inputs::Nc { nc, n } => run_nc(nc, *n, v, primes),
        Inputs::Fixed { complex, fixed, r } => run_fixed(complex, fixed, *r, v, primes),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::ToricMonoid;
    use crate::strata::{Branch, Crossing};

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    fn p1() -> SncComplex {
        SncComplex::from_divisors(s(&["pt"]), &[], &[]).unwrap()
    }

    fn p2() -> SncComplex {
        SncComplex::from_divisors(
            s(&["1", "2", "3"]),
            &[s(&["1", "2"]), s(&["1", "3"]), s(&["2", "3"])],
            &[],
        )
        .unwrap()
    }

    fn p2_ranks() -> Assignment {
        Assignment::ints(&[
            ("X", 3),
            ("D_{1}", 2),
            ("D_{2}", 2),
            ("D_{3}", 2),
            ("D_{1,2}", 1),
            ("D_{1,3}", 1),
            ("D_{2,3}", 1),
        ])
    }

    #[test]
    fn projective_line() {
        let v = Assignment::ints(&[("X", 2), ("pt", 1)]);
        for r in 1..=12 {
            assert_eq!(
                decompose_finite(&p1(), &[r], &v).unwrap().total,
                Value::int(r as i64 + 1)
            );
        }
    }

    #[test]
    fn projective_plane() {
        let rep = decompose_finite(&p2(), &[2, 2, 2], &p2_ranks()).unwrap();
        assert_eq!(rep.total, Value::int(12));
        assert_eq!(rep.rows.len(), 6);
        assert_eq!(
            decompose_finite(&p2(), &[1, 1, 1], &p2_ranks())
                .unwrap()
                .total,
            Value::int(3)
        );
        assert!(rep.to_text().contains("total = 12"));
    }

    #[test]
    fn missing_and_unknown() {
        let v = Assignment::ints(&[("X", 3)]);
        assert!(matches!(
            decompose_finite(&p2(), &[2, 2, 2], &v),
            Err(InvariantError::MissingValue(_))
        ));
        let w = Assignment::ints(&[("X", 2), ("pt", 1), ("nowhere", 4)]);
        assert!(matches!(
            decompose_finite(&p1(), &[2], &w),
            Err(InvariantError::UnknownLabel(_))
        ));
    }

    #[test]
    fn kfl_single_divisor() {
        let v = Assignment::ints(&[("X", 2), ("pt", 1)]);
        assert_eq!(decompose_kfl(&p1(), &v, 2).unwrap().total, Value::int(3));
        let rep = decompose_kfl(&p1(), &v, 3).unwrap();
        assert_eq!(rep.total, Value::int(7));
        assert_eq!(rep.rows[0].counting_function.as_deref(), Some("(n!-1)"));
        assert_eq!(decompose_finite(&p1(), &[6], &v).unwrap().total, rep.total);
    }

    #[test]
    fn prime_filter() {
        let v = Assignment::ints(&[("X", 2), ("pt", 1)]);
        let rep = decompose_finite(&p1(), &[4], &v).unwrap();
        let f = etale_filter(&rep, 2).unwrap();
        assert_eq!(f.rows[0].multiplicity, BigUint::from(0u32));
        assert_eq!(f.total, Value::int(2));
        assert_eq!(etale_filter(&f, 2).unwrap(), f);
        assert_eq!(etale_filter(&rep, 3).unwrap().total, rep.total);
        assert!(etale_filter(&rep, 4).is_err());
    }

    #[test]
    fn nodal_curve_in_a_surface() {
        let nc = NcComplex::new(
            s(&["C"]),
            vec![Crossing {
                branches: vec![Branch("C".into(), 1), Branch("C".into(), 2)],
                codim: 2,
                name: None,
            }],
            Some(2),
        )
        .unwrap();
        let v = Assignment::ints(&[("X", 3), ("C^v", 2), ("x^v", 1)]);
        let r2 = decompose_nc(&nc, &v, 2).unwrap();
        assert_eq!(r2.multiplicity("x^v"), Some(&BigUint::from(5u32)));
        assert_eq!(r2.total, Value::int(3 + 2 + 5));
        assert!(r2.construction_dependent);
        let r3 = decompose_nc(&nc, &v, 3).unwrap();
        assert!(r3.multiplicity("C^v") > r2.multiplicity("C^v"));
        assert!(r3.multiplicity("x^v") > r2.multiplicity("x^v"));
    }

    #[test]
    fn simple_nc_matches_kfl() {
        let nc = NcComplex::new(
            s(&["A", "B"]),
            vec![Crossing {
                branches: vec![Branch("A".into(), 1), Branch("B".into(), 1)],
                codim: 2,
                name: None,
            }],
            None,
        )
        .unwrap();
        let v = Assignment::ints(&[("X", 4), ("A", 2), ("B", 2), ("D_{A,B}", 1)]);
        let a = decompose_nc(&nc, &v, 3).unwrap();
        let w = Assignment::ints(&[("X", 4), ("D_{A}", 2), ("D_{B}", 2), ("D_{A,B}", 1)]);
        let b = decompose_kfl(&nc.as_snc().unwrap(), &w, 3).unwrap();
        assert_eq!(a.total, b.total);
        assert!(!a.construction_dependent);
    }

    #[test]
    fn a1_surface() {
        let chart = SimplicialChart {
            monoid: ToricMonoid::from_i64(2, &[&[2, 0], &[1, 1], &[0, 2]]).unwrap(),
            boundary: None,
            names: None,
        };
        let g = Assignment::ints(&[("X", 1), ("D_{1}", 1), ("D_{2}", 1), ("D_{1,2}", 1)])
            .with_invariant(InvariantKind::G);
        let rep = decompose_simplicial_complexified(&chart, &g, 2).unwrap();
        assert_eq!(rep.multiplicity("D_{1,2}"), Some(&BigUint::from(2u32)));
        assert_eq!(rep.multiplicity("D_{1}"), Some(&BigUint::from(1u32)));
        assert_eq!(rep.total, Value::int(1 + 1 + 1 + 2));
    }

    #[test]
    fn trivial_group_matches_kfl() {
        let c = SncComplex::all_nonempty(s(&["1", "2"]), 2).unwrap();
        let g = Assignment::ints(&[("X", 1), ("D_{1}", 1), ("D_{2}", 1), ("D_{1,2}", 1)]);
        let a = decompose_fixed_locus(&c, &FixedLocusData::trivial(2), &g, 6).unwrap();
        let b = decompose_kfl(&c, &g, 3).unwrap();
        assert_eq!(a.total, b.total);
    }
}
