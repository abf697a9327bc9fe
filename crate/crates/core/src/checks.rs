//! The end-to-end verification suite behind `finpart verify --all` and the
//! `acceptance` test target. Each check compares the library against frozen
//! reference values or against an oracle from [`crate::verification`], and
//! must finish inside its time limit.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::circles::{canonical_form, circles_count_terms, multichoose, parse_forest, CircleTable};
use crate::closed_forms::{validate_formula, FormulaId};
use crate::counting::{enumerate_solutions, Count, Engine, Mode};
use crate::multiset::Multiset;
use crate::verification::{self, OracleBudget};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Oracle sweep: every `A` with `sigma(A) <= oracle_sigma`, every
    /// `n <= oracle_n`.
    pub oracle_sigma: u64,
    pub oracle_n: u64,
    pub shift_sigma: u64,
    pub shift_n: u64,
    pub closed_n: u64,
    pub triangular_n: u64,
    pub max_circles: usize,
    pub max_forest: usize,
    pub partition_n: u64,
    pub multichoose_max: u64,
    pub isomorphism_nodes: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            oracle_sigma: 8,
            oracle_n: 40,
            shift_sigma: 6,
            shift_n: 25,
            closed_n: 500,
            triangular_n: 12,
            max_circles: 30,
            max_forest: 10,
            partition_n: 25,
            multichoose_max: 20,
            isomorphism_nodes: 7,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub id: u8,
    pub title: &'static str,
    /// Values matched and the check finished inside its time limit.
    pub passed: bool,
    pub values_ok: bool,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
    pub details: Vec<String>,
}

impl CheckOutcome {
    pub fn summary_line(&self) -> String {
        format!(
            "[{}] criterion {:>2}: {} ({} ms, limit {} ms)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed_ms,
            self.limit_ms
        )
    }
}

struct Findings {
    ok: bool,
    details: Vec<String>,
}

impl Findings {
    fn new() -> Self {
        Self {
            ok: true,
            details: Vec::new(),
        }
    }

    fn expect(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.details.push(format!("FAILED: {}", what.into()));
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.details.push(what.into());
    }
}

fn timed(id: u8, title: &'static str, limit: Duration, body: impl FnOnce() -> Findings) -> CheckOutcome {
    let start = Instant::now();
    let findings = body();
    let elapsed = start.elapsed();
    let mut details = findings.details;
    if elapsed > limit {
        details.push(format!("FAILED: took {elapsed:?}, limit {limit:?}"));
    }
    CheckOutcome {
        id,
        title,
        passed: findings.ok && elapsed <= limit,
        values_ok: findings.ok,
        elapsed_ms: elapsed.as_millis(),
        limit_ms: limit.as_millis(),
        details,
    }
}

fn ms(values: &[u64]) -> Multiset {
    Multiset::from_positive(values.iter().copied())
}

fn count(v: u64) -> Count {
    Count::from(v)
}

pub fn paper_values() -> CheckOutcome {
    timed(1, "reference values", Duration::from_secs(1), || {
        let mut f = Findings::new();
        let mut e = Engine::new();
        let a = ms(&[1, 2, 2, 3]);
        f.expect(e.pi(7, 3) == count(4), "pi(7,3) = 4");
        f.expect(e.d(17, &a) == count(18), "D(17,{1,2,2,3}) = 18");
        f.expect(e.d0(17, &a) == count(72), "D0(17,{1,2,2,3}) = 72");
        f.expect(e.delta(18, &a) == count(3), "Delta(18,{1,2,2,3}) = 3");
        let mut tuples: Vec<Vec<u64>> = enumerate_solutions(18, &a, Mode::Distinct)
            .into_iter()
            .map(|s| s.values)
            .collect();
        tuples.sort();
        let mut expected = vec![vec![3, 2, 4, 1], vec![5, 2, 3, 1], vec![4, 1, 3, 2]];
        expected.sort();
        f.expect(tuples == expected, format!("solutions of Delta(18,{{1,2,2,3}}): {tuples:?}"));

        let mut table = CircleTable::new();
        let circles: Vec<Count> = table.prefix(6).to_vec();
        let expected: Vec<Count> = [1u64, 1, 2, 4, 9, 20, 48].map(count).to_vec();
        f.expect(circles == expected, format!("C_0..C_6 = {circles:?}"));

        let terms = circles_count_terms(&mut table, 6);
        let total: Count = terms.iter().map(|t| t.term.clone()).sum();
        f.expect(total == count(48), format!("terms of C_6 sum to {total}"));
        let mut values: Vec<Count> = terms.into_iter().map(|t| t.term).collect();
        values.sort();
        let mut expected: Vec<Count> = [20u64, 3, 1, 1, 9, 4, 4, 2, 1, 1, 2].map(count).to_vec();
        expected.sort();
        f.expect(values == expected, "term values of C_6 = {20,3,1,1,9,4,4,2,1,1,2}");
        f
    })
}

pub fn coefficient_multisets_for_six() -> CheckOutcome {
    timed(2, "coefficient multisets for n = 6", Duration::from_secs(1), || {
        let mut f = Findings::new();
        let mut e = Engine::new();
        let expected: [&[&str]; 3] = [
            &["1", "2", "3", "6"],
            &["1,1", "1,2", "1,3", "1,4", "2,2"],
            &["1,1,1"],
        ];
        for (k, want) in (1u64..).zip(expected) {
            let got: Vec<String> = e
                .enumerate_coefficient_multisets(6, k)
                .iter()
                .map(Multiset::to_string)
                .collect();
            f.expect(got == want, format!("k={k}: got {got:?}"));
        }
        f.expect(e.enumerate_coefficient_multisets(6, 4).is_empty(), "k=4 is empty");
        f
    })
}

pub fn oracle_equivalence(config: &SuiteConfig) -> CheckOutcome {
    timed(3, "D and Delta match exhaustive enumeration", Duration::from_secs(60), || {
        let mut f = Findings::new();
        let budget = OracleBudget {
            max_sigma: config.oracle_sigma,
            max_n: config.oracle_n,
            ..OracleBudget::default()
        };
        let mut e = Engine::new();
        let mut cells = 0usize;
        for a in verification::multisets_up_to_sigma(config.oracle_sigma) {
            for n in 0..=config.oracle_n {
                let d = verification::d_bruteforce(n, &a, &budget).expect("within budget");
                let delta = verification::delta_bruteforce(n, &a, &budget).expect("within budget");
                f.expect(e.d(n, &a) == d, format!("D({n},{{{a}}}) vs oracle {d}"));
                f.expect(e.delta(n, &a) == delta, format!("Delta({n},{{{a}}}) vs oracle {delta}"));
                cells += 1;
            }
        }
        f.note(format!("{cells} (n, A) cells"));
        f
    })
}

pub fn closed_form_sweeps(config: &SuiteConfig) -> CheckOutcome {
    timed(4, "closed forms agree with the recursion", Duration::from_secs(10), || {
        let mut f = Findings::new();
        let mut e = Engine::new();
        let n_max = config.closed_n;
        for formula in [
            FormulaId::D12,
            FormulaId::D122,
            FormulaId::D112,
            FormulaId::D123,
            FormulaId::Delta11,
            FormulaId::Delta12,
        ] {
            let report = validate_formula(&mut e, formula, n_max).expect("formula is evaluable");
            match report.mismatches.first() {
                None => f.note(format!("{formula}: agrees on 1..={n_max}")),
                Some(m) => f.expect(
                    false,
                    format!(
                        "{formula}: {} mismatches on 1..={n_max}, first n={} closed={} recursion={}",
                        report.mismatches.len(),
                        m.n,
                        m.closed,
                        m.recursion
                    ),
                ),
            }
        }

        let equal = validate_formula(&mut e, FormulaId::DPairEqual, n_max).expect("evaluable");
        let mut by_pair: BTreeMap<Multiset, (usize, u64)> = BTreeMap::new();
        for m in &equal.mismatches {
            by_pair.entry(m.multiset.clone()).or_insert((0, m.n)).0 += 1;
        }
        for (a, (hits, first)) in &by_pair {
            f.expect(
                false,
                format!("D_pair_equal {{{a}}}: {hits} mismatches on 1..={n_max}, first n={first}"),
            );
        }
        if by_pair.is_empty() {
            f.note(format!("D_pair_equal: agrees on 1..={n_max}"));
        }

        let distinct = validate_formula(&mut e, FormulaId::DPairDistinct, n_max).expect("evaluable");
        let a1_is_one: Vec<_> = distinct
            .mismatches
            .iter()
            .filter(|m| m.multiset.min_value() == Some(1))
            .collect();
        f.expect(
            a1_is_one.is_empty(),
            format!("D_pair_distinct with a1 = 1: {} mismatches", a1_is_one.len()),
        );
        let witness = distinct.contains(5, &ms(&[2, 3]));
        f.expect(
            witness.is_some_and(|m| m.closed == 0.into() && m.recursion == count(1)),
            "D_pair_distinct report contains (5, {2,3}, closed 0, recursion 1)",
        );
        let failing: Vec<String> = distinct
            .failing_multisets()
            .iter()
            .map(|a| format!("{{{a}}}"))
            .collect();
        f.note(format!("D_pair_distinct fails on {}", failing.join(" ")));
        f
    })
}

pub fn triangular_identity(config: &SuiteConfig) -> CheckOutcome {
    timed(5, "D(n(n+3)/2, {1..n}) = D(2n, n ones)", Duration::from_secs(30), || {
        let mut f = Findings::new();
        let mut e = Engine::new();
        for n in 1..=config.triangular_n {
            let check = crate::closed_forms::check_triangular_identity(&mut e, n);
            f.expect(check.equal, format!("n={n}: lhs {} rhs {}", check.lhs, check.rhs));
        }
        f
    })
}

pub fn shift_identities(config: &SuiteConfig) -> CheckOutcome {
    timed(6, "D0 and Delta0 match non-negative enumeration", Duration::from_secs(30), || {
        let mut f = Findings::new();
        let budget = OracleBudget {
            max_sigma: config.shift_sigma,
            max_n: config.shift_n,
            ..OracleBudget::default()
        };
        let mut e = Engine::new();
        for a in verification::multisets_up_to_sigma(config.shift_sigma) {
            for n in 0..=config.shift_n {
                let d0 = verification::d0_bruteforce(n, &a, &budget).expect("within budget");
                let delta0 = verification::delta0_bruteforce(n, &a, &budget).expect("within budget");
                f.expect(e.d0(n, &a) == d0, format!("D0({n},{{{a}}}) vs oracle {d0}"));
                f.expect(e.delta0(n, &a) == delta0, format!("Delta0({n},{{{a}}}) vs oracle {delta0}"));
            }
        }
        f
    })
}

pub fn circle_counts(config: &SuiteConfig) -> CheckOutcome {
    timed(7, "C_n matches rooted-tree recurrence and forest enumeration", Duration::from_secs(30), || {
        let mut f = Findings::new();
        let mut table = CircleTable::new();
        let ours = table.prefix(config.max_circles).to_vec();
        match verification::rooted_trees_euler(config.max_circles) {
            Ok(oracle) => {
                for (n, (a, b)) in ours.iter().zip(&oracle).enumerate() {
                    f.expect(a == b, format!("C_{n} = {a}, recurrence {b}"));
                }
                f.note(format!("C_{} = {}", config.max_circles, ours[config.max_circles]));
            }
            Err(err) => f.expect(false, err.to_string()),
        }
        let budget = OracleBudget {
            max_forest_nodes: config.max_forest as u64,
            ..OracleBudget::default()
        };
        for n in 0..=config.max_forest {
            let forests = verification::enumerate_canonical_forests(n, &budget).expect("within budget");
            f.expect(
                count(forests.len() as u64) == *table.get(n),
                format!("{} canonical forests on {n} nodes, C_{n} = {}", forests.len(), table.get(n)),
            );
        }
        f
    })
}

pub fn partition_cross_check(config: &SuiteConfig) -> CheckOutcome {
    timed(8, "sum of Delta over coefficient multisets = p(n)", Duration::from_secs(60), || {
        let mut f = Findings::new();
        let mut e = Engine::new();
        for n in 1..=config.partition_n {
            let mut lhs = Count::zero();
            for k in 1..=n {
                for a in e.enumerate_coefficient_multisets(n, k) {
                    lhs += e.delta(n, &a);
                }
            }
            let rhs: Count = (0..=n).map(|k| e.pi(n, k)).sum();
            f.expect(lhs == rhs, format!("n={n}: {lhs} vs p(n) = {rhs}"));
        }
        f
    })
}

pub fn multichoose_identity(config: &SuiteConfig) -> CheckOutcome {
    timed(9, "multichoose identity", Duration::from_secs(1), || {
        let mut f = Findings::new();
        let max = config.multichoose_max;
        for r in 1..=max {
            for s in 1..=max {
                let lhs: BigUint = (1..=r)
                    .map(|i| num_integer::binomial(BigUint::from(r - 1), BigUint::from(i - 1))
                        * num_integer::binomial(BigUint::from(s), BigUint::from(i)))
                    .sum();
                let rhs = num_integer::binomial(BigUint::from(r + s - 1), BigUint::from(r));
                f.expect(lhs == rhs, format!("r={r} s={s}: {lhs} vs {rhs}"));
                f.expect(multichoose(&Count::from(s), r) == rhs, format!("multichoose({s},{r})"));
            }
        }
        f
    })
}

pub fn parser_and_isomorphism(config: &SuiteConfig) -> CheckOutcome {
    timed(10, "parser round trip and canonical-form completeness", Duration::from_secs(30), || {
        let mut f = Findings::new();
        for n in 0..=config.isomorphism_nodes {
            let raw = verification::ordered_forests(n);
            let forests: Vec<_> = raw.iter().map(|s| parse_forest(s).expect("balanced")).collect();
            let keys: Vec<String> = forests.iter().map(canonical_form).collect();
            for ((s, forest), key) in raw.iter().zip(&forests).zip(&keys) {
                f.expect(&forest.to_string() == s, format!("render(parse({s}))"));
                f.expect(forest.size() == n, format!("size of {s}"));
                let again = canonical_form(&parse_forest(key).expect("canonical output parses"));
                f.expect(&again == key, format!("canonicalizing {s} twice"));
                f.expect(forest.canonicalize().to_string() == *key, format!("canonicalize({s})"));
            }
            for i in 0..forests.len() {
                for j in i..forests.len() {
                    let same_key = keys[i] == keys[j];
                    let iso = verification::forests_isomorphic(&forests[i], &forests[j]);
                    f.expect(same_key == iso, format!("{} vs {}: key {same_key}, iso {iso}", raw[i], raw[j]));
                }
            }
        }
        f
    })
}

pub fn run_all(config: &SuiteConfig) -> Vec<CheckOutcome> {
    vec![
        paper_values(),
        coefficient_multisets_for_six(),
        oracle_equivalence(config),
        closed_form_sweeps(config),
        triangular_identity(config),
        shift_identities(config),
        circle_counts(config),
        partition_cross_check(config),
        multichoose_identity(config),
        parser_and_isomorphism(config),
    ]
}
