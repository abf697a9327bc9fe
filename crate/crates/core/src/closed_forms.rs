//! Floor-function closed forms for small coefficient multisets, and sweeps
//! that adjudicate each of them against the recursion engine.
//!
//! Every formula is transcribed as printed. Some printed forms are wrong on
//! parts of their stated domain; [`validate_formula`] reports exactly where.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::counting::{Count, Engine};
use crate::multiset::Multiset;
use crate::serde_util::as_decimal;

/// Largest coefficient swept by the two-element `D_pair` families.
pub const PAIR_COEFF_MAX: u64 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormulaId {
    /// `D(n, {1,2})`
    D12,
    /// `D(n, {1,2,2})`
    D122,
    /// `D(n, {1,1,2})`
    D112,
    /// `D(n, {1,2,3})`
    D123,
    /// `D(n, {a,a})`
    DPairEqual,
    /// `D(n, {a1,a2})`, `a1 < a2`
    DPairDistinct,
    /// `Delta(n, {1,1})`
    Delta11,
    /// `Delta(n, {1,2})`
    Delta12,
}

impl FormulaId {
    pub const ALL: [FormulaId; 8] = [
        FormulaId::D12,
        FormulaId::D122,
        FormulaId::D112,
        FormulaId::D123,
        FormulaId::DPairEqual,
        FormulaId::DPairDistinct,
        FormulaId::Delta11,
        FormulaId::Delta12,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            FormulaId::D12 => "D_12",
            FormulaId::D122 => "D_122",
            FormulaId::D112 => "D_112",
            FormulaId::D123 => "D_123",
            FormulaId::DPairEqual => "D_pair_equal",
            FormulaId::DPairDistinct => "D_pair_distinct",
            FormulaId::Delta11 => "DELTA_11",
            FormulaId::Delta12 => "DELTA_12",
        }
    }

    /// The fixed multiset a single-multiset formula is about.
    pub fn multiset(self) -> Option<Multiset> {
        let values: &[u64] = match self {
            FormulaId::D12 | FormulaId::Delta12 => &[1, 2],
            FormulaId::D122 => &[1, 2, 2],
            FormulaId::D112 => &[1, 1, 2],
            FormulaId::D123 => &[1, 2, 3],
            FormulaId::Delta11 => &[1, 1],
            FormulaId::DPairEqual | FormulaId::DPairDistinct => return None,
        };
        Some(Multiset::from_positive(values.iter().copied()))
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for FormulaId {
    type Err = ClosedFormError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FormulaId::ALL
            .into_iter()
            .find(|f| f.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| ClosedFormError::UnknownFormula(s.to_string()))
    }
}

impl Serialize for FormulaId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosedFormError {
    #[error("unknown formula {0:?}")]
    UnknownFormula(String),
    #[error("formula {formula} is not evaluated by {operation}")]
    WrongFamily {
        formula: FormulaId,
        operation: &'static str,
    },
    #[error("closed forms are stated for n >= 1")]
    ZeroTarget,
    #[error("pair coefficients must satisfy 1 <= a1 <= a2, got ({a1}, {a2})")]
    BadPair { a1: u64, a2: u64 },
    #[error("formula {formula} is not an integer at n = {n}")]
    NonIntegral { formula: FormulaId, n: u64 },
}

fn floor_div(a: i128, b: i128) -> i128 {
    Integer::div_floor(&a, &b)
}

fn halve(formula: FormulaId, n: u64, twice: i128) -> Result<i128, ClosedFormError> {
    if twice.is_odd() {
        Err(ClosedFormError::NonIntegral { formula, n })
    } else {
        Ok(twice / 2)
    }
}

/// Evaluates one of the printed `D` closed forms for the fixed multisets
/// `{1,2}`, `{1,2,2}`, `{1,1,2}` and `{1,2,3}`.
pub fn d_closed(n: u64, formula: FormulaId) -> Result<BigInt, ClosedFormError> {
    if n == 0 {
        return Err(ClosedFormError::ZeroTarget);
    }
    let m = n as i128;
    let value = match formula {
        FormulaId::D12 => floor_div(m - 1, 2),
        FormulaId::D122 => floor_div(m - 1, 4) * (floor_div(m + 1, 2) - floor_div(m + 3, 4)),
        FormulaId::D112 => {
            // floor(3/2 floor((n-1)/3) + 1/2)
            let lead = floor_div(3 * floor_div(m - 1, 3) + 1, 2);
            let parity = if m % 2 == 0 { 1 } else { 0 };
            // floor((n-1)/2) - 1/2 floor(3/2 floor((n+2)/3)) + (1+(-1)^n)/2, doubled
            let inner_twice =
                2 * floor_div(m - 1, 2) - floor_div(3 * floor_div(m + 2, 3), 2) + 2 * parity;
            halve(formula, n, lead * inner_twice)?
        }
        FormulaId::D123 => {
            let q = floor_div(m - 4, 2);
            let first = floor_div(m - 4, 6) * (2 * floor_div(m - 3, 2) - floor_div(m + 2, 6));
            let second = floor_div(2 * q, 3) * floor_div(2 * q - 3, 3);
            let third = floor_div(2 * q + 3, 6) * (2 * floor_div(m - 2, 2) - floor_div(2 * q + 9, 6));
            halve(formula, n, first - second + third)?
        }
        other => {
            return Err(ClosedFormError::WrongFamily {
                formula: other,
                operation: "d_closed",
            })
        }
    };
    Ok(BigInt::from(value))
}

/// The two-element lemma as printed: `floor(n / 2a1)` when `a1 = a2`,
/// `floor((n-1) / (a1 a2))` otherwise.
pub fn d_pair_closed(n: u64, a1: u64, a2: u64) -> Result<Count, ClosedFormError> {
    if n == 0 {
        return Err(ClosedFormError::ZeroTarget);
    }
    if a1 == 0 || a1 > a2 {
        return Err(ClosedFormError::BadPair { a1, a2 });
    }
    let value = if a1 == a2 { n / (2 * a1) } else { (n - 1) / (a1 * a2) };
    Ok(Count::from(value))
}

pub fn delta_closed(n: u64, formula: FormulaId) -> Result<Count, ClosedFormError> {
    if n == 0 {
        return Err(ClosedFormError::ZeroTarget);
    }
    let value = match formula {
        FormulaId::Delta11 => (n - 1) / 2,
        FormulaId::Delta12 => (n - 1) / 3 + (n - 1) / 6,
        other => {
            return Err(ClosedFormError::WrongFamily {
                formula: other,
                operation: "delta_closed",
            })
        }
    };
    Ok(Count::from(value))
}

/// `D(n, {1,2,3}) = D(n - 3, {1,1,1})`, the reduction the `D_123` derivation
/// starts from.
pub fn d123_via_three_ones(engine: &mut Engine, n: u64) -> Count {
    match n.checked_sub(3) {
        Some(m) => engine.d(m, &Multiset::ones(3)),
        None => Count::default(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangularCheck {
    pub n: u64,
    #[serde(serialize_with = "as_decimal")]
    pub lhs: Count,
    #[serde(serialize_with = "as_decimal")]
    pub rhs: Count,
    pub equal: bool,
}

/// `D(n(n+3)/2, {1, ..., n})` against `D(2n, {1, ..., 1})` with `n` ones.
pub fn check_triangular_identity(engine: &mut Engine, n: u64) -> TriangularCheck {
    let lhs = engine.d(n * (n + 3) / 2, &Multiset::range(n));
    let rhs = engine.d(2 * n, &Multiset::ones(n));
    let equal = lhs == rhs;
    TriangularCheck { n, lhs, rhs, equal }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub n: u64,
    pub multiset: Multiset,
    #[serde(serialize_with = "as_decimal")]
    pub closed: BigInt,
    #[serde(serialize_with = "as_decimal")]
    pub recursion: Count,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub formula: FormulaId,
    /// Inclusive range of `n`.
    #[serde(rename = "range")]
    pub tested_range: (u64, u64),
    pub mismatches: Vec<Mismatch>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// Multisets with at least one mismatch.
    pub fn failing_multisets(&self) -> BTreeSet<Multiset> {
        self.mismatches.iter().map(|m| m.multiset.clone()).collect()
    }

    pub fn contains(&self, n: u64, multiset: &Multiset) -> Option<&Mismatch> {
        self.mismatches
            .iter()
            .find(|m| m.n == n && &m.multiset == multiset)
    }
}

/// The multisets a formula family covers during a sweep.
pub fn formula_cases(formula: FormulaId) -> Vec<Multiset> {
    let pair = |a1: u64, a2: u64| Multiset::from_positive([a1, a2]);
    match formula {
        FormulaId::DPairEqual => (1..=PAIR_COEFF_MAX).map(|a| pair(a, a)).collect(),
        FormulaId::DPairDistinct => (1..=PAIR_COEFF_MAX)
            .flat_map(|a1| (a1 + 1..=PAIR_COEFF_MAX).map(move |a2| pair(a1, a2)))
            .collect(),
        fixed => vec![fixed.multiset().expect("fixed formulas carry a multiset")],
    }
}

/// Evaluates `formula` at `n` for one of its cases.
pub fn evaluate(formula: FormulaId, n: u64, multiset: &Multiset) -> Result<BigInt, ClosedFormError> {
    match formula {
        FormulaId::D12 | FormulaId::D122 | FormulaId::D112 | FormulaId::D123 => d_closed(n, formula),
        FormulaId::Delta11 | FormulaId::Delta12 => delta_closed(n, formula).map(BigInt::from),
        FormulaId::DPairEqual | FormulaId::DPairDistinct => {
            let values = multiset.expand();
            let (a1, a2) = match values.as_slice() {
                [a1, a2] => (*a1, *a2),
                _ => return Err(ClosedFormError::BadPair { a1: 0, a2: 0 }),
            };
            d_pair_closed(n, a1, a2).map(BigInt::from)
        }
    }
}

/// Compares `formula` with the recursion for every `n` in `1..=n_max` and
/// every case of its family, recording all disagreements.
pub fn validate_formula(
    engine: &mut Engine,
    formula: FormulaId,
    n_max: u64,
) -> Result<ValidityReport, ClosedFormError> {
    let distinct_mode = matches!(formula, FormulaId::Delta11 | FormulaId::Delta12);
    let mut mismatches = Vec::new();
    for multiset in formula_cases(formula) {
        for n in 1..=n_max {
            let closed = evaluate(formula, n, &multiset)?;
            let recursion = if distinct_mode {
                engine.delta(n, &multiset)
            } else {
                engine.d(n, &multiset)
            };
            if closed != BigInt::from(recursion.clone()) {
                mismatches.push(Mismatch {
                    n,
                    multiset: multiset.clone(),
                    closed,
                    recursion,
                });
            }
        }
    }
    mismatches.sort_by(|a, b| (a.n, &a.multiset).cmp(&(b.n, &b.multiset)));
    Ok(ValidityReport {
        formula,
        tested_range: (1, n_max),
        mismatches,
    })
}

/// Targets in `1..=n_max` where the `{1,1,1}` reduction disagrees with the
/// recursion on `{1,2,3}`.
pub fn d123_reduction_mismatches(engine: &mut Engine, n_max: u64) -> Vec<u64> {
    let a = Multiset::range(3);
    (1..=n_max)
        .filter(|&n| d123_via_three_ones(engine, n) != engine.d(n, &a))
        .collect()
}
