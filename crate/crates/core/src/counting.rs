//! Memoized counting of restricted partitions over coefficient multisets.
//!
//! For a multiset `A = {a_1 <= ... <= a_k}` and a target `n`:
//!
//! - `D(n, A)` counts positive `(x_1, ..., x_k)` with `sum a_i x_i = n` and
//!   `x_i <= x_{i+1}` whenever `a_i = a_{i+1}` (natural mode).
//! - `Delta(n, A)` additionally requires pairwise distinct `x_i`, strictly
//!   increasing inside runs of equal coefficients (distinct mode).
//! - `D0` / `Delta0` allow zeros and reduce to the positive versions through
//!   the shift `n -> n + sigma(A)`.
//!
//! `D` is computed by peeling off one value `a` of `A`: subtracting `a` from
//! each of its `m(a)` multipliers drops the `l` multipliers that were equal to
//! one. `Delta` subtracts one from every multiplier; at most one of them can
//! have been one, and it is always the first of its run.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::multiset::Multiset;

/// Exact non-negative count.
pub type Count = BigUint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Positive multipliers, weakly increasing inside equal coefficients.
    Natural,
    /// Pairwise distinct positive multipliers, strictly increasing inside
    /// equal coefficients.
    Distinct,
}

/// Which value of `A` the `D` recursion peels off first. The count does not
/// depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pivot {
    #[default]
    Largest,
    Smallest,
}

/// One solution `(x_1, ..., x_k)` aligned with the ascending expansion of its
/// multiset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionTuple {
    pub multiset: Multiset,
    pub values: Vec<u64>,
}

impl SolutionTuple {
    /// `sum a_i x_i`.
    pub fn weighted_sum(&self) -> u64 {
        self.multiset
            .expand()
            .iter()
            .zip(&self.values)
            .map(|(a, x)| a * x)
            .sum()
    }

    /// Checks every structural constraint of `mode` and that the tuple hits
    /// `n`. Positive multipliers are required.
    pub fn is_admissible(&self, n: u64, mode: Mode) -> bool {
        let coeffs = self.multiset.expand();
        if coeffs.len() != self.values.len() || self.weighted_sum() != n {
            return false;
        }
        if self.values.contains(&0) {
            return false;
        }
        let ordered = coeffs
            .windows(2)
            .zip(self.values.windows(2))
            .all(|(a, x)| {
                a[0] != a[1]
                    || match mode {
                        Mode::Natural => x[0] <= x[1],
                        Mode::Distinct => x[0] < x[1],
                    }
            });
        if !ordered {
            return false;
        }
        match mode {
            Mode::Natural => true,
            Mode::Distinct => {
                let mut seen = self.values.clone();
                seen.sort_unstable();
                seen.windows(2).all(|w| w[0] != w[1])
            }
        }
    }
}

type MemoKey = (u64, Multiset, Mode);

/// Counting engine. Owns its memo table; use one engine per thread.
#[derive(Debug, Default)]
pub struct Engine {
    pivot: Pivot,
    memo: HashMap<MemoKey, Count>,
    pi_memo: HashMap<(u64, u64), Count>,
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_pivot(pivot: Pivot) -> Self {
        Self {
            pivot,
            ..Self::default()
        }
    }

    pub fn pivot(&self) -> Pivot {
        self.pivot
    }

    /// Number of cached `D`/`Delta` subproblems.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Partitions of `n` into exactly `k` positive parts.
    pub fn pi(&mut self, n: u64, k: u64) -> Count {
        if n < k {
            return Count::zero();
        }
        if k == 0 {
            return if n == 0 { Count::one() } else { Count::zero() };
        }
        if n == k {
            return Count::one();
        }
        if let Some(hit) = self.pi_memo.get(&(n, k)) {
            return hit.clone();
        }
        // Subtract one from every part; s parts stay positive.
        let rest = n - k;
        let mut total = Count::zero();
        for s in 0..=k.min(rest) {
            total += self.pi(rest, s);
        }
        self.pi_memo.insert((n, k), total.clone());
        total
    }

    pub fn d(&mut self, n: u64, a: &Multiset) -> Count {
        if a.is_empty() {
            return if n == 0 { Count::one() } else { Count::zero() };
        }
        // Every multiplier is at least one.
        if n < a.sigma() {
            return Count::zero();
        }
        let key = (n, a.clone(), Mode::Natural);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let (value, mult) = match self.pivot {
            Pivot::Largest => *a.entries().last().unwrap(),
            Pivot::Smallest => a.entries()[0],
        };
        let rest = n - value * mult;
        let mut total = Count::zero();
        for ones in 0..=mult {
            let reduced = a
                .remove_copies(value, ones)
                .expect("ones never exceeds the multiplicity");
            total += self.d(rest, &reduced);
        }
        self.memo.insert(key, total.clone());
        total
    }

    pub fn d0(&mut self, n: u64, a: &Multiset) -> Count {
        self.d(n + a.sigma(), a)
    }

    pub fn delta(&mut self, n: u64, a: &Multiset) -> Count {
        if a.is_empty() {
            return if n == 0 { Count::one() } else { Count::zero() };
        }
        if n < a.min_distinct_sum() {
            return Count::zero();
        }
        let key = (n, a.clone(), Mode::Distinct);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let rest = n - a.sigma();
        let mut total = self.delta(rest, a);
        let support: Vec<u64> = a.support().collect();
        for b in support {
            let reduced = a.remove_copies(b, 1).expect("b is in the support");
            total += self.delta(rest, &reduced);
        }
        self.memo.insert(key, total.clone());
        total
    }

    pub fn delta0(&mut self, n: u64, a: &Multiset) -> Count {
        self.delta(n + a.sigma(), a)
    }

    pub fn count(&mut self, n: u64, a: &Multiset, mode: Mode) -> Count {
        match mode {
            Mode::Natural => self.d(n, a),
            Mode::Distinct => self.delta(n, a),
        }
    }

    /// All multisets of size `k` admitting at least one distinct-mode
    /// solution for `n`, in lexicographic order of their expansions.
    pub fn enumerate_coefficient_multisets(&mut self, n: u64, k: u64) -> Vec<Multiset> {
        let mut out = Vec::new();
        if n == 0 || k == 0 {
            return out;
        }
        let mut prefix = Vec::with_capacity(k as usize);
        let mut candidates = Vec::new();
        candidate_multisets(n, k, &mut prefix, 0, &mut candidates);
        for a in candidates {
            if !self.delta(n, &a).is_zero() {
                out.push(a);
            }
        }
        out
    }
}

/// Non-decreasing sequences of length `k` over `1..=n` whose minimal distinct
/// sum does not exceed `n`.
fn candidate_multisets(n: u64, k: u64, prefix: &mut Vec<u64>, partial: u64, out: &mut Vec<Multiset>) {
    let i = prefix.len() as u64;
    if i == k {
        out.push(Multiset::from_positive(prefix.iter().copied()));
        return;
    }
    let start = prefix.last().copied().unwrap_or(1);
    // Position i carries weight k - i; every later position is at least `v`.
    let tail_weight: u64 = (1..=k - i).sum();
    for v in start..=n {
        if partial + v * tail_weight > n {
            break;
        }
        prefix.push(v);
        candidate_multisets(n, k, prefix, partial + v * (k - i), out);
        prefix.pop();
    }
}

/// Every admissible tuple for `(n, A, mode)` in lexicographic order, found by
/// direct backtracking over multiplier values.
pub fn enumerate_solutions(n: u64, a: &Multiset, mode: Mode) -> Vec<SolutionTuple> {
    let coeffs = a.expand();
    // suffix[i] = sum of coefficients from position i on.
    let mut suffix = vec![0u64; coeffs.len() + 1];
    for i in (0..coeffs.len()).rev() {
        suffix[i] = suffix[i + 1] + coeffs[i];
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(coeffs.len());
    backtrack(&coeffs, &suffix, n, mode, &mut current, &mut |values| {
        out.push(SolutionTuple {
            multiset: a.clone(),
            values: values.to_vec(),
        })
    });
    out
}

fn backtrack(
    coeffs: &[u64],
    suffix: &[u64],
    remaining: u64,
    mode: Mode,
    current: &mut Vec<u64>,
    emit: &mut dyn FnMut(&[u64]),
) {
    let i = current.len();
    if i == coeffs.len() {
        if remaining == 0 {
            emit(current);
        }
        return;
    }
    let a = coeffs[i];
    let same_run = i > 0 && coeffs[i - 1] == a;
    let lower = match (mode, same_run) {
        (Mode::Natural, true) => current[i - 1],
        (Mode::Distinct, true) => current[i - 1] + 1,
        _ => 1,
    };
    let mut x = lower;
    // Later positions need at least one unit each.
    while a * x + suffix[i + 1] <= remaining {
        if mode == Mode::Natural || !current.contains(&x) {
            current.push(x);
            backtrack(coeffs, suffix, remaining - a * x, mode, current, emit);
            current.pop();
        }
        x += 1;
    }
}
