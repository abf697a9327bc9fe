//! Independent oracles. Nothing here calls into the counting recursions or the
//! circle-count sum; the oracles are meant to be obviously correct, not fast.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::circles::{canonical_form, parse_forest, Forest, Tree};
use crate::counting::Count;
use crate::multiset::Multiset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerificationError {
    #[error("{what} = {requested} exceeds the oracle budget of {limit}")]
    BudgetExceeded {
        what: &'static str,
        requested: u64,
        limit: u64,
    },
    #[error("rooted-tree recurrence: {numerator} is not divisible by {divisor}")]
    InexactDivision { numerator: BigUint, divisor: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Largest `sigma(A)` an exhaustive count accepts.
    pub max_sigma: u64,
    pub max_n: u64,
    pub max_forest_nodes: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_sigma: 8,
            max_n: 40,
            max_forest_nodes: 10,
        }
    }
}

impl OracleBudget {
    fn check(&self, n: u64, a: &Multiset) -> Result<(), VerificationError> {
        if n > self.max_n {
            return Err(VerificationError::BudgetExceeded {
                what: "n",
                requested: n,
                limit: self.max_n,
            });
        }
        if a.sigma() > self.max_sigma {
            return Err(VerificationError::BudgetExceeded {
                what: "sigma(A)",
                requested: a.sigma(),
                limit: self.max_sigma,
            });
        }
        Ok(())
    }

    fn check_forest(&self, n: u64) -> Result<(), VerificationError> {
        if n > self.max_forest_nodes {
            return Err(VerificationError::BudgetExceeded {
                what: "forest nodes",
                requested: n,
                limit: self.max_forest_nodes,
            });
        }
        Ok(())
    }
}

struct Search<'a> {
    coeffs: &'a [u64],
    smallest: u64,
    distinct: bool,
    chosen: Vec<u64>,
    found: u64,
}

impl Search<'_> {
    fn run(&mut self, remaining: u64) {
        let i = self.chosen.len();
        if i == self.coeffs.len() {
            if remaining == 0 {
                self.found += 1;
            }
            return;
        }
        let a = self.coeffs[i];
        for x in self.smallest..=remaining / a {
            if i > 0 && self.coeffs[i - 1] == a {
                let prev = self.chosen[i - 1];
                if x < prev || (self.distinct && x == prev) {
                    continue;
                }
            }
            if self.distinct && self.chosen.contains(&x) {
                continue;
            }
            self.chosen.push(x);
            self.run(remaining - a * x);
            self.chosen.pop();
        }
    }
}

fn exhaustive(n: u64, a: &Multiset, smallest: u64, distinct: bool) -> Count {
    let coeffs = a.expand();
    let mut search = Search {
        coeffs: &coeffs,
        smallest,
        distinct,
        chosen: Vec::with_capacity(coeffs.len()),
        found: 0,
    };
    search.run(n);
    Count::from(search.found)
}

/// Positive tuples, weakly increasing inside equal coefficients.
pub fn d_bruteforce(n: u64, a: &Multiset, budget: &OracleBudget) -> Result<Count, VerificationError> {
    budget.check(n, a)?;
    Ok(exhaustive(n, a, 1, false))
}

/// Pairwise distinct positive tuples, strictly increasing inside equal
/// coefficients.
pub fn delta_bruteforce(n: u64, a: &Multiset, budget: &OracleBudget) -> Result<Count, VerificationError> {
    budget.check(n, a)?;
    Ok(exhaustive(n, a, 1, true))
}

/// Non-negative tuples, weakly increasing inside equal coefficients.
pub fn d0_bruteforce(n: u64, a: &Multiset, budget: &OracleBudget) -> Result<Count, VerificationError> {
    budget.check(n, a)?;
    Ok(exhaustive(n, a, 0, false))
}

/// Pairwise distinct non-negative tuples.
pub fn delta0_bruteforce(n: u64, a: &Multiset, budget: &OracleBudget) -> Result<Count, VerificationError> {
    budget.check(n, a)?;
    Ok(exhaustive(n, a, 0, true))
}

/// Every multiset with `sigma(A) <= max_sigma`, the empty one included.
pub fn multisets_up_to_sigma(max_sigma: u64) -> Vec<Multiset> {
    fn extend(rest: u64, smallest: u64, prefix: &mut Vec<u64>, out: &mut Vec<Multiset>) {
        out.push(Multiset::from_positive(prefix.iter().copied()));
        for v in smallest..=rest {
            prefix.push(v);
            extend(rest - v, v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(max_sigma, 1, &mut Vec::new(), &mut out);
    out
}

/// `[C_0, ..., C_{n_max}]` from the classical rooted-tree recurrence
/// `t(m+1) = (1/m) sum_{j=1}^{m} (sum_{d | j} d t(d)) t(m-j+1)`, `t(1) = 1`,
/// with `C_n = t(n + 1)`.
pub fn rooted_trees_euler(n_max: usize) -> Result<Vec<Count>, VerificationError> {
    // t[v] = rooted trees on v vertices; index 0 unused.
    let mut t: Vec<BigUint> = vec![BigUint::zero(), BigUint::one()];
    let mut divisor_sums: Vec<BigUint> = vec![BigUint::zero()];
    for m in 1..=n_max {
        let s: BigUint = (1..=m)
            .filter(|d| m % d == 0)
            .map(|d| &t[d] * BigUint::from(d))
            .sum();
        divisor_sums.push(s);
        let numerator: BigUint = (1..=m).map(|j| &divisor_sums[j] * &t[m - j + 1]).sum();
        let (q, r) = numerator.div_rem(&BigUint::from(m));
        if !r.is_zero() {
            return Err(VerificationError::InexactDivision {
                numerator,
                divisor: m as u64,
            });
        }
        t.push(q);
    }
    Ok(t.into_iter().skip(1).take(n_max + 1).collect())
}

/// Every balanced-parenthesis string with `n` pairs, i.e. every ordered
/// forest on `n` nodes.
pub fn ordered_forests(n: usize) -> Vec<String> {
    fn build(open: usize, close: usize, n: usize, cur: &mut String, out: &mut Vec<String>) {
        if cur.len() == 2 * n {
            out.push(cur.clone());
            return;
        }
        if open < n {
            cur.push('(');
            build(open + 1, close, n, cur, out);
            cur.pop();
        }
        if close < open {
            cur.push(')');
            build(open, close + 1, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    build(0, 0, n, &mut String::with_capacity(2 * n), &mut out);
    out
}

/// Distinct canonical forms of all forests on `n` nodes, sorted.
pub fn enumerate_canonical_forests(n: usize, budget: &OracleBudget) -> Result<Vec<String>, VerificationError> {
    budget.check_forest(n as u64)?;
    Ok(canonical_forests_unbudgeted(n))
}

pub(crate) fn canonical_forests_unbudgeted(n: usize) -> Vec<String> {
    let distinct: BTreeSet<String> = ordered_forests(n)
        .iter()
        .map(|s| canonical_form(&parse_forest(s).expect("generated strings are balanced")))
        .collect();
    distinct.into_iter().collect()
}

/// Unordered-forest isomorphism by searching for a matching between the two
/// sibling lists at every level.
pub fn forests_isomorphic(a: &Forest, b: &Forest) -> bool {
    lists_isomorphic(&a.trees, &b.trees)
}

fn trees_isomorphic(a: &Tree, b: &Tree) -> bool {
    lists_isomorphic(&a.children, &b.children)
}

fn lists_isomorphic(a: &[Tree], b: &[Tree]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    match_from(a, b, &mut used)
}

fn match_from(a: &[Tree], b: &[Tree], used: &mut [bool]) -> bool {
    let Some((first, rest)) = a.split_first() else {
        return true;
    };
    for j in 0..b.len() {
        if !used[j] && trees_isomorphic(first, &b[j]) {
            used[j] = true;
            if match_from(rest, b, used) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(values: &[u64]) -> Multiset {
        Multiset::from_positive(values.iter().copied())
    }

    fn c(v: u64) -> Count {
        Count::from(v)
    }

    #[test]
    fn d_bruteforce_examples() {
        let b = OracleBudget::default();
        assert_eq!(d_bruteforce(17, &ms(&[1, 2, 2, 3]), &b).unwrap(), c(18));
        assert_eq!(d_bruteforce(5, &ms(&[2, 3]), &b).unwrap(), c(1));
        assert_eq!(d_bruteforce(0, &Multiset::empty(), &b).unwrap(), c(1));
        assert_eq!(d_bruteforce(25, &ms(&[1, 2, 2, 3]), &b).unwrap(), c(72));
    }

    #[test]
    fn delta_bruteforce_examples() {
        let b = OracleBudget::default();
        assert_eq!(delta_bruteforce(18, &ms(&[1, 2, 2, 3]), &b).unwrap(), c(3));
        assert_eq!(delta_bruteforce(16, &ms(&[1, 2, 2, 3]), &b).unwrap(), c(0));
        assert_eq!(delta_bruteforce(17, &ms(&[1, 2, 2, 3]), &b).unwrap(), c(1));
        assert_eq!(delta_bruteforce(3, &ms(&[1, 1]), &b).unwrap(), c(1));
    }

    #[test]
    fn nonnegative_oracles() {
        let b = OracleBudget::default();
        assert_eq!(d0_bruteforce(17, &ms(&[1, 2, 2, 3]), &b).unwrap(), c(72));
        assert_eq!(delta0_bruteforce(10, &ms(&[1, 2, 2, 3]), &b).unwrap(), c(3));
        assert_eq!(delta0_bruteforce(0, &ms(&[1, 2]), &b).unwrap(), c(0));
        assert_eq!(delta0_bruteforce(0, &ms(&[5]), &b).unwrap(), c(1));
    }

    #[test]
    fn budgets_are_enforced() {
        let b = OracleBudget::default();
        assert!(matches!(
            d_bruteforce(41, &ms(&[1]), &b),
            Err(VerificationError::BudgetExceeded { what: "n", .. })
        ));
        assert!(matches!(
            delta_bruteforce(10, &ms(&[9]), &b),
            Err(VerificationError::BudgetExceeded { what: "sigma(A)", .. })
        ));
        assert!(enumerate_canonical_forests(11, &b).is_err());
    }

    #[test]
    fn multisets_by_mass() {
        // 1 + p(1) + ... + p(4)
        assert_eq!(multisets_up_to_sigma(4).len(), 1 + 1 + 2 + 3 + 5);
        assert_eq!(multisets_up_to_sigma(8).len(), 67);
        assert!(multisets_up_to_sigma(8).iter().all(|a| a.sigma() <= 8));
    }

    #[test]
    fn euler_recurrence_values() {
        let v = rooted_trees_euler(5).unwrap();
        assert_eq!(v, [1u64, 1, 2, 4, 9, 20].map(c).to_vec());
        assert_eq!(rooted_trees_euler(6).unwrap()[6], c(48));
        assert_eq!(rooted_trees_euler(8).unwrap()[8], c(286));
        assert_eq!(rooted_trees_euler(0).unwrap(), vec![c(1)]);
    }

    #[test]
    fn canonical_forest_enumeration() {
        let b = OracleBudget::default();
        let three = enumerate_canonical_forests(3, &b).unwrap();
        assert_eq!(three, ["((()))", "(()())", "(())()", "()()()"]);
        assert_eq!(enumerate_canonical_forests(4, &b).unwrap().len(), 9);
        assert_eq!(enumerate_canonical_forests(0, &b).unwrap(), [""]);
    }

    #[test]
    fn isomorphism_tester() {
        let f = |s: &str| parse_forest(s).unwrap();
        assert!(forests_isomorphic(&f("((())())"), &f("(()(()))")));
        assert!(forests_isomorphic(&f("()(())"), &f("(())()")));
        assert!(!forests_isomorphic(&f("(())()"), &f("(()())")));
        assert!(!forests_isomorphic(&f("((()))"), &f("(())()")));
        assert!(forests_isomorphic(&f(""), &f("")));
    }
}
