//! Non-intersecting circle arrangements.
//!
//! An arrangement of `n` circles is an unordered forest: each circle is a node
//! whose children are the circles directly inside it. Written as balanced
//! parentheses, `((~))(~)` is a circle containing one circle next to an empty
//! circle. Adding a virtual root turns a forest of `n` nodes into a rooted
//! tree on `n + 1` vertices.
//!
//! The count `C_n` groups the outermost components by size: an arrangement
//! with `a` components of `x` circles each picks those components with
//! repetition from the `C_{x-1}` shapes of a circle around `x - 1` circles.
//! Grouping the component sizes of `n` into distinct sizes `x_j` with
//! multiplicities `a_j` gives one term `prod multichoose(C_{x_j - 1}, a_j)` per
//! partition of `n`, i.e. one term per pair `(A, x)` with `A = {a_j}`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::counting::{Count, SolutionTuple};
use crate::multiset::Multiset;
use crate::serde_util::as_decimal;
use crate::verification::{self, OracleBudget, VerificationError};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tree {
    pub children: Vec<Tree>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Forest {
    pub trees: Vec<Tree>,
}

impl Tree {
    pub fn leaf() -> Self {
        Self::default()
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Tree::size).sum::<usize>()
    }

    fn canonicalized(&self) -> (Tree, String) {
        let (children, rendered) = canonical_children(&self.children);
        (Tree { children }, format!("({rendered})"))
    }
}

fn canonical_children(trees: &[Tree]) -> (Vec<Tree>, String) {
    let mut keyed: Vec<(usize, String, Tree)> = trees
        .iter()
        .map(|t| {
            let (tree, s) = t.canonicalized();
            (tree.size(), s, tree)
        })
        .collect();
    keyed.sort_by(|a, b| sibling_order((a.0, &a.1), (b.0, &b.1)));
    let rendered = keyed.iter().map(|(_, s, _)| s.as_str()).collect();
    (keyed.into_iter().map(|(_, _, t)| t).collect(), rendered)
}

/// Larger subtrees first, ties broken by the canonical string.
fn sibling_order(a: (usize, &String), b: (usize, &String)) -> Ordering {
    b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1))
}

impl Forest {
    pub fn new(trees: Vec<Tree>) -> Self {
        Self { trees }
    }

    /// Number of circles.
    pub fn size(&self) -> usize {
        self.trees.iter().map(Tree::size).sum()
    }

    /// Same forest with siblings in canonical order at every level.
    pub fn canonicalize(&self) -> Forest {
        Forest::new(canonical_children(&self.trees).0)
    }

    /// The rooted tree obtained by placing the whole arrangement inside one
    /// extra vertex.
    pub fn into_rooted_tree(self) -> Tree {
        Tree { children: self.trees }
    }
}

/// Renders the forest in its current sibling order, without `~`.
impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_tree(t: &Tree, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str("(")?;
            for c in &t.children {
                write_tree(c, f)?;
            }
            f.write_str(")")
        }
        for t in &self.trees {
            write_tree(t, f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {found:?} at byte {offset}")]
    UnexpectedChar { offset: usize, found: char },
    #[error("unmatched ')' at byte {offset}")]
    UnmatchedClose { offset: usize },
    #[error("'(' opened at byte {opened_at} is not closed (input ends at byte {offset})")]
    Unclosed { offset: usize, opened_at: usize },
}

impl ParseError {
    /// Byte offset the error is reported at.
    pub fn offset(&self) -> usize {
        match *self {
            ParseError::UnexpectedChar { offset, .. }
            | ParseError::UnmatchedClose { offset }
            | ParseError::Unclosed { offset, .. } => offset,
        }
    }
}

/// Parses `forest := tree*`, `tree := '(' forest ')'`. Whitespace and the `~`
/// glyph are ignored.
pub fn parse_forest(text: &str) -> Result<Forest, ParseError> {
    let mut open: Vec<(usize, Vec<Tree>)> = Vec::new();
    let mut current: Vec<Tree> = Vec::new();
    for (offset, ch) in text.char_indices() {
        match ch {
            '(' => open.push((offset, std::mem::take(&mut current))),
            ')' => {
                let (_, parent) = open.pop().ok_or(ParseError::UnmatchedClose { offset })?;
                let children = std::mem::replace(&mut current, parent);
                current.push(Tree { children });
            }
            '~' => {}
            c if c.is_whitespace() => {}
            found => return Err(ParseError::UnexpectedChar { offset, found }),
        }
    }
    if let Some(&(opened_at, _)) = open.last() {
        return Err(ParseError::Unclosed {
            offset: text.len(),
            opened_at,
        });
    }
    Ok(Forest::new(current))
}

/// Isomorphism-complete string key of an unordered forest.
pub fn canonical_form(forest: &Forest) -> String {
    canonical_children(&forest.trees).1
}

/// Weakly increasing `r`-tuples over `{1..s}`: `binomial(r + s - 1, r)`.
pub fn multichoose(s: &Count, r: u64) -> Count {
    let mut acc = Count::one();
    // acc = binomial(s + i - 1, i) after step i
    for i in 1..=r {
        acc = acc * (s + Count::from(i - 1)) / Count::from(i);
    }
    acc
}

/// Lazily extended table `C_0, C_1, ...`.
#[derive(Debug, Clone)]
pub struct CircleTable {
    values: Vec<Count>,
}

impl Default for CircleTable {
    fn default() -> Self {
        Self {
            values: vec![Count::one()],
        }
    }
}

impl CircleTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// `C_n`, extending the table as needed.
    pub fn get(&mut self, n: usize) -> &Count {
        while self.values.len() <= n {
            let next = self.next_value();
            self.values.push(next);
        }
        &self.values[n]
    }

    /// `[C_0, ..., C_n]`.
    pub fn prefix(&mut self, n: usize) -> &[Count] {
        self.get(n);
        &self.values[..=n]
    }

    /// Sum over partitions of `n`, one part size at a time: `ways[m]` holds
    /// the weighted number of partitions of `m` using the sizes seen so far.
    fn next_value(&self) -> Count {
        let n = self.values.len();
        let mut ways = vec![Count::zero(); n + 1];
        ways[0] = Count::one();
        for size in 1..=n {
            let shapes = &self.values[size - 1];
            let weights: Vec<Count> = (0..=(n / size) as u64).map(|a| multichoose(shapes, a)).collect();
            let mut next = vec![Count::zero(); n + 1];
            for (m, slot) in next.iter_mut().enumerate() {
                for (a, w) in weights.iter().enumerate() {
                    let used = a * size;
                    if used > m {
                        break;
                    }
                    if !ways[m - used].is_zero() {
                        *slot += &ways[m - used] * w;
                    }
                }
            }
            ways = next;
        }
        ways.swap_remove(n)
    }
}

/// `C_n`.
pub fn circles_count(n: usize) -> Count {
    CircleTable::new().get(n).clone()
}

/// One `(A, x)` term of the circle count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircleTerm {
    #[serde(rename = "A")]
    pub multiset: Multiset,
    #[serde(rename = "x", serialize_with = "solution_values")]
    pub solution: SolutionTuple,
    #[serde(serialize_with = "as_decimal")]
    pub term: Count,
}

fn solution_values<S: serde::Serializer>(s: &SolutionTuple, ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(&s.values)
}

/// Every term of `C_n` with its value, ordered by `k`, then `A`, then `x`.
pub fn circles_count_terms(table: &mut CircleTable, n: usize) -> Vec<CircleTerm> {
    if n == 0 {
        return Vec::new();
    }
    let shapes = table.prefix(n - 1).to_vec();
    let mut groups = Vec::new();
    let mut terms = Vec::new();
    partitions_by_size(n, n, &mut groups, &mut |groups| {
        // (multiplicity a, part size x) ascending aligns x with A's expansion.
        let mut pairs: Vec<(u64, u64)> = groups.iter().map(|&(x, a)| (a as u64, x as u64)).collect();
        pairs.sort_unstable();
        let multiset = Multiset::from_positive(pairs.iter().map(|p| p.0));
        let term = pairs
            .iter()
            .map(|&(a, x)| multichoose(&shapes[x as usize - 1], a))
            .fold(Count::one(), |acc, t| acc * t);
        terms.push(CircleTerm {
            solution: SolutionTuple {
                multiset: multiset.clone(),
                values: pairs.iter().map(|p| p.1).collect(),
            },
            multiset,
            term,
        });
    });
    terms.sort_by(|a, b| {
        let key = |t: &CircleTerm| (t.multiset.size(), t.multiset.expand(), t.solution.values.clone());
        key(a).cmp(&key(b))
    });
    terms
}

/// `(part size, multiplicity)` pairs of one partition.
type Groups = [(usize, usize)];

/// Partitions of `n` as `(part size, multiplicity)` groups with part sizes
/// strictly decreasing and at most `max_size`.
fn partitions_by_size(
    n: usize,
    max_size: usize,
    groups: &mut Vec<(usize, usize)>,
    emit: &mut dyn FnMut(&Groups),
) {
    if n == 0 {
        emit(groups);
        return;
    }
    for size in (1..=max_size.min(n)).rev() {
        for mult in 1..=n / size {
            groups.push((size, mult));
            partitions_by_size(n - size * mult, size - 1, groups, emit);
            groups.pop();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForestTreeCheck {
    pub n: usize,
    pub forests: usize,
    pub trees_with_n_plus_1: usize,
    pub equal: bool,
}

/// Counts canonical forests on `n` nodes and canonical single trees on
/// `n + 1` nodes by exhaustive generation.
pub fn forest_to_tree_count_check(
    n: usize,
    budget: &OracleBudget,
) -> Result<ForestTreeCheck, VerificationError> {
    let forests = verification::enumerate_canonical_forests(n, budget)?.len();
    // The tree side needs one node more than the budgeted forest side.
    let trees = verification::canonical_forests_unbudgeted(n + 1)
        .iter()
        .filter(|s| parse_forest(s).map(|f| f.trees.len() == 1).unwrap_or(false))
        .count();
    Ok(ForestTreeCheck {
        n,
        forests,
        trees_with_n_plus_1: trees,
        equal: forests == trees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: u64) -> Count {
        Count::from(v)
    }

    #[test]
    fn multichoose_examples() {
        assert_eq!(multichoose(&c(1), 6), c(1));
        assert_eq!(multichoose(&c(3), 2), c(6));
        assert_eq!(multichoose(&c(17), 0), c(1));
        assert_eq!(multichoose(&c(0), 0), c(1));
        assert_eq!(multichoose(&c(0), 3), c(0));
        assert_eq!(multichoose(&c(4), 3), c(20));
    }

    #[test]
    fn multichoose_counts_weak_tuples() {
        for s in 0u64..6 {
            for r in 0u64..5 {
                let brute = (0..r).fold(vec![vec![]], |acc: Vec<Vec<u64>>, _| {
                    acc.into_iter()
                        .flat_map(|t| {
                            let lo = t.last().copied().unwrap_or(1);
                            (lo..=s).map(move |v| {
                                let mut t = t.clone();
                                t.push(v);
                                t
                            })
                        })
                        .collect()
                });
                assert_eq!(multichoose(&c(s), r), c(brute.len() as u64), "s={s} r={r}");
            }
        }
    }

    #[test]
    fn circle_counts_small() {
        let mut table = CircleTable::new();
        let values: Vec<Count> = table.prefix(9).to_vec();
        let expect: Vec<Count> = [1u64, 1, 2, 4, 9, 20, 48, 115, 286, 719].map(c).to_vec();
        assert_eq!(values, expect);
        assert_eq!(circles_count(4), c(9));
        assert_eq!(circles_count(0), c(1));
    }

    #[test]
    fn terms_for_six() {
        let mut table = CircleTable::new();
        let terms = circles_count_terms(&mut table, 6);
        let values: Vec<Count> = terms.iter().map(|t| t.term.clone()).collect();
        assert_eq!(values, [20u64, 3, 1, 1, 9, 4, 4, 2, 1, 1, 2].map(c).to_vec());
        let shown: Vec<(String, Vec<u64>)> = terms
            .iter()
            .map(|t| (t.multiset.to_string(), t.solution.values.clone()))
            .collect();
        assert_eq!(shown[4], ("1,1".to_string(), vec![1, 5]));
        assert_eq!(shown[6], ("1,2".to_string(), vec![4, 1]));
        assert_eq!(shown[10], ("1,1,1".to_string(), vec![1, 2, 3]));
        for t in &terms {
            assert!(t.solution.is_admissible(6, crate::counting::Mode::Distinct));
        }
    }

    #[test]
    fn terms_small_cases() {
        let mut table = CircleTable::new();
        let one = circles_count_terms(&mut table, 1);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].multiset, Multiset::ones(1));
        assert_eq!(one[0].solution.values, vec![1]);
        assert_eq!(one[0].term, c(1));
        let three: Count = circles_count_terms(&mut table, 3).into_iter().map(|t| t.term).sum();
        assert_eq!(three, c(4));
    }

    #[test]
    fn terms_json() {
        let mut table = CircleTable::new();
        let terms = circles_count_terms(&mut table, 6);
        let json = serde_json::to_value(&terms[0]).unwrap();
        assert_eq!(json, serde_json::json!({"A": "1", "x": [6], "term": "20"}));
    }

    #[test]
    fn parse_examples() {
        let f = parse_forest("((~))(~)").unwrap();
        assert_eq!(f.trees.len(), 2);
        assert_eq!(f.trees[0].size(), 2);
        assert_eq!(f.trees[1].size(), 1);
        assert_eq!(f.size(), 3);
        assert_eq!(parse_forest("").unwrap(), Forest::default());
        assert_eq!(parse_forest(" ( ~ ) \n").unwrap().size(), 1);
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let err = parse_forest("(()").unwrap_err();
        assert_eq!(err.offset(), 3);
        assert_eq!(err, ParseError::Unclosed { offset: 3, opened_at: 0 });
        assert_eq!(parse_forest("())").unwrap_err(), ParseError::UnmatchedClose { offset: 2 });
        assert_eq!(
            parse_forest("(x)").unwrap_err(),
            ParseError::UnexpectedChar { offset: 1, found: 'x' }
        );
    }

    #[test]
    fn canonical_form_examples() {
        let a = canonical_form(&parse_forest("(())()").unwrap());
        let b = canonical_form(&parse_forest("()(())").unwrap());
        assert_eq!(a, "(())()");
        assert_eq!(a, b);
        let a = canonical_form(&parse_forest("((())())").unwrap());
        let b = canonical_form(&parse_forest("(()(()))").unwrap());
        assert_eq!(a, b);
        assert_eq!(a, "((())())");
        assert_eq!(canonical_form(&Forest::default()), "");
        assert_eq!(canonical_form(&parse_forest("(~)(~)((~))").unwrap()), "(())()()");
    }

    #[test]
    fn canonicalize_matches_canonical_form() {
        let f = parse_forest("()((())())(()())").unwrap();
        let canon = f.canonicalize();
        assert_eq!(canon.to_string(), canonical_form(&f));
        assert_eq!(canonical_form(&canon), canonical_form(&f));
    }

    #[test]
    fn forest_tree_correspondence() {
        let budget = OracleBudget::default();
        for (n, v) in [(0, 1), (3, 4), (4, 9)] {
            let check = forest_to_tree_count_check(n, &budget).unwrap();
            assert_eq!((check.forests, check.trees_with_n_plus_1, check.equal), (v, v, true));
        }
        assert!(forest_to_tree_count_check(11, &budget).is_err());
    }

    #[test]
    fn rooted_tree_sizes() {
        let f = parse_forest("(())()").unwrap();
        let t = f.into_rooted_tree();
        assert_eq!(t.size(), 4);
    }
}
