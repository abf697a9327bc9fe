//! Coefficient multisets `A = {a_1, ..., a_k}` in run-length canonical form.
//!
//! A [`Multiset`] stores `(value, multiplicity)` pairs sorted strictly
//! ascending by value. The textual form used by the CLI and JSON output is the
//! ascending expansion joined by commas (`1,2,2,3`); the empty string is the
//! empty multiset.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultisetError {
    #[error("multiset values must be positive, got {0}")]
    NonPositive(i64),
    #[error("cannot parse multiset element {0:?}")]
    Malformed(String),
    #[error("cannot remove {count} copies of {value}: multiplicity is {available}")]
    NotEnoughCopies { value: u64, count: u64, available: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Multiset {
    entries: Vec<(u64, u64)>,
}

impl Multiset {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds the canonical multiset from values in any order.
    pub fn canonicalize<I>(values: I) -> Result<Self, MultisetError>
    where
        I: IntoIterator<Item = i64>,
    {
        let mut sorted = Vec::new();
        for v in values {
            if v <= 0 {
                return Err(MultisetError::NonPositive(v));
            }
            sorted.push(v as u64);
        }
        Ok(Self::from_positive(sorted))
    }

    /// Same as [`Multiset::canonicalize`] for values already known to be
    /// positive.
    ///
    /// # Panics
    ///
    /// Panics if any value is zero.
    pub fn from_positive<I>(values: I) -> Self
    where
        I: IntoIterator<Item = u64>,
    {
        let mut sorted: Vec<u64> = values.into_iter().collect();
        assert!(sorted.iter().all(|&v| v >= 1), "multiset values must be positive");
        sorted.sort_unstable();
        let mut entries: Vec<(u64, u64)> = Vec::new();
        for v in sorted {
            match entries.last_mut() {
                Some((last, mult)) if *last == v => *mult += 1,
                _ => entries.push((v, 1)),
            }
        }
        Self { entries }
    }

    /// `k` copies of 1.
    pub fn ones(k: u64) -> Self {
        if k == 0 {
            Self::empty()
        } else {
            Self { entries: vec![(1, k)] }
        }
    }

    /// `{1, 2, ..., n}`.
    pub fn range(n: u64) -> Self {
        Self {
            entries: (1..=n).map(|v| (v, 1)).collect(),
        }
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of elements counted with multiplicity.
    pub fn size(&self) -> u64 {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    /// Sum of the elements counted with multiplicity.
    pub fn sigma(&self) -> u64 {
        self.entries.iter().map(|&(v, m)| v * m).sum()
    }

    pub fn multiplicity(&self, value: u64) -> u64 {
        self.entries
            .binary_search_by_key(&value, |&(v, _)| v)
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    /// The underlying set of distinct values, ascending.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|&(v, _)| v)
    }

    pub fn min_value(&self) -> Option<u64> {
        self.entries.first().map(|&(v, _)| v)
    }

    pub fn max_value(&self) -> Option<u64> {
        self.entries.last().map(|&(v, _)| v)
    }

    /// Ascending expansion `a_1 <= ... <= a_k`.
    pub fn expand(&self) -> Vec<u64> {
        self.entries
            .iter()
            .flat_map(|&(v, m)| std::iter::repeat_n(v, m as usize))
            .collect()
    }

    /// Removes `count` copies of `value`; the entry disappears when its
    /// multiplicity reaches zero.
    pub fn remove_copies(&self, value: u64, count: u64) -> Result<Self, MultisetError> {
        if count == 0 {
            return Ok(self.clone());
        }
        let available = self.multiplicity(value);
        if count > available {
            return Err(MultisetError::NotEnoughCopies {
                value,
                count,
                available,
            });
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for &(v, m) in &self.entries {
            if v != value {
                entries.push((v, m));
            } else if m > count {
                entries.push((v, m - count));
            }
        }
        Ok(Self { entries })
    }

    /// `sum_{i=1}^{k} (k + 1 - i) * a_i` over the ascending expansion: the
    /// least target admitting pairwise distinct positive multipliers.
    pub fn min_distinct_sum(&self) -> u64 {
        let k = self.size();
        self.expand()
            .iter()
            .enumerate()
            .map(|(i, &a)| (k - i as u64) * a)
            .sum()
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in self.expand() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Multiset {
    type Err = MultisetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let values = s
            .split(',')
            .map(|part| {
                let part = part.trim();
                part.parse::<i64>()
                    .map_err(|_| MultisetError::Malformed(part.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::canonicalize(values)
    }
}

impl Serialize for Multiset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Multiset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
