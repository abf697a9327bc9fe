//! Restricted integer partitions over coefficient multisets, and the count of
//! non-intersecting circle arrangements built on them.
//!
//! ```
//! use finpart::{Engine, Multiset};
//!
//! let a: Multiset = "1,2,2,3".parse().unwrap();
//! let mut engine = Engine::new();
//! assert_eq!(engine.d(17, &a), 18u32.into());
//! assert_eq!(engine.delta(18, &a), 3u32.into());
//! assert_eq!(finpart::circles_count(6), 48u32.into());
//! ```

pub mod checks;
pub mod circles;
pub mod closed_forms;
pub mod counting;
pub mod multiset;
mod serde_util;
pub mod verification;

pub use circles::{
    canonical_form, circles_count, circles_count_terms, multichoose, parse_forest, CircleTable, CircleTerm,
    Forest, ParseError, Tree,
};
pub use closed_forms::{ClosedFormError, FormulaId, ValidityReport};
pub use counting::{enumerate_solutions, Count, Engine, Mode, Pivot, SolutionTuple};
pub use multiset::{Multiset, MultisetError};
pub use verification::{OracleBudget, VerificationError};
