//! Counts exceed 64 bits, so they go over the wire as decimal strings.

use std::fmt::Display;

use serde::Serializer;

pub fn as_decimal<T: Display, S: Serializer>(value: &T, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

