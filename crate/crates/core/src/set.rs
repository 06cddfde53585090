//! Input sets for the subset-sum solvers and their on-disk formats.
//!
//! Two file formats are accepted: plain text with one integer per line (`#` starts a comment,
//! blank lines are ignored), or a JSON array of integers.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::path::Path;

/// Largest accepted element magnitude. Keeps `n * max|a|` and the doubled sample count of the
/// spectral solver well inside `i64`/`u64`.
pub const MAX_ELEMENT_MAGNITUDE: i64 = 1 << 40;

/// A finite set of distinct nonzero integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct IntegerSet {
    elements: Vec<i64>,
}

impl IntegerSet {
    /// Validates distinctness, nonzero elements and `n >= 1`.
    pub fn new(elements: Vec<i64>) -> Result<Self> {
        let set = Self::new_multiset(elements)?;
        let mut seen = HashSet::with_capacity(set.len());
        for &a in &set.elements {
            if !seen.insert(a) {
                return Err(Error::InvalidSet(format!("duplicate element {a}")));
            }
        }
        Ok(set)
    }

    /// Like [`IntegerSet::new`] but accepts repeated values; counts then refer to sub-multisets.
    pub fn new_multiset(elements: Vec<i64>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidSet("set is empty".into()));
        }
        for &a in &elements {
            if a == 0 {
                return Err(Error::InvalidSet("zero element collides with the DC term".into()));
            }
            if a.abs() > MAX_ELEMENT_MAGNITUDE {
                return Err(Error::InvalidSet(format!(
                    "element {a} exceeds the magnitude limit {MAX_ELEMENT_MAGNITUDE}"
                )));
            }
        }
        if elements.len() > 4096 {
            return Err(Error::TooLarge { what: "integer set", n: elements.len(), limit: 4096 });
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Sum of the positive elements.
    pub fn positive_sum(&self) -> i64 {
        self.elements.iter().filter(|&&a| a > 0).sum()
    }

    /// Sum of the negative elements (a nonpositive number).
    pub fn negative_sum(&self) -> i64 {
        self.elements.iter().filter(|&&a| a < 0).sum()
    }

    pub fn total(&self) -> i64 {
        self.elements.iter().sum()
    }

    pub fn max_abs(&self) -> i64 {
        self.elements.iter().map(|a| a.abs()).max().unwrap_or(0)
    }

    /// Parses the text format or a JSON array, whichever the content looks like.
    pub fn parse(text: &str, allow_duplicates: bool) -> Result<Self> {
        let elements = if text.trim_start().starts_with('[') {
            serde_json::from_str::<Vec<i64>>(text).map_err(|e| Error::Parse {
                line: e.line(),
                message: e.to_string(),
            })?
        } else {
            parse_lines(text)?
        };
        if allow_duplicates {
            Self::new_multiset(elements)
        } else {
            Self::new(elements)
        }
    }

    pub fn from_file(path: impl AsRef<Path>, allow_duplicates: bool) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, allow_duplicates)
    }
}

fn parse_lines(text: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cleaned: String = line.chars().filter(|c| *c != '_' && *c != ',').collect();
        let value = cleaned.parse::<i64>().map_err(|e| Error::Parse {
            line: i + 1,
            message: format!("{line:?}: {e}"),
        })?;
        out.push(value);
    }
    Ok(out)
}

impl TryFrom<Vec<i64>> for IntegerSet {
    type Error = Error;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<IntegerSet> for Vec<i64> {
    fn from(s: IntegerSet) -> Self {
        s.elements
    }
}

/// The 27-element set used for the large-scale spectral benchmark.
pub const BENCHMARK_SET_27: [i64; 27] = [
    -3_639_314, 3_692_922, 797_045, 498_601, -3_550_452, 3_530_307, 1_220_548, -1_490_478,
    132_492, -981_923, -4_240_333, -2_600_841, -3_766_812, -3_160_924, -2_600_478, -827_335,
    -4_503_456, 4_027_146, 4_447_855, -91_368, -107_483, -1_622_812, 4_000_519, -1_307_540,
    -3_887_975, 2_802_502, -1_102_621,
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_duplicates_and_empty() {
        assert!(matches!(IntegerSet::new(vec![]), Err(Error::InvalidSet(_))));
        assert!(matches!(IntegerSet::new(vec![1, 0]), Err(Error::InvalidSet(_))));
        assert!(matches!(IntegerSet::new(vec![2, 2]), Err(Error::InvalidSet(_))));
        assert!(IntegerSet::new_multiset(vec![2, 2]).is_ok());
    }

    #[test]
    fn text_format_with_comments() {
        let set = IntegerSet::parse("# tiny\n1\n\n  -2  # negative\n3_000\n", false).unwrap();
        assert_eq!(set.elements(), &[1, -2, 3000]);
    }

    #[test]
    fn json_format() {
        let set = IntegerSet::parse("[5, -7, 9]", false).unwrap();
        assert_eq!(set.elements(), &[5, -7, 9]);
    }

    #[test]
    fn parse_error_reports_line() {
        match IntegerSet::parse("1\n2\nthree\n", false) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn benchmark_set_is_valid() {
        let set = IntegerSet::new(BENCHMARK_SET_27.to_vec()).unwrap();
        assert_eq!(set.len(), 27);
        assert_eq!(set.elements().iter().filter(|a| **a > 0).count(), 10);
    }
}
