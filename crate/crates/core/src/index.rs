//! Indices `(k_1, ..., k_r)` of elliptic multiple zeta values.
//!
//! An index doubles as a word `e_{k_1} ... e_{k_r}` in the shuffle algebra, so
//! the same type keys both [`crate::word::WordCombo`] and the atoms of
//! [`crate::expr::Expression`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entries must stay strictly below this bound.
pub const ENTRY_LIMIT: u64 = 1 << 31;

/// A finite tuple of non-negative integers. The empty tuple is allowed.
///
/// Ordering is canonical: by length, then weight, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Index(Vec<u32>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Build an [`Index`] from literal entries, panicking on out-of-range values.
#[macro_export]
macro_rules! index {
    () => { $crate::index::Index::empty() };
    ($($e:expr),+ $(,)?) => {
        $crate::index::Index::new(vec![$($e as u64),+]).expect("index entry out of range")
    };
}

impl Index {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        let mut out = Vec::with_capacity(entries.len());
        for e in entries {
            if e >= ENTRY_LIMIT {
                return Err(Error::EntryOverflow(e));
            }
            out.push(e as u32);
        }
        Ok(Index(out))
    }

    pub fn empty() -> Self {
        Index(Vec::new())
    }

    /// Entries are taken as-is; callers only rearrange entries of valid indices.
    pub(crate) fn from_entries(entries: Vec<u32>) -> Self {
        debug_assert!(entries.iter().all(|&e| (e as u64) < ENTRY_LIMIT));
        Index(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn parity(&self) -> Parity {
        if (self.weight() + self.len() as u64) % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn first(&self) -> Option<u32> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// Neither the first nor the last entry equals 1.
    pub fn is_admissible(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&a), Some(&b)) => a != 1 && b != 1,
            _ => true,
        }
    }

    pub fn is_zero_one(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    pub fn reversed(&self) -> Index {
        let mut v = self.0.clone();
        v.reverse();
        Index(v)
    }

    /// The first `i` entries.
    pub fn prefix(&self, i: usize) -> Index {
        Index(self.0[..i].to_vec())
    }

    /// Everything after the first `i` entries.
    pub fn suffix(&self, i: usize) -> Index {
        Index(self.0[i..].to_vec())
    }

    pub fn concat(&self, other: &Index) -> Index {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Index(v)
    }

    pub fn push(&self, entry: u32) -> Index {
        let mut v = self.0.clone();
        v.push(entry);
        Index(v)
    }

    pub fn prepend(&self, entry: u32) -> Index {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(entry);
        v.extend_from_slice(&self.0);
        Index(v)
    }

    /// Number of trailing entries equal to 1.
    pub fn trailing_ones(&self) -> usize {
        self.0.iter().rev().take_while(|&&e| e == 1).count()
    }
}

impl Ord for Index {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.weight().cmp(&other.weight()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Index {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Index {
    type Err = Error;

    /// Comma-separated decimal entries; `-` is the empty index.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-" {
            return Ok(Index::empty());
        }
        if s.is_empty() {
            return Err(Error::IndexParse(s.to_string()));
        }
        let mut entries = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::IndexParse(s.to_string()));
            }
            let v: u64 = part
                .parse()
                .map_err(|_| Error::IndexParse(s.to_string()))?;
            entries.push(v);
        }
        Index::new(entries)
    }
}

impl From<&[u32]> for Index {
    fn from(v: &[u32]) -> Self {
        Index::new(v.iter().map(|&e| e as u64).collect()).expect("index entry out of range")
    }
}

/// All indices of the given length whose entries sum to `weight`, zero parts
/// allowed, in lexicographic order.
pub fn compositions(weight: u32, length: usize) -> Vec<Index> {
    fn rec(rem: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Index>) {
        if slots == 1 {
            cur.push(rem);
            out.push(Index(cur.clone()));
            cur.pop();
            return;
        }
        for first in 0..=rem {
            cur.push(first);
            rec(rem - first, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if length == 0 {
        if weight == 0 {
            out.push(Index::empty());
        }
        return out;
    }
    rec(weight, length, &mut Vec::with_capacity(length), &mut out);
    out
}

/// Every index with `1 <= length <= max_length` and `weight <= max_weight`,
/// in canonical order.
pub fn indices_up_to(max_weight: u32, max_length: usize) -> Vec<Index> {
    let mut out = Vec::new();
    for len in 1..=max_length {
        for w in 0..=max_weight {
            out.extend(compositions(w, len));
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bookkeeping() {
        let k = index![1, 2, 0];
        assert_eq!(k.weight(), 3);
        assert_eq!(k.len(), 3);
        assert_eq!(k.parity(), Parity::Even);
        assert!(!k.is_admissible());
        assert!(index![0, 2].is_admissible());
        assert!(Index::empty().is_admissible());
        assert!(index![1, 0, 1].is_zero_one());
        assert_eq!(index![2, 1, 1].trailing_ones(), 2);
    }

    #[test]
    fn parse_and_print() {
        assert_eq!("1,2,0".parse::<Index>().unwrap(), index![1, 2, 0]);
        assert_eq!("-".parse::<Index>().unwrap(), Index::empty());
        assert_eq!(index![3, 0].to_string(), "3,0");
        assert_eq!(Index::empty().to_string(), "-");
        assert!("1,,2".parse::<Index>().is_err());
        assert!("a".parse::<Index>().is_err());
        assert!(matches!(
            "2147483648".parse::<Index>(),
            Err(Error::EntryOverflow(_))
        ));
    }

    #[test]
    fn canonical_order() {
        let mut v = vec![index![0, 2], index![5], index![1, 1], index![0, 0, 0]];
        v.sort();
        assert_eq!(v, vec![index![5], index![0, 2], index![1, 1], index![0, 0, 0]]);
    }

    #[test]
    fn composition_counts() {
        // C(w + r - 1, r - 1)
        assert_eq!(compositions(5, 4).len(), 56);
        assert_eq!(compositions(0, 3).len(), 1);
        assert_eq!(indices_up_to(5, 4).len(), 6 + 21 + 56 + 126);
    }
}
