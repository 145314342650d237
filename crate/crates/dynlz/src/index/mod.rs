//! Substring queries over the dynamic string.
//!
//! [`StringIndex`] is the contract the engine relies on. Three backends
//! implement it: [`NaiveIndex`] compares characters directly and serves as the
//! deterministic reference, [`FastIndex`] answers through fingerprints and
//! interval-partitioned suffix arrays, and [`SnapshotIndex`] rebuilds
//! whole-string tables after each edit so large measurements stay cheap.

mod fast;
mod naive;
mod partition;
mod snapshot;
mod stats;
pub(crate) mod text;

use serde::{Deserialize, Serialize};

pub use fast::{default_lmax, FastIndex};
pub use naive::NaiveIndex;
pub use snapshot::SnapshotIndex;
pub use stats::{Counts, IndexStats, Phase, Primitive};

use crate::dynstr::{DynString, EditOp, EditReceipt, Symbol};
use crate::error::{Error, Result};

/// Inclusive 1-based range `start..=end`; `start = end + 1` encodes an empty range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    /// The range of `len` positions starting at `start`.
    pub fn with_len(start: usize, len: usize) -> Self {
        Span { start, end: start + len - 1 }
    }

    pub fn len(&self) -> usize {
        (self.end + 1).saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.start == 0 || self.start > self.end + 1 || self.end > n {
            return Err(Error::BadRange { start: self.start, end: self.end, len: n });
        }
        Ok(())
    }

    fn check_pattern(&self, n: usize) -> Result<()> {
        self.check(n)?;
        if self.is_empty() {
            return Err(Error::EmptyPattern);
        }
        Ok(())
    }
}

/// Occurrences `first, first + step, ..., last` (absolute positions).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Progression {
    pub first: usize,
    pub last: usize,
    pub step: usize,
}

impl Progression {
    pub fn count(&self) -> usize {
        (self.last - self.first) / self.step + 1
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        (self.first..=self.last).step_by(self.step)
    }
}

/// A maximal progression of occurrences inside one run, with difference `p = per(pattern)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cluster {
    pub a: usize,
    pub b: usize,
    pub p: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Naive,
    Fast,
    Snapshot,
}

/// Backend construction parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexConfig {
    /// Seeds fingerprint bases and treap priorities.
    pub seed: u64,
    /// Highest interval level of the fast backend; `None` picks `2^lmax ≈ √n`.
    pub lmax: Option<u32>,
    /// Re-check the interval partition after every edit.
    pub debug_invariants: bool,
}

impl Default for IndexConfig {
    fn default() -> Self {
        IndexConfig { seed: 0x5eed_1234_abcd_0001, lmax: None, debug_invariants: false }
    }
}

/// The query contract shared by both backends.
///
/// All positions are 1-based. Every public query bumps its counter in
/// [`IndexStats`] under the current [`Phase`].
pub trait StringIndex {
    fn build(symbols: &[Symbol], config: &IndexConfig) -> Result<Self>
    where
        Self: Sized;

    fn kind(&self) -> BackendKind;

    fn dynstr(&self) -> &DynString;

    fn len(&self) -> usize {
        self.dynstr().len()
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn apply(&mut self, op: &EditOp) -> Result<EditReceipt>;

    /// Longest common prefix of `S[i..n]` and `S[j..n]`.
    fn lcp(&self, i: usize, j: usize) -> Result<usize>;

    /// Longest common suffix of `S[1..i]` and `S[1..j]`.
    fn lcs(&self, i: usize, j: usize) -> Result<usize>;

    /// Occurrences of `pattern` in `text` where `|text| <= 2|pattern|`, as at
    /// most two progressions with difference `per(pattern)`.
    fn ipm(&self, pattern: Span, text: Span) -> Result<Vec<Progression>>;

    /// All occurrences of `pattern` in `text` as maximal clusters.
    fn clusters(&self, pattern: Span, text: Span) -> Result<Vec<Cluster>>;

    fn exists(&self, pattern: Span, text: Span) -> Result<bool>;

    /// Leftmost occurrence start of `pattern` inside `text`.
    fn first_occ(&self, pattern: Span, text: Span) -> Result<Option<usize>>;

    /// Rightmost occurrence start of `pattern` inside `text`.
    fn last_occ(&self, pattern: Span, text: Span) -> Result<Option<usize>>;

    /// Smallest period of the pattern.
    fn period(&self, pattern: Span) -> Result<usize>;

    fn stats(&self) -> IndexStats;

    fn reset_stats(&self);

    /// Tags subsequent primitive calls.
    fn set_phase(&self, phase: Phase);
}

/// Number of `2|P|`-windows stepped by `|P|` needed to tile a text.
pub(crate) fn window_count(m: usize, t: usize) -> usize {
    if t < m {
        0
    } else {
        (t - m) / m + 1
    }
}

/// Groups sorted occurrences into maximal progressions with difference `per`.
pub(crate) fn group_occurrences(occ: &[usize], per: usize) -> Vec<Progression> {
    let mut out: Vec<Progression> = Vec::new();
    for &x in occ {
        match out.last_mut() {
            Some(g) if g.last + per == x => g.last = x,
            _ => out.push(Progression { first: x, last: x, step: per }),
        }
    }
    out
}

/// Merges window-local progressions (sorted by start, possibly overlapping)
/// into maximal clusters.
pub(crate) fn merge_progressions(progs: &[Progression], per: usize) -> Vec<Cluster> {
    let mut out: Vec<Cluster> = Vec::new();
    for g in progs {
        match out.last_mut() {
            Some(c) if g.first <= c.b + per && g.first >= c.a && (g.first - c.a) % per == 0 => {
                c.b = c.b.max(g.last);
            }
            _ => out.push(Cluster { a: g.first, b: g.last, p: per }),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grouping() {
        let g = group_occurrences(&[1, 2, 3, 7, 9], 2);
        assert_eq!(g.len(), 4);
        let g = group_occurrences(&[1, 3, 5], 2);
        assert_eq!(g, vec![Progression { first: 1, last: 5, step: 2 }]);
    }

    #[test]
    fn merging_overlapping_windows() {
        let progs = [
            Progression { first: 1, last: 3, step: 1 },
            Progression { first: 3, last: 5, step: 1 },
            Progression { first: 6, last: 6, step: 1 },
            Progression { first: 9, last: 9, step: 1 },
        ];
        let c = merge_progressions(&progs, 1);
        assert_eq!(c, vec![Cluster { a: 1, b: 6, p: 1 }, Cluster { a: 9, b: 9, p: 1 }]);
    }

    #[test]
    fn windows() {
        assert_eq!(window_count(2, 1), 0);
        assert_eq!(window_count(2, 2), 1);
        assert_eq!(window_count(2, 5), 2);
        assert_eq!(window_count(3, 9), 3);
    }
}
