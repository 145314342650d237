use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::StringIndex;
use crate::lpf;

/// Which string of an update a quantity refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// The string before the edit.
    Old,
    /// The string after the edit.
    New,
}

/// The critical indices `L(i, j)`: anchor `i` followed by the positions
/// `l1 > l2 > ... > l_min` where `x + LPF'(x)` rises, restricted to values
/// above `j`. Consecutive entries bound intervals of constant parent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalSequence {
    pub i: usize,
    pub j: usize,
    pub tag: Side,
    /// `l1, l2, ...` in decreasing order; empty when nothing before `i` reaches past `j`.
    pub critical: Vec<usize>,
}

impl CriticalSequence {
    /// `(i, l1, l2, ...)`; `l1` may equal `i`.
    pub fn indices(&self) -> Vec<usize> {
        std::iter::once(self.i).chain(self.critical.iter().copied()).collect()
    }

    /// Number of distinct elements.
    pub fn distinct_len(&self) -> usize {
        1 + self.critical.iter().filter(|&&x| x != self.i).count()
    }

    /// Smallest element: `l_min`, or `i` when the critical list is empty.
    pub fn min(&self) -> usize {
        self.critical.last().copied().unwrap_or(self.i)
    }

    /// The clean partition `[l_min.., ..., l1.., ..i]` as inclusive ranges, left to right.
    pub fn partition(&self) -> Vec<(usize, usize)> {
        let mut starts: Vec<usize> = self.critical.iter().rev().copied().collect();
        starts.dedup();
        let mut out = Vec::with_capacity(starts.len());
        for (k, &s) in starts.iter().enumerate() {
            let end = starts.get(k + 1).map_or(self.i, |&t| t - 1);
            out.push((s, end));
        }
        out
    }
}

/// Computes the critical list from `v(x) = x + LPF'(x)`, using binary searches
/// that rely on `v` being non-decreasing.
pub(crate) fn critical_with(
    i: usize,
    j: usize,
    mut v: impl FnMut(usize) -> Result<usize>,
) -> Result<Vec<usize>> {
    if i == 0 {
        return Err(Error::OutOfRange { pos: i, len: 0 });
    }
    if v(i)? <= j {
        return Ok(Vec::new());
    }
    // Smallest x in [lo..=hi] with v(x) >= target (exists because v(hi) >= target).
    let lowest = |lo: usize, hi: usize, target: usize, v: &mut dyn FnMut(usize) -> Result<usize>| {
        let (mut lo, mut hi) = (lo, hi);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if v(mid)? >= target {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok::<usize, Error>(lo)
    };
    let l_min = lowest(1, i, j + 1, &mut v)?;
    let mut out = Vec::new();
    let mut hi = i;
    let mut target = v(i)?;
    loop {
        let l = lowest(l_min, hi, target, &mut v)?;
        out.push(l);
        if l == l_min {
            break;
        }
        hi = l - 1;
        target = v(l - 1)?;
    }
    Ok(out)
}

/// `L(i, j)` over one index, with fresh LPF queries.
pub fn critical_sequence<I: StringIndex + ?Sized>(idx: &I, i: usize, j: usize, tag: Side) -> Result<CriticalSequence> {
    if i > j {
        return Err(Error::BadRange { start: i, end: j, len: idx.len() });
    }
    let critical = critical_with(i, j, |x| Ok(x + lpf::lpf(idx, x)?))?;
    Ok(CriticalSequence { i, j, tag, critical })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::{IndexConfig, NaiveIndex};

    fn idx(s: &str) -> NaiveIndex {
        NaiveIndex::build(&s.bytes().map(u32::from).collect::<Vec<_>>(), &IndexConfig::default()).unwrap()
    }

    #[test]
    fn uniform_string() {
        // v(x) = 7 for every x in "aaaaaa" except x = 1 (v = 2).
        let s = idx("aaaaaa");
        let c = critical_sequence(&s, 4, 5, Side::Old).unwrap();
        assert_eq!(c.indices(), vec![4, 2]);
        assert_eq!(c.partition(), vec![(2, 4)]);
    }

    #[test]
    fn nothing_reaches() {
        let s = idx("abcdef");
        let c = critical_sequence(&s, 3, 5, Side::New).unwrap();
        assert_eq!(c.indices(), vec![3]);
        assert_eq!(c.min(), 3);
        assert_eq!(c.distinct_len(), 1);
    }
}
