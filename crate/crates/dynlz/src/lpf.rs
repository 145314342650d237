//! Longest previous factor queries on top of any [`StringIndex`].
//!
//! `LPF(i)` is the largest `l` such that `S[i..i+l)` also starts at some
//! `j < i`. Occurrences may overlap `i`, so the test for a candidate `l` is
//! whether `S[i..i+l)` occurs inside `S[1..i+l-2]`. That predicate is
//! monotone in `l`, which makes a galloping search valid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{Span, StringIndex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpfAnswer {
    pub lpf: usize,
    pub lpf_clamped: usize,
    /// Rightmost earlier witness; `None` when `lpf = 0`.
    pub lpfpos: Option<usize>,
}

fn check<I: StringIndex + ?Sized>(idx: &I, i: usize) -> Result<()> {
    if i == 0 || i > idx.len() {
        return Err(Error::OutOfRange { pos: i, len: idx.len() });
    }
    Ok(())
}

fn occurs_before<I: StringIndex + ?Sized>(idx: &I, i: usize, l: usize) -> Result<bool> {
    idx.exists(Span::with_len(i, l), Span::new(1, i + l - 2))
}

/// Unclamped LPF, from `O(log LPF)` existence queries.
pub fn lpf_raw<I: StringIndex + ?Sized>(idx: &I, i: usize) -> Result<usize> {
    check(idx, i)?;
    if i == 1 {
        return Ok(0);
    }
    let cap = idx.len() + 1 - i;
    let mut good = 0;
    let mut step = 1;
    while good < cap {
        let probe = (good + step).min(cap);
        if occurs_before(idx, i, probe)? {
            good = probe;
            step *= 2;
            continue;
        }
        let mut bad = probe;
        while bad - good > 1 {
            let mid = good + (bad - good) / 2;
            if occurs_before(idx, i, mid)? {
                good = mid;
            } else {
                bad = mid;
            }
        }
        break;
    }
    Ok(good)
}

/// `max(LPF(i), 1)`: the distance from `i` to its parent in the LPF-tree.
pub fn lpf<I: StringIndex + ?Sized>(idx: &I, i: usize) -> Result<usize> {
    Ok(lpf_raw(idx, i)?.max(1))
}

/// Rightmost `j < i` with `lcp(i, j) = LPF(i)`, or `None` when `LPF(i) = 0`.
pub fn lpfpos<I: StringIndex + ?Sized>(idx: &I, i: usize) -> Result<Option<usize>> {
    Ok(query(idx, i)?.lpfpos)
}

pub fn query<I: StringIndex + ?Sized>(idx: &I, i: usize) -> Result<LpfAnswer> {
    let l = lpf_raw(idx, i)?;
    let lpfpos = if l == 0 { None } else { idx.last_occ(Span::with_len(i, l), Span::new(1, i + l - 2))? };
    Ok(LpfAnswer { lpf: l, lpf_clamped: l.max(1), lpfpos })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::{IndexConfig, NaiveIndex};

    fn idx(s: &str) -> NaiveIndex {
        NaiveIndex::build(&s.bytes().map(u32::from).collect::<Vec<_>>(), &IndexConfig::default()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(lpf(&idx("abab"), 3).unwrap(), 2);
        assert_eq!(lpf(&idx("abab"), 1).unwrap(), 1);
        assert_eq!(lpf_raw(&idx("abab"), 1).unwrap(), 0);
        assert_eq!(lpf(&idx("aaaa"), 2).unwrap(), 3);
        assert_eq!(lpfpos(&idx("abab"), 3).unwrap(), Some(1));
        assert_eq!(lpfpos(&idx("aa"), 2).unwrap(), Some(1));
        assert_eq!(lpfpos(&idx("abcab"), 4).unwrap(), Some(1));
        assert_eq!(lpfpos(&idx("abc"), 2).unwrap(), None);
        assert!(lpf(&idx("ab"), 3).is_err());
    }
}
