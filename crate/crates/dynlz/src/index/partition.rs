//! Multi-level interval partitions with per-interval suffix arrays.
//!
//! Level `e` splits `[1..n]` into intervals of length below `2^(e+1)` whose
//! adjacent pairs sum to at least `2^e`. An edit touches one interval per
//! level; that interval's suffix array is rebuilt from scratch. Level 0
//! (singletons) is implicit.

use super::text::suffix_array;
use crate::dynstr::DynString;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct Level {
    exp: u32,
    lens: Vec<usize>,
    starts: Vec<usize>,
    sa: Vec<Vec<u32>>,
}

/// One interval of a cover: `start..=end`, with its suffix array when stored.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Piece {
    pub start: usize,
    pub end: usize,
    pub slot: Option<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub(crate) struct Partition {
    levels: Vec<Level>,
}

impl Level {
    fn unit(&self) -> usize {
        1 << self.exp
    }

    fn find(&self, pos: usize) -> usize {
        self.starts.partition_point(|&s| s <= pos) - 1
    }

    fn end(&self, k: usize) -> usize {
        self.starts[k] + self.lens[k] - 1
    }

    fn restart_from(&mut self, k: usize) {
        for t in k..self.lens.len() {
            self.starts[t] = if t == 0 { 1 } else { self.starts[t - 1] + self.lens[t - 1] };
        }
    }

    fn rebuild(&mut self, ds: &DynString, k: usize) -> Result<()> {
        let sym = ds.extract(self.starts[k], self.end(k))?;
        self.sa[k] = suffix_array(&sym);
        Ok(())
    }
}

impl Partition {
    pub(crate) fn build(ds: &DynString, lmax: u32) -> Result<Self> {
        let n = ds.len();
        let mut levels = Vec::new();
        for exp in 1..=lmax {
            let unit = 1usize << exp;
            let mut lv = Level { exp, lens: Vec::new(), starts: Vec::new(), sa: Vec::new() };
            let mut s = 1;
            while s <= n {
                let len = unit.min(n + 1 - s);
                lv.lens.push(len);
                lv.starts.push(s);
                lv.sa.push(Vec::new());
                s += len;
            }
            for k in 0..lv.lens.len() {
                lv.rebuild(ds, k)?;
            }
            levels.push(lv);
        }
        Ok(Partition { levels })
    }

    /// `ds` already holds the new symbol at `pos`.
    pub(crate) fn on_insert(&mut self, ds: &DynString, pos: usize) -> Result<()> {
        for lv in &mut self.levels {
            if lv.lens.is_empty() {
                lv.lens.push(1);
                lv.starts.push(1);
                lv.sa.push(Vec::new());
                lv.rebuild(ds, 0)?;
                continue;
            }
            let old_n = ds.len() - 1;
            let k = if pos > old_n { lv.lens.len() - 1 } else { lv.find(pos) };
            lv.lens[k] += 1;
            if lv.lens[k] == 2 * lv.unit() {
                let u = lv.unit();
                lv.lens.splice(k..=k, [u, u]);
                lv.starts.insert(k + 1, 0);
                lv.sa.insert(k + 1, Vec::new());
                lv.restart_from(k);
                lv.rebuild(ds, k)?;
                lv.rebuild(ds, k + 1)?;
            } else {
                lv.restart_from(k);
                lv.rebuild(ds, k)?;
            }
        }
        Ok(())
    }

    /// `ds` no longer holds the deleted position `pos`.
    pub(crate) fn on_delete(&mut self, ds: &DynString, pos: usize) -> Result<()> {
        for lv in &mut self.levels {
            let k = lv.find(pos);
            lv.lens[k] -= 1;
            if lv.lens[k] == 0 {
                lv.lens.remove(k);
                lv.starts.remove(k);
                lv.sa.remove(k);
                if k < lv.lens.len() {
                    lv.restart_from(k);
                }
                continue;
            }
            let target = lv.unit() - 1;
            let merge_at = if k > 0 && lv.lens[k - 1] + lv.lens[k] == target {
                Some(k - 1)
            } else if k + 1 < lv.lens.len() && lv.lens[k] + lv.lens[k + 1] == target {
                Some(k)
            } else {
                None
            };
            match merge_at {
                Some(a) => {
                    lv.lens[a] += lv.lens[a + 1];
                    lv.lens.remove(a + 1);
                    lv.starts.remove(a + 1);
                    lv.sa.remove(a + 1);
                    lv.restart_from(a);
                    lv.rebuild(ds, a)?;
                }
                None => {
                    lv.restart_from(k);
                    lv.rebuild(ds, k)?;
                }
            }
        }
        Ok(())
    }

    pub(crate) fn on_substitute(&mut self, ds: &DynString, pos: usize) -> Result<()> {
        for lv in &mut self.levels {
            let k = lv.find(pos);
            lv.rebuild(ds, k)?;
        }
        Ok(())
    }

    /// Greedy maximal-level cover of `a..=b`.
    pub(crate) fn cover(&self, a: usize, b: usize) -> Vec<Piece> {
        let mut out = Vec::new();
        let mut k = a;
        while k <= b {
            let mut piece = Piece { start: k, end: k, slot: None };
            for (li, lv) in self.levels.iter().enumerate().rev() {
                let j = lv.find(k);
                let (s, e) = (lv.starts[j], lv.end(j));
                if s >= a && e <= b {
                    piece = Piece { start: s, end: e, slot: Some((li, j)) };
                    break;
                }
            }
            k = piece.end + 1;
            out.push(piece);
        }
        out
    }

    /// Suffix array (offsets from the interval start) of a stored interval.
    pub(crate) fn suffixes(&self, slot: (usize, usize)) -> &[u32] {
        &self.levels[slot.0].sa[slot.1]
    }

    pub(crate) fn check(&self, n: usize) -> Result<()> {
        for lv in &self.levels {
            let u = lv.unit();
            let total: usize = lv.lens.iter().sum();
            if total != n {
                return Err(Error::Internal(format!("level {} covers {} of {} positions", lv.exp, total, n)));
            }
            for (k, &len) in lv.lens.iter().enumerate() {
                if len == 0 || len >= 2 * u {
                    return Err(Error::Internal(format!("level {} interval {} has length {}", lv.exp, k, len)));
                }
                if k > 0 && lv.lens[k - 1] + len < u {
                    return Err(Error::Internal(format!("level {} intervals {}..{} sum below {}", lv.exp, k - 1, k, u)));
                }
                let expect = if k == 0 { 1 } else { lv.starts[k - 1] + lv.lens[k - 1] };
                if lv.starts[k] != expect || lv.sa[k].len() != len {
                    return Err(Error::Internal(format!("level {} interval {} is stale", lv.exp, k)));
                }
            }
        }
        Ok(())
    }
}
