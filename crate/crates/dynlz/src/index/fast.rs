use std::cmp::Ordering;

use super::partition::Partition;
use super::stats::Recorder;
use super::text;
use super::{
    group_occurrences, merge_progressions, window_count, BackendKind, Cluster, IndexConfig, IndexStats, Phase,
    Primitive, Progression, Span, StringIndex,
};
use crate::dynstr::{DynString, EditKind, EditOp, EditReceipt, Symbol};
use crate::error::{Error, Result};

/// Fingerprint-based backend with interval-partitioned suffix arrays.
///
/// LCP/LCS gallop over fingerprint equality tests. `exists` covers the text
/// with stored intervals, binary-searches each interval's suffix array and
/// patches occurrences that straddle interval boundaries with small windows.
#[derive(Clone, Debug)]
pub struct FastIndex {
    ds: DynString,
    part: Partition,
    lmax: u32,
    debug: bool,
    rec: Recorder,
}

/// Default top level: `2^lmax ≈ √n`, at least 2.
pub fn default_lmax(n: usize) -> u32 {
    let bits = usize::BITS - n.max(1).leading_zeros();
    bits.div_ceil(2).max(2)
}

impl FastIndex {
    pub fn lmax(&self) -> u32 {
        self.lmax
    }

    /// Re-checks the interval partition invariants.
    pub fn check_invariants(&self) -> Result<()> {
        self.part.check(self.ds.len())
    }

    fn sym(&self, pos: usize) -> Symbol {
        self.ds.char_at(pos).expect("position checked by caller")
    }

    fn eq(&self, i: usize, j: usize, len: usize) -> bool {
        len == 0 || self.ds.fp_unchecked(i, i + len - 1) == self.ds.fp_unchecked(j, j + len - 1)
    }

    fn eq_back(&self, i: usize, j: usize, len: usize) -> bool {
        len == 0 || self.ds.fp_unchecked(i + 1 - len, i) == self.ds.fp_unchecked(j + 1 - len, j)
    }

    /// Largest `l <= cap` with `test(l)`, for a monotone predicate true at 0.
    fn gallop(cap: usize, test: impl Fn(usize) -> bool) -> usize {
        let mut good = 0;
        let mut step = 1;
        while good < cap {
            let probe = (good + step).min(cap);
            if test(probe) {
                good = probe;
                step *= 2;
            } else {
                let mut bad = probe;
                while bad - good > 1 {
                    let mid = good + (bad - good) / 2;
                    if test(mid) {
                        good = mid;
                    } else {
                        bad = mid;
                    }
                }
                break;
            }
        }
        good
    }

    fn lcp_raw(&self, i: usize, j: usize) -> usize {
        let n = self.ds.len();
        if i == j {
            return n + 1 - i;
        }
        let cap = n + 1 - i.max(j);
        if self.sym(i) != self.sym(j) {
            return 0;
        }
        Self::gallop(cap, |l| self.eq(i, j, l))
    }

    fn lcs_raw(&self, i: usize, j: usize) -> usize {
        if i == j {
            return i;
        }
        if self.sym(i) != self.sym(j) {
            return 0;
        }
        Self::gallop(i.min(j), |l| self.eq_back(i, j, l))
    }

    fn occurrences(&self, pattern: Span, text_span: Span) -> Result<Vec<usize>> {
        let p = self.ds.extract(pattern.start, pattern.end)?;
        let t = self.ds.extract(text_span.start, text_span.end)?;
        Ok(text::find_all(&p, &t).into_iter().map(|x| x + text_span.start).collect())
    }

    fn ipm_raw(&self, pattern: Span, text_span: Span) -> Result<Vec<Progression>> {
        if text_span.len() < pattern.len() {
            return Ok(Vec::new());
        }
        let p = self.ds.extract(pattern.start, pattern.end)?;
        let t = self.ds.extract(text_span.start, text_span.end)?;
        let occ: Vec<usize> = text::find_all(&p, &t).into_iter().map(|x| x + text_span.start).collect();
        Ok(group_occurrences(&occ, text::period(&p)))
    }

    /// Compares the suffix at `x`, truncated at `limit`, with the pattern.
    fn cmp_suffix(&self, x: usize, limit: usize, pattern: Span) -> Ordering {
        let m = pattern.len();
        let avail = limit + 1 - x;
        let l = self.lcp_raw(x, pattern.start).min(m).min(avail);
        if l == m {
            Ordering::Equal
        } else if l == avail {
            Ordering::Less
        } else {
            self.sym(x + l).cmp(&self.sym(pattern.start + l))
        }
    }

    fn exists_raw(&self, pattern: Span, text_span: Span) -> Result<bool> {
        let m = pattern.len();
        if text_span.len() < m {
            return Ok(false);
        }
        if text_span.len() <= 2 * m {
            return Ok(!self.ipm_raw(pattern, text_span)?.is_empty());
        }
        let pieces = self.part.cover(text_span.start, text_span.end);
        // Long patterns make the boundary windows overlap; a direct scan is cheaper then.
        if pieces.len() * m >= text_span.len() {
            return Ok(!self.occurrences(pattern, text_span)?.is_empty());
        }
        for piece in &pieces {
            if piece.end + 1 - piece.start < m {
                continue;
            }
            let hit = match piece.slot {
                None => self.sym(piece.start) == self.sym(pattern.start),
                Some(slot) => {
                    let sa = self.part.suffixes(slot);
                    let k = sa.partition_point(|&off| {
                        self.cmp_suffix(piece.start + off as usize, piece.end, pattern) == Ordering::Less
                    });
                    k < sa.len() && self.cmp_suffix(piece.start + sa[k] as usize, piece.end, pattern).is_eq()
                }
            };
            if hit {
                return Ok(true);
            }
        }
        if m == 1 {
            return Ok(false);
        }
        for piece in &pieces {
            let b = piece.end;
            if b == text_span.end {
                continue;
            }
            let lo = (b + 2).saturating_sub(m).max(text_span.start);
            let hi = (b + m - 1).min(text_span.end);
            if !self.ipm_raw(pattern, Span::new(lo, hi))?.is_empty() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn first_raw(&self, pattern: Span, text_span: Span) -> Result<Option<usize>> {
        let m = pattern.len();
        if !self.exists_raw(pattern, text_span)? {
            return Ok(None);
        }
        // Smallest end `e` such that the prefix of the text ending at `e` holds an occurrence.
        let (mut lo, mut hi) = (text_span.start + m - 1, text_span.end);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.exists_raw(pattern, Span::new(text_span.start, mid))? {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(Some(lo + 1 - m))
    }

    fn last_raw(&self, pattern: Span, text_span: Span) -> Result<Option<usize>> {
        let m = pattern.len();
        if !self.exists_raw(pattern, text_span)? {
            return Ok(None);
        }
        let (mut lo, mut hi) = (text_span.start, text_span.end + 1 - m);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if self.exists_raw(pattern, Span::new(mid, text_span.end))? {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        Ok(Some(lo))
    }
}

fn check_pos(x: usize, n: usize) -> Result<()> {
    if x == 0 || x > n {
        return Err(Error::OutOfRange { pos: x, len: n });
    }
    Ok(())
}

impl StringIndex for FastIndex {
    fn build(symbols: &[Symbol], config: &IndexConfig) -> Result<Self> {
        let ds = DynString::from_symbols(symbols, config.seed)?;
        let lmax = config.lmax.unwrap_or_else(|| default_lmax(symbols.len()));
        let part = Partition::build(&ds, lmax)?;
        Ok(FastIndex { ds, part, lmax, debug: config.debug_invariants, rec: Recorder::default() })
    }

    fn kind(&self) -> BackendKind {
        BackendKind::Fast
    }

    fn dynstr(&self) -> &DynString {
        &self.ds
    }

    fn apply(&mut self, op: &EditOp) -> Result<EditReceipt> {
        let receipt = self.ds.apply(op)?;
        match receipt.kind {
            EditKind::Insert => self.part.on_insert(&self.ds, receipt.pos)?,
            EditKind::Delete => self.part.on_delete(&self.ds, receipt.pos)?,
            EditKind::Substitute => self.part.on_substitute(&self.ds, receipt.pos)?,
        }
        if self.debug {
            self.check_invariants()?;
        }
        Ok(receipt)
    }

    fn lcp(&self, i: usize, j: usize) -> Result<usize> {
        self.rec.bump(Primitive::Lcp);
        let n = self.ds.len();
        check_pos(i, n)?;
        check_pos(j, n)?;
        Ok(self.lcp_raw(i, j))
    }

    fn lcs(&self, i: usize, j: usize) -> Result<usize> {
        self.rec.bump(Primitive::Lcs);
        let n = self.ds.len();
        check_pos(i, n)?;
        check_pos(j, n)?;
        Ok(self.lcs_raw(i, j))
    }

    fn ipm(&self, pattern: Span, text_span: Span) -> Result<Vec<Progression>> {
        self.rec.bump(Primitive::Ipm);
        let n = self.ds.len();
        pattern.check_pattern(n)?;
        text_span.check(n)?;
        if text_span.len() > 2 * pattern.len() {
            return Err(Error::TextTooLong { pattern: pattern.len(), text: text_span.len() });
        }
        self.ipm_raw(pattern, text_span)
    }

    fn clusters(&self, pattern: Span, text_span: Span) -> Result<Vec<Cluster>> {
        self.rec.bump(Primitive::Clusters);
        let n = self.ds.len();
        pattern.check_pattern(n)?;
        text_span.check(n)?;
        let m = pattern.len();
        let windows = window_count(m, text_span.len());
        self.rec.bump_by(Primitive::ClusterWindows, windows as u64);
        let mut progs = Vec::new();
        for w in 0..windows {
            let s = text_span.start + w * m;
            let e = (s + 2 * m - 1).min(text_span.end);
            progs.extend(self.ipm_raw(pattern, Span::new(s, e))?);
        }
        let per = self.ds.extract(pattern.start, pattern.end).map(|p| text::period(&p))?;
        Ok(merge_progressions(&progs, per))
    }

    fn exists(&self, pattern: Span, text_span: Span) -> Result<bool> {
        self.rec.bump(Primitive::Exists);
        let n = self.ds.len();
        pattern.check_pattern(n)?;
        text_span.check(n)?;
        self.exists_raw(pattern, text_span)
    }

    fn first_occ(&self, pattern: Span, text_span: Span) -> Result<Option<usize>> {
        self.rec.bump(Primitive::FirstOcc);
        let n = self.ds.len();
        pattern.check_pattern(n)?;
        text_span.check(n)?;
        self.first_raw(pattern, text_span)
    }

    fn last_occ(&self, pattern: Span, text_span: Span) -> Result<Option<usize>> {
        self.rec.bump(Primitive::LastOcc);
        let n = self.ds.len();
        pattern.check_pattern(n)?;
        text_span.check(n)?;
        self.last_raw(pattern, text_span)
    }

    fn period(&self, pattern: Span) -> Result<usize> {
        self.rec.bump(Primitive::Period);
        pattern.check_pattern(self.ds.len())?;
        Ok(text::period(&self.ds.extract(pattern.start, pattern.end)?))
    }

    fn stats(&self) -> IndexStats {
        self.rec.snapshot()
    }

    fn reset_stats(&self) {
        self.rec.reset();
    }

    fn set_phase(&self, phase: Phase) {
        self.rec.set_phase(phase);
    }
}
