use std::cell::RefCell;
use std::sync::Arc;

use super::stats::Recorder;
use super::text;
use super::{
    group_occurrences, window_count, BackendKind, Cluster, IndexConfig, IndexStats, Phase, Primitive, Progression,
    Span, StringIndex,
};
use crate::dynstr::{DynString, EditOp, EditReceipt, Symbol};
use crate::error::{Error, Result};

/// Bit vector with constant-time rank.
#[derive(Debug)]
struct Bits {
    words: Vec<u64>,
    ranks: Vec<u32>,
}

impl Bits {
    fn new(bits: &[bool]) -> Self {
        let mut words = vec![0u64; bits.len() / 64 + 1];
        for (k, &b) in bits.iter().enumerate() {
            if b {
                words[k / 64] |= 1 << (k % 64);
            }
        }
        let mut ranks = Vec::with_capacity(words.len() + 1);
        let mut acc = 0u32;
        for w in &words {
            ranks.push(acc);
            acc += w.count_ones();
        }
        Bits { words, ranks }
    }

    /// Number of zeros in `[0, k)`.
    fn rank0(&self, k: usize) -> usize {
        let w = k / 64;
        let ones = self.ranks[w] as usize + (self.words[w] & ((1u64 << (k % 64)) - 1)).count_ones() as usize;
        k - ones
    }
}

/// Wavelet matrix over a sequence of integers below `2^depth`.
#[derive(Debug)]
struct Wavelet {
    levels: Vec<(Bits, usize)>,
    depth: u32,
}

impl Wavelet {
    fn new(values: &[u32]) -> Self {
        let max = values.iter().copied().max().unwrap_or(0);
        let depth = (u32::BITS - max.leading_zeros()).max(1);
        let mut cur = values.to_vec();
        let mut levels = Vec::with_capacity(depth as usize);
        for d in (0..depth).rev() {
            let bits: Vec<bool> = cur.iter().map(|&v| v >> d & 1 == 1).collect();
            let mut zeros: Vec<u32> = cur.iter().copied().filter(|&v| v >> d & 1 == 0).collect();
            let nz = zeros.len();
            zeros.extend(cur.iter().copied().filter(|&v| v >> d & 1 == 1));
            cur = zeros;
            levels.push((Bits::new(&bits), nz));
        }
        Wavelet { levels, depth }
    }

    /// `k`-th smallest (0-based) value in `[l, r)`.
    fn kth(&self, mut l: usize, mut r: usize, mut k: usize) -> u32 {
        let mut val = 0;
        for (lv, (bits, nz)) in self.levels.iter().enumerate() {
            let (zl, zr) = (bits.rank0(l), bits.rank0(r));
            if k < zr - zl {
                l = zl;
                r = zr;
            } else {
                k -= zr - zl;
                l = nz + (l - zl);
                r = nz + (r - zr);
                val |= 1 << (self.depth as usize - 1 - lv);
            }
        }
        val
    }

    /// Number of values below `x` in `[l, r)`.
    fn count_less(&self, mut l: usize, mut r: usize, x: u64) -> usize {
        if x >= 1u64 << self.depth {
            return r - l;
        }
        let mut count = 0;
        for (lv, (bits, nz)) in self.levels.iter().enumerate() {
            let (zl, zr) = (bits.rank0(l), bits.rank0(r));
            if x >> (self.depth as usize - 1 - lv) & 1 == 1 {
                count += zr - zl;
                l = nz + (l - zl);
                r = nz + (r - zr);
            } else {
                l = zl;
                r = zr;
            }
        }
        count
    }
}

/// Whole-string suffix array, LCP sparse table and a wavelet matrix over the
/// suffix array, for one fixed content of the string.
#[derive(Debug)]
struct Tables {
    sa: Vec<u32>,
    rank: Vec<u32>,
    sparse: Vec<Vec<u32>>,
    wavelet: Wavelet,
}

impl Tables {
    fn new(s: &[Symbol]) -> Self {
        let n = s.len();
        let sa = text::suffix_array(s);
        let mut rank = vec![0u32; n];
        for (k, &x) in sa.iter().enumerate() {
            rank[x as usize] = k as u32;
        }
        // Kasai: lcp[k] = lcp of suffixes sa[k-1], sa[k].
        let mut lcp = vec![0u32; n];
        let mut h = 0usize;
        for i in 0..n {
            let r = rank[i] as usize;
            if r == 0 {
                h = 0;
                continue;
            }
            let j = sa[r - 1] as usize;
            while i + h < n && j + h < n && s[i + h] == s[j + h] {
                h += 1;
            }
            lcp[r] = h as u32;
            h = h.saturating_sub(1);
        }
        let mut sparse = vec![lcp];
        let mut w = 1;
        while 2 * w <= n {
            let prev = sparse.last().unwrap();
            let next: Vec<u32> = (0..=n - 2 * w).map(|k| prev[k].min(prev[k + w])).collect();
            sparse.push(next);
            w *= 2;
        }
        let wavelet = Wavelet::new(&sa);
        Tables { sa, rank, sparse, wavelet }
    }

    /// Minimum of `lcp[a..=b]`.
    fn range_min(&self, a: usize, b: usize) -> u32 {
        let k = (usize::BITS - 1 - (b + 1 - a).leading_zeros()) as usize;
        self.sparse[k][a].min(self.sparse[k][b + 1 - (1 << k)])
    }

    /// Suffix-array rows `[lo, hi)` whose suffixes start with `S[p..p+m)` (0-based `p`).
    fn rows(&self, p: usize, m: usize) -> (usize, usize) {
        let r = self.rank[p] as usize;
        let n = self.sa.len();
        let m = m as u32;
        let (mut lo, mut hi) = (0, r);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.range_min(mid + 1, r) >= m {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let first = lo;
        let (mut lo, mut hi) = (r, n - 1);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if self.range_min(r + 1, mid) >= m {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        (first, lo + 1)
    }
}

/// Backend that rebuilds whole-string tables after each edit, on first use.
///
/// Each edit costs `O(n log n)`; every occurrence query then takes `O(log n)`.
/// It exists to make large primitive-call measurements affordable and is
/// checked against the naive backend like the others.
#[derive(Clone, Debug)]
pub struct SnapshotIndex {
    ds: DynString,
    s: Vec<Symbol>,
    tables: RefCell<Option<Arc<Tables>>>,
    rec: Recorder,
}

impl SnapshotIndex {
    fn tables(&self) -> Arc<Tables> {
        self.tables.borrow_mut().get_or_insert_with(|| Arc::new(Tables::new(&self.s))).clone()
    }

    fn slice(&self, r: Span) -> &[Symbol] {
        &self.s[r.start - 1..r.end]
    }

    fn check_pos(&self, x: usize) -> Result<()> {
        if x == 0 || x > self.s.len() {
            return Err(Error::OutOfRange { pos: x, len: self.s.len() });
        }
        Ok(())
    }

    /// Occurrence starts of the pattern inside `text`, as a 0-based start window and the row range.
    fn search(&self, pattern: Span, text_span: Span) -> Option<(Arc<Tables>, usize, usize, u64, u64)> {
        let m = pattern.len();
        if text_span.len() < m {
            return None;
        }
        let t = self.tables();
        let (lo, hi) = t.rows(pattern.start - 1, m);
        let first = (text_span.start - 1) as u64;
        let last = (text_span.end - m) as u64;
        Some((t, lo, hi, first, last))
    }

    fn first_raw(&self, pattern: Span, text_span: Span) -> Option<usize> {
        let (t, lo, hi, first, last) = self.search(pattern, text_span)?;
        let c = t.wavelet.count_less(lo, hi, first);
        if c == hi - lo {
            return None;
        }
        let v = t.wavelet.kth(lo, hi, c) as u64;
        (v <= last).then_some(v as usize + 1)
    }

    fn last_raw(&self, pattern: Span, text_span: Span) -> Option<usize> {
        let (t, lo, hi, first, last) = self.search(pattern, text_span)?;
        let c = t.wavelet.count_less(lo, hi, last + 1);
        if c == 0 {
            return None;
        }
        let v = t.wavelet.kth(lo, hi, c - 1) as u64;
        (v >= first).then_some(v as usize + 1)
    }

    fn ipm_raw(&self, pattern: Span, text_span: Span) -> Vec<Progression> {
        let p = self.slice(pattern);
        let occ: Vec<usize> =
            text::find_all(p, self.slice(text_span)).into_iter().map(|x| x + text_span.start).collect();
        group_occurrences(&occ, text::period(p))
    }
}

impl StringIndex for SnapshotIndex {
    fn build(symbols: &[Symbol], config: &IndexConfig) -> Result<Self> {
        Ok(SnapshotIndex {
            ds: DynString::from_symbols(symbols, config.seed)?,
            s: symbols.to_vec(),
            tables: RefCell::new(None),
            rec: Recorder::default(),
        })
    }

    fn kind(&self) -> BackendKind {
        BackendKind::Snapshot
    }

    fn dynstr(&self) -> &DynString {
        &self.ds
    }

    fn apply(&mut self, op: &EditOp) -> Result<EditReceipt> {
        let receipt = self.ds.apply(op)?;
        op.apply_to_vec(&mut self.s);
        *self.tables.get_mut() = None;
        Ok(receipt)
    }

    fn lcp(&self, i: usize, j: usize) -> Result<usize> {
        self.rec.bump(Primitive::Lcp);
        self.check_pos(i)?;
        self.check_pos(j)?;
        if i == j {
            return Ok(self.s.len() + 1 - i);
        }
        let t = self.tables();
        let (a, b) = (t.rank[i - 1] as usize, t.rank[j - 1] as usize);
        Ok(t.range_min(a.min(b) + 1, a.max(b)) as usize)
    }

    fn lcs(&self, i: usize, j: usize) -> Result<usize> {
        self.rec.bump(Primitive::Lcs);
        self.check_pos(i)?;
        self.check_pos(j)?;
        Ok(self.s[..i].iter().rev().zip(self.s[..j].iter().rev()).take_while(|(a, b)| a == b).count())
    }

    fn ipm(&self, pattern: Span, text_span: Span) -> Result<Vec<Progression>> {
        self.rec.bump(Primitive::Ipm);
        let n = self.s.len();
        pattern.check_pattern(n)?;
        text_span.check(n)?;
        if text_span.len() > 2 * pattern.len() {
            return Err(Error::TextTooLong { pattern: pattern.len(), text: text_span.len() });
        }
        Ok(self.ipm_raw(pattern, text_span))
    }

    fn clusters(&self, pattern: Span, text_span: Span) -> Result<Vec<Cluster>> {
        self.rec.bump(Primitive::Clusters);
        let n = self.s.len();
        pattern.check_pattern(n)?;
        text_span.check(n)?;
        self.rec.bump_by(Primitive::ClusterWindows, window_count(pattern.len(), text_span.len()) as u64);
        let per = text::period(self.slice(pattern));
        let occ: Vec<usize> = text::find_all(self.slice(pattern), self.slice(text_span))
            .into_iter()
            .map(|x| x + text_span.start)
            .collect();
        Ok(group_occurrences(&occ, per).into_iter().map(|g| Cluster { a: g.first, b: g.last, p: per }).collect())
    }

    fn exists(&self, pattern: Span, text_span: Span) -> Result<bool> {
        self.rec.bump(Primitive::Exists);
        let n = self.s.len();
        pattern.check_pattern(n)?;
        text_span.check(n)?;
        Ok(self.first_raw(pattern, text_span).is_some())
    }

    fn first_occ(&self, pattern: Span, text_span: Span) -> Result<Option<usize>> {
        self.rec.bump(Primitive::FirstOcc);
        let n = self.s.len();
        pattern.check_pattern(n)?;
        text_span.check(n)?;
        Ok(self.first_raw(pattern, text_span))
    }

    fn last_occ(&self, pattern: Span, text_span: Span) -> Result<Option<usize>> {
        self.rec.bump(Primitive::LastOcc);
        let n = self.s.len();
        pattern.check_pattern(n)?;
        text_span.check(n)?;
        Ok(self.last_raw(pattern, text_span))
    }

    fn period(&self, pattern: Span) -> Result<usize> {
        self.rec.bump(Primitive::Period);
        pattern.check_pattern(self.s.len())?;
        Ok(text::period(self.slice(pattern)))
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

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(s: &str) -> SnapshotIndex {
        SnapshotIndex::build(&s.bytes().map(u32::from).collect::<Vec<_>>(), &IndexConfig::default()).unwrap()
    }

    #[test]
    fn wavelet_queries() {
        let w = Wavelet::new(&[5, 1, 7, 3, 3, 0]);
        assert_eq!(w.kth(0, 6, 0), 0);
        assert_eq!(w.kth(1, 5, 2), 3);
        assert_eq!(w.count_less(0, 6, 4), 4);
        assert_eq!(w.count_less(2, 4, 100), 2);
    }

    #[test]
    fn occurrences() {
        let s = idx("abcab");
        assert_eq!(s.lcp(1, 4).unwrap(), 2);
        assert!(s.exists(Span::new(1, 2), Span::new(3, 5)).unwrap());
        assert!(!s.exists(Span::new(1, 3), Span::new(4, 5)).unwrap());
        assert_eq!(s.first_occ(Span::new(4, 5), Span::new(1, 5)).unwrap(), Some(1));
        assert_eq!(s.last_occ(Span::new(4, 5), Span::new(1, 5)).unwrap(), Some(4));
        assert_eq!(s.last_occ(Span::new(4, 5), Span::new(1, 4)).unwrap(), Some(1));
    }

    #[test]
    fn tables_follow_edits() {
        let mut s = idx("aaaa");
        assert_eq!(s.lcp(1, 2).unwrap(), 3);
        s.apply(&EditOp::Substitute { pos: 3, sym: 98 }).unwrap();
        assert_eq!(s.lcp(1, 2).unwrap(), 1);
        assert_eq!(s.first_occ(Span::new(3, 3), Span::new(1, 4)).unwrap(), Some(3));
    }
}
