//! Brute-force references. Everything here compares symbols directly and
//! never hashes, so it can serve as ground truth for the engine and backends.

use serde::{Deserialize, Serialize};

use crate::dynstr::Symbol;
use crate::engine::{Phrase, PhraseKind};
use crate::index::text;

/// `lpf[i-1] = LPF(i)`, `lpfpos[i-1]` = rightmost witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpfTable {
    pub lpf: Vec<usize>,
    pub lpfpos: Vec<Option<usize>>,
}

impl LpfTable {
    pub fn len(&self) -> usize {
        self.lpf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lpf.is_empty()
    }

    /// `LPF(i)` for 1-based `i`.
    pub fn at(&self, i: usize) -> usize {
        self.lpf[i - 1]
    }

    /// `i + max(LPF(i), 1)`.
    pub fn reach(&self, i: usize) -> usize {
        i + self.lpf[i - 1].max(1)
    }
}

/// Quadratic LPF table: one pass per diagonal, nearest diagonal first so the
/// recorded witness is the rightmost one.
pub fn lpf_table_brute(s: &[Symbol]) -> LpfTable {
    let n = s.len();
    let mut lpf = vec![0; n];
    let mut lpfpos = vec![None; n];
    for d in 1..n {
        let mut run = 0;
        for i in (d..n).rev() {
            run = if s[i] == s[i - d] { run + 1 } else { 0 };
            if run > lpf[i] {
                lpf[i] = run;
                lpfpos[i] = Some(i - d + 1);
            }
        }
    }
    LpfTable { lpf, lpfpos }
}

/// Parent positions of the LPF-tree: entry `i-1` is `i + max(LPF(i), 1)`,
/// where `n + 1` stands for the root.
pub fn lpf_tree_brute(s: &[Symbol]) -> Vec<usize> {
    let t = lpf_table_brute(s);
    (1..=s.len()).map(|i| t.reach(i)).collect()
}

/// Greedy LZ77 with self-overlapping copies.
pub fn lz77_brute(s: &[Symbol]) -> Vec<Phrase> {
    phrases_from_table(&lpf_table_brute(s))
}

pub(crate) fn phrases_from_table(t: &LpfTable) -> Vec<Phrase> {
    let mut out = Vec::new();
    let mut i = 1;
    while i <= t.len() {
        let l = t.at(i);
        let p = if l == 0 {
            Phrase { start: i, end: i, kind: PhraseKind::FreshChar, source: None }
        } else {
            Phrase { start: i, end: i + l - 1, kind: PhraseKind::Copy, source: t.lpfpos[i - 1] }
        };
        i = p.end + 1;
        out.push(p);
    }
    out
}

/// LPF values (no witnesses) from a suffix array, for inputs too large for
/// the quadratic table. `O(n log n)`.
pub fn lpf_table_sa(s: &[Symbol]) -> Vec<usize> {
    let n = s.len();
    if n == 0 {
        return Vec::new();
    }
    let sa: Vec<usize> = text::suffix_array(s).into_iter().map(|x| x as usize).collect();
    let mut rank = vec![0; n];
    for (r, &p) in sa.iter().enumerate() {
        rank[p] = r;
    }
    // lcp[r] = lcp(sa[r-1], sa[r]), Kasai.
    let mut lcp = vec![0usize; n];
    let mut h = 0usize;
    for p in 0..n {
        if rank[p] == 0 {
            h = 0;
            continue;
        }
        let q = sa[rank[p] - 1];
        while p + h < n && q + h < n && s[p + h] == s[q + h] {
            h += 1;
        }
        lcp[rank[p]] = h;
        h = h.saturating_sub(1);
    }
    let mut sparse = vec![lcp.clone()];
    let mut w = 1;
    while 2 * w <= n {
        let prev = sparse.last().unwrap();
        let next: Vec<usize> = (0..=n - 2 * w).map(|k| prev[k].min(prev[k + w])).collect();
        sparse.push(next);
        w *= 2;
    }
    // Minimum of lcp[lo..=hi].
    let range_min = |lo: usize, hi: usize| {
        let k = (usize::BITS - 1 - (hi - lo + 1).leading_zeros()) as usize;
        sparse[k][lo].min(sparse[k][hi + 1 - (1 << k)])
    };
    let mut prev_smaller = vec![usize::MAX; n];
    let mut next_smaller = vec![usize::MAX; n];
    let mut stack: Vec<usize> = Vec::new();
    for r in 0..n {
        while let Some(&t) = stack.last() {
            if sa[t] > sa[r] {
                next_smaller[t] = r;
                stack.pop();
            } else {
                break;
            }
        }
        if let Some(&t) = stack.last() {
            prev_smaller[r] = t;
        }
        stack.push(r);
    }
    let mut out = vec![0; n];
    for r in 0..n {
        let mut best = 0;
        if prev_smaller[r] != usize::MAX {
            best = range_min(prev_smaller[r] + 1, r);
        }
        if next_smaller[r] != usize::MAX {
            best = best.max(range_min(r + 1, next_smaller[r]));
        }
        out[sa[r]] = best;
    }
    out
}

/// Longest common prefix of the suffixes at 1-based `i` and `j`.
pub fn lcp_brute(s: &[Symbol], i: usize, j: usize) -> usize {
    s[i - 1..].iter().zip(&s[j - 1..]).take_while(|(a, b)| a == b).count()
}

/// Longest common suffix of the prefixes ending at 1-based `i` and `j`.
pub fn lcs_brute(s: &[Symbol], i: usize, j: usize) -> usize {
    s[..i].iter().rev().zip(s[..j].iter().rev()).take_while(|(a, b)| a == b).count()
}

/// All 1-based starts of `pattern` in `s`.
pub fn occurrences_brute(s: &[Symbol], pattern: &[Symbol]) -> Vec<usize> {
    if pattern.is_empty() || pattern.len() > s.len() {
        return Vec::new();
    }
    s.windows(pattern.len()).enumerate().filter(|(_, w)| *w == pattern).map(|(k, _)| k + 1).collect()
}

/// A point `(lcs(i, j), lcp(i, j))` of the extension set of `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ExtensionPoint {
    pub lcs: usize,
    pub lcp: usize,
}

/// Non-dominated extension points of `i` against the members of `set` below `i`.
/// Equal points count once.
pub fn nd_extensions(s: &[Symbol], set: &[usize], i: usize) -> Vec<ExtensionPoint> {
    let mut pts: Vec<ExtensionPoint> = set
        .iter()
        .filter(|&&j| j < i)
        .map(|&j| ExtensionPoint { lcs: lcs_brute(s, i, j), lcp: lcp_brute(s, i, j) })
        .collect();
    pts.sort_unstable_by(|a, b| b.cmp(a));
    pts.dedup();
    let mut out = Vec::new();
    let mut best: Option<usize> = None;
    for p in pts {
        if best.is_none_or(|b| p.lcp > b) {
            best = Some(p.lcp);
            out.push(p);
        }
    }
    out
}

/// `Σ_{i ∈ I} |ND(I, i)|`.
pub fn nd_extension_sum(s: &[Symbol], set: &[usize]) -> usize {
    let mut set = set.to_vec();
    set.sort_unstable();
    set.dedup();
    set.iter().map(|&i| nd_extensions(s, &set, i).len()).sum()
}

/// Critical indices by definition: `x ≤ i` with `v(x) > v(x-1)` and `v(x) > j`,
/// where `v(x) = x + max(LPF(x), 1)`. Decreasing order.
pub fn critical_brute(t: &LpfTable, i: usize, j: usize) -> Vec<usize> {
    (1..=i).rev().filter(|&x| t.reach(x) > j && (x == 1 || t.reach(x) > t.reach(x - 1))).collect()
}

/// `(|L(i, j)|, |ND|)` where ND is taken over the occurrences of `S[i..j]`.
pub fn critical_vs_nd(s: &[Symbol], i: usize, j: usize) -> (usize, usize) {
    let t = lpf_table_brute(s);
    let crit = critical_brute(&t, i, j);
    let distinct = 1 + crit.iter().filter(|&&x| x != i).count();
    let occ = occurrences_brute(s, &s[i - 1..j]);
    (distinct, nd_extensions(s, &occ, i).len())
}

/// Whether `|L(i, j)| ≤ |ND| + 1` holds for this instance.
pub fn critical_vs_nd_check(s: &[Symbol], i: usize, j: usize) -> bool {
    let (l, nd) = critical_vs_nd(s, i, j);
    l <= nd + 1
}

/// `ok[a][b]`: `S[a..=b]` (0-based) is a legal LZ77-like phrase, i.e. a single
/// symbol or a substring with an earlier (possibly overlapping) occurrence.
fn legal_phrases(s: &[Symbol]) -> Vec<Vec<bool>> {
    let n = s.len();
    let mut ok = vec![vec![false; n]; n];
    for a in 0..n {
        ok[a][a] = true;
        for b in a + 1..n {
            let w = &s[a..=b];
            ok[a][b] = (0..a).any(|k| k + w.len() <= n && &s[k..k + w.len()] == w);
        }
    }
    ok
}

/// Calls `f` with every LZ77-like factorization, as lists of phrase lengths.
/// Exponential; meant for `n ≤ 14`.
pub fn enumerate_lz77_like(s: &[Symbol], mut f: impl FnMut(&[usize])) {
    let ok = legal_phrases(s);
    let mut cur = Vec::new();
    fn rec(ok: &[Vec<bool>], at: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if at == ok.len() {
            f(cur);
            return;
        }
        for end in at..ok.len() {
            if ok[at][end] {
                cur.push(end - at + 1);
                rec(ok, end + 1, cur, f);
                cur.pop();
            }
        }
    }
    rec(&ok, 0, &mut cur, &mut f);
}

/// Fewest phrases over all enumerated LZ77-like factorizations.
pub fn lz77_like_min_enumerated(s: &[Symbol]) -> usize {
    let mut best = usize::MAX;
    enumerate_lz77_like(s, |f| best = best.min(f.len()));
    if s.is_empty() {
        0
    } else {
        best
    }
}
