//! Plain-slice string routines shared by the backends.

use crate::dynstr::Symbol;

/// Prefix function: `pi[k]` is the longest proper border of `p[..=k]`.
pub(crate) fn prefix_function(p: &[Symbol]) -> Vec<usize> {
    let mut pi = vec![0; p.len()];
    for k in 1..p.len() {
        let mut b = pi[k - 1];
        while b > 0 && p[k] != p[b] {
            b = pi[b - 1];
        }
        if p[k] == p[b] {
            b += 1;
        }
        pi[k] = b;
    }
    pi
}

pub(crate) fn period(p: &[Symbol]) -> usize {
    match prefix_function(p).last() {
        Some(&b) => p.len() - b,
        None => 0,
    }
}

/// Calls `hit` with every 0-based occurrence start until it returns `false`.
pub(crate) fn scan(p: &[Symbol], pi: &[usize], t: &[Symbol], mut hit: impl FnMut(usize) -> bool) {
    let m = p.len();
    if m == 0 || m > t.len() {
        return;
    }
    let mut b = 0;
    for (k, &c) in t.iter().enumerate() {
        while b > 0 && (b == m || c != p[b]) {
            b = pi[b - 1];
        }
        if c == p[b] {
            b += 1;
        }
        if b == m && !hit(k + 1 - m) {
            return;
        }
    }
}

pub(crate) fn find_all(p: &[Symbol], t: &[Symbol]) -> Vec<usize> {
    let pi = prefix_function(p);
    let mut out = Vec::new();
    scan(p, &pi, t, |x| {
        out.push(x);
        true
    });
    out
}

pub(crate) fn find_first(p: &[Symbol], t: &[Symbol]) -> Option<usize> {
    let pi = prefix_function(p);
    let mut out = None;
    scan(p, &pi, t, |x| {
        out = Some(x);
        false
    });
    out
}

pub(crate) fn find_last(p: &[Symbol], t: &[Symbol]) -> Option<usize> {
    let rp: Vec<Symbol> = p.iter().rev().copied().collect();
    let rt: Vec<Symbol> = t.iter().rev().copied().collect();
    find_first(&rp, &rt).map(|x| t.len() - x - p.len())
}

/// Suffix array by prefix doubling; suffixes compare as plain sequences, so a
/// proper prefix sorts first.
pub(crate) fn suffix_array(s: &[Symbol]) -> Vec<u32> {
    let n = s.len();
    let mut sa: Vec<u32> = (0..n as u32).collect();
    if n <= 1 {
        return sa;
    }
    let mut rank: Vec<u64> = s.iter().map(|&c| c as u64 + 1).collect();
    let mut tmp = vec![0u64; n];
    let mut k = 1;
    loop {
        let key = |i: u32| {
            let i = i as usize;
            (rank[i], if i + k < n { rank[i + k] } else { 0 })
        };
        sa.sort_unstable_by_key(|&i| key(i));
        tmp[sa[0] as usize] = 1;
        for w in 1..n {
            let bump = (key(sa[w - 1]) != key(sa[w])) as u64;
            tmp[sa[w] as usize] = tmp[sa[w - 1] as usize] + bump;
        }
        std::mem::swap(&mut rank, &mut tmp);
        if rank[sa[n - 1] as usize] as usize == n || k >= n {
            break;
        }
        k *= 2;
    }
    sa
}
