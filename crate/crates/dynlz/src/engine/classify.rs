use serde::{Deserialize, Serialize};

use crate::dynstr::{EditKind, EditOp, Symbol};
use crate::error::Result;
use crate::oracle::{lpf_table_brute, occurrences_brute};

use super::window_param;

/// Why an index may need a new parent after an edit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IndexClass {
    SuperLight,
    Light,
    LHeavy,
    RHeavy,
    Inactive,
}

/// Classes of one index of the new string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    /// Position in the new string.
    pub pos: usize,
    /// The parent node changed (always true for an inserted node).
    pub active: bool,
    /// Empty for an inactive index that matches no class.
    pub classes: Vec<IndexClass>,
}

impl Classification {
    pub fn covered(&self) -> bool {
        !self.active || !self.classes.is_empty()
    }
}

/// Brute-force classification of every index of `S' = op(S)`, with nodes
/// identified across the edit. Positions after the pivot are measured in
/// whichever string is being inspected.
pub fn classify(old: &[Symbol], op: &EditOp) -> Result<Vec<Classification>> {
    op.validate(old.len())?;
    let mut new = old.to_vec();
    op.apply_to_vec(&mut new);
    let (n, n2) = (old.len(), new.len());
    let z = op.pos();
    let kind = op.kind();
    let m = window_param(n2);
    let to_old = |i: usize| -> Option<usize> {
        match kind {
            EditKind::Substitute => Some(i),
            EditKind::Insert if i == z => None,
            EditKind::Insert => Some(if i < z { i } else { i - 1 }),
            EditKind::Delete => Some(if i < z { i } else { i + 1 }),
        }
    };
    let to_new = |p: usize| -> Option<usize> {
        match kind {
            EditKind::Substitute => Some(p),
            EditKind::Insert => Some(if p < z { p } else { p + 1 }),
            EditKind::Delete if p == z => None,
            EditKind::Delete => Some(if p < z { p } else { p - 1 }),
        }
    };
    let (ta, tb) = (lpf_table_brute(old), lpf_table_brute(&new));

    // Light indices, as new-string positions.
    let mut light = vec![false; n2 + 2];
    let strings: [(&[Symbol], bool, bool); 2] =
        [(old, kind != EditKind::Insert, false), (&new, kind != EditKind::Delete, true)];
    for (t, has, is_new) in strings {
        let aft = z + has as usize;
        if aft > t.len() {
            continue;
        }
        let after = t.len() + 1 - aft;
        for a in 0..=m.min(z - 1) {
            for b in 0..=m.min(after) {
                if aft + b == z - a {
                    continue;
                }
                let pat = &t[z - a - 1..aft + b - 1];
                let hit = occurrences_brute(&t[aft - 1..], pat).first().map(|k| k + aft - 1);
                if let Some(k) = hit.and_then(|k| if is_new { Some(k) } else { to_new(k) }) {
                    light[k] = true;
                }
            }
        }
    }

    // Heavy candidates: occurrences shared by both strings, as (old, new) position pairs.
    let shared = |mo: &[Symbol], mn: &[Symbol]| -> Vec<(usize, usize)> {
        let on: Vec<usize> = occurrences_brute(&new, mn);
        occurrences_brute(old, mo).into_iter().filter_map(|p| to_new(p).filter(|q| on.contains(q)).map(|q| (p, q))).collect()
    };
    let left = (z > m).then(|| shared(&old[z - m - 1..z - 1], &new[z - m - 1..z - 1]));
    let right = {
        let (ao, an) = (z + (kind != EditKind::Insert) as usize, z + (kind != EditKind::Delete) as usize);
        (n2 + 1 >= an + m).then(|| shared(&old[ao - 1..ao + m - 1], &new[an - 1..an + m - 1]))
    };

    let mut out = Vec::with_capacity(n2);
    #[allow(clippy::needless_range_loop)]
    for i in 1..=n2 {
        let new_parent = tb.reach(i);
        let (active, lpfs) = match to_old(i) {
            None => (true, None),
            Some(p) => {
                let op_ = ta.reach(p);
                let mapped = if op_ > n { Some(n2 + 1) } else { to_new(op_) };
                (mapped != Some(new_parent), Some((p, ta.at(p).min(tb.at(i)))))
            }
        };
        let mut classes = Vec::new();
        if i + m >= z && i <= z {
            classes.push(IndexClass::SuperLight);
        }
        if light[i] {
            classes.push(IndexClass::Light);
        }
        if let (true, Some((p, l))) = (active, lpfs) {
            let heavy = |set: &Option<Vec<(usize, usize)>>| {
                set.as_ref().is_some_and(|s| {
                    s.iter().any(|&(ko, kn)| kn >= i && ko >= p && kn - i + m <= l && ko - p + m <= l)
                })
            };
            if heavy(&left) {
                classes.push(IndexClass::LHeavy);
            }
            if heavy(&right) {
                classes.push(IndexClass::RHeavy);
            }
        }
        if !active && classes.is_empty() {
            classes.push(IndexClass::Inactive);
        }
        out.push(Classification { pos: i, active, classes });
    }
    Ok(out)
}
