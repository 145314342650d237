//! Fully dynamic LZ77 over an LPF-tree.
//!
//! The engine keeps two index instances, one per side of an edit. An edit
//! reaches the new-side index first, the transition computes fresh parents
//! from both sides, and only then is the old-side index brought level. Nodes
//! are identified by [`NodeId`], which both instances allocate identically.

mod classify;
mod critical;
mod transition;

pub use classify::{classify, Classification, IndexClass};
pub use critical::{critical_sequence, CriticalSequence, Side};

use serde::{Deserialize, Serialize};

use crate::dynstr::{EditKind, EditOp, NodeId, Symbol};
use crate::error::{Error, Result};
use crate::index::{IndexConfig, IndexStats, Phase, Span, StringIndex};
use crate::lpf;
use crate::lpftree::LpfTree;
use crate::oracle;

use self::transition::{CleanTables, Dir, Transition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhraseKind {
    /// A single symbol with no earlier occurrence.
    FreshChar,
    /// A copy of an earlier, possibly overlapping, substring.
    Copy,
}

/// One LZ77 phrase `[start..end]`, 1-based and inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phrase {
    pub start: usize,
    pub end: usize,
    pub kind: PhraseKind,
    /// An earlier start of the copied text, when known.
    pub source: Option<usize>,
}

impl Phrase {
    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Same boundaries and kind, ignoring the witness.
    pub fn same_shape(&self, o: &Phrase) -> bool {
        (self.start, self.end, self.kind) == (o.start, o.end, o.kind)
    }
}

/// `max(1, ⌈n^{1/3}⌉)`.
pub fn window_param(n: usize) -> usize {
    let mut m = 1usize;
    while m * m * m < n {
        m += 1;
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[derive(Default)]
pub struct EngineConfig {
    pub index: IndexConfig,
    /// Check every applied segment against brute-force parent tables, and the
    /// whole tree after every update. Quadratic; for tests only.
    pub debug_checks: bool,
}


/// Parameters of one transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateContext {
    pub kind: EditKind,
    pub pivot: NodeId,
    /// Position of the pivot in whichever string holds it.
    pub z: usize,
    pub m: usize,
    pub old_len: usize,
    pub new_len: usize,
    /// `[z-m..z-1]`, absent when `z ≤ m`.
    pub m_left: Option<Span>,
    /// The `m` positions after the pivot in the old and new string, absent
    /// when fewer than `m` follow it.
    pub m_right_old: Option<Span>,
    pub m_right_new: Option<Span>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateReport {
    pub ctx: UpdateContext,
    /// Primitive calls of this update, both index instances combined.
    pub stats: IndexStats,
    /// Assignments collected by the updaters.
    pub assignments: usize,
    /// Disjoint segments after refinement.
    pub segments: usize,
    /// Segments that actually changed a parent.
    pub moves: usize,
    pub links: usize,
}

/// The dynamic LZ77 maintainer, generic over the index backend.
pub struct Engine<I: StringIndex> {
    old: I,
    new: I,
    tree: LpfTree,
    cfg: EngineConfig,
    last: Option<UpdateReport>,
}

impl<I: StringIndex> Engine<I> {
    /// Builds both index instances and the LPF-tree from `n` LPF queries.
    pub fn preprocess(symbols: &[Symbol], cfg: EngineConfig) -> Result<Self> {
        let mut e = Self::bare(symbols, cfg)?;
        e.new.set_phase(Phase::Build);
        let n = symbols.len();
        let mut reach = Vec::with_capacity(n);
        for p in 1..=n {
            reach.push(p + lpf::lpf(&e.new, p)?);
        }
        e.new.set_phase(Phase::Other);
        e.link_all(&reach)?;
        Ok(e)
    }

    /// Like [`Engine::preprocess`], but takes `LPF` values computed elsewhere
    /// (entry `p-1` for position `p`). Used to set up large benchmarks.
    pub fn preprocess_with_table(symbols: &[Symbol], cfg: EngineConfig, lpf_table: &[usize]) -> Result<Self> {
        if lpf_table.len() != symbols.len() {
            return Err(Error::Internal(format!("table of {} entries for {} symbols", lpf_table.len(), symbols.len())));
        }
        let mut e = Self::bare(symbols, cfg)?;
        let reach: Vec<usize> = lpf_table.iter().enumerate().map(|(k, &l)| k + 1 + l.max(1)).collect();
        e.link_all(&reach)?;
        Ok(e)
    }

    fn bare(symbols: &[Symbol], cfg: EngineConfig) -> Result<Self> {
        let old = I::build(symbols, &cfg.index)?;
        let new = I::build(symbols, &cfg.index)?;
        let mut tree = LpfTree::new(cfg.index.seed ^ 0x7eee_5eed);
        for p in 1..=symbols.len() {
            let v = new.dynstr().select(p)?;
            if old.dynstr().select(p)? != v {
                return Err(Error::Internal("index instances disagree on node identities".into()));
            }
            tree.insert(v)?;
        }
        Ok(Engine { old, new, tree, cfg, last: None })
    }

    fn link_all(&mut self, reach: &[usize]) -> Result<()> {
        let n = reach.len();
        let ds = self.new.dynstr();
        let key = |x: NodeId| ds.rank(x).expect("tree nodes are live");
        for (k, &t) in reach.iter().enumerate() {
            let v = ds.select(k + 1)?;
            let u = if t > n { NodeId::ROOT } else { ds.select(t)? };
            self.tree.link(v, u, &key)?;
        }
        Ok(())
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    pub fn len(&self) -> usize {
        self.new.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The index over the current string.
    pub fn index(&self) -> &I {
        &self.new
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        self.new.dynstr().to_vec()
    }

    /// Combined counters of both index instances.
    pub fn stats(&self) -> IndexStats {
        let mut s = self.old.stats();
        s.add(&self.new.stats());
        s
    }

    pub fn reset_stats(&self) {
        self.old.reset_stats();
        self.new.reset_stats();
    }

    pub fn last_report(&self) -> Option<&UpdateReport> {
        self.last.as_ref()
    }

    /// Applies one edit and repairs the LPF-tree.
    pub fn update(&mut self, op: &EditOp) -> Result<&UpdateReport> {
        op.validate(self.len())?;
        let before = self.stats();
        let clean = self.cfg.debug_checks.then(|| (self.old.dynstr().to_vec(), {
            let mut v = self.old.dynstr().to_vec();
            op.apply_to_vec(&mut v);
            v
        }));
        let rec = self.new.apply(op)?;
        if rec.kind == EditKind::Insert {
            self.tree.insert(rec.pivot)?;
        }
        let m = window_param(rec.new_len);
        let ctx = context(rec.kind, rec.pivot, rec.pos, m, rec.old_len, rec.new_len);

        let tables = clean.map(|(a, b)| CleanTables { old: oracle::lpf_tree_brute(&a), new: oracle::lpf_tree_brute(&b) });
        let mut tr = Transition::new(&self.old, &self.new, rec.kind, rec.pivot, rec.pos, m);
        tr.super_light()?;
        tr.light()?;
        tr.heavy(Dir::L)?;
        tr.heavy(Dir::R)?;
        let applied = tr.apply(&mut self.tree, tables.as_ref())?;
        self.old.set_phase(Phase::Other);
        self.new.set_phase(Phase::Other);

        let rec_old = self.old.apply(op)?;
        if rec_old.pivot != rec.pivot || rec_old.pos != rec.pos {
            return Err(Error::Internal("index instances diverged on an edit".into()));
        }
        match rec.kind {
            EditKind::Delete => self.tree.delete(rec.pivot)?,
            EditKind::Insert if self.tree.parent(rec.pivot)?.is_none() => {
                return Err(Error::Internal("inserted node was never attached".into()));
            }
            _ => {}
        }
        if self.cfg.debug_checks {
            self.check()?;
        }
        let stats = self.stats().since(&before);
        self.last = Some(UpdateReport {
            ctx,
            stats,
            assignments: applied.assignments,
            segments: applied.segments,
            moves: applied.moves,
            links: applied.links,
        });
        Ok(self.last.as_ref().unwrap())
    }

    /// Tree consistency plus agreement with brute-force parents. Quadratic.
    pub fn check(&mut self) -> Result<()> {
        let ds = self.new.dynstr();
        let key = |x: NodeId| ds.rank(x).expect("tree nodes are live");
        self.tree.check(&key)?;
        let want = oracle::lpf_tree_brute(&self.new.dynstr().to_vec());
        let got = self.parent_positions()?;
        if want != got {
            let p = want.iter().zip(&got).position(|(a, b)| a != b).unwrap_or(0) + 1;
            return Err(Error::Internal(format!("parent of {p} is {} instead of {}", got[p - 1], want[p - 1])));
        }
        Ok(())
    }

    /// Parent position of every index (`n + 1` for the root).
    pub fn parent_positions(&self) -> Result<Vec<usize>> {
        let ds = self.new.dynstr();
        let n = ds.len();
        (1..=n)
            .map(|p| match self.tree.parent(ds.select(p)?)? {
                Some(u) if u == NodeId::ROOT => Ok(n + 1),
                Some(u) => ds.rank(u),
                None => Err(Error::Internal(format!("index {p} is detached"))),
            })
            .collect()
    }

    /// Depth of position `p` in the LPF-tree.
    pub fn depth(&mut self, p: usize) -> Result<usize> {
        let v = self.new.dynstr().select(p)?;
        self.tree.depth(v)
    }

    fn rank_or_end(&self, v: NodeId) -> Result<usize> {
        if v == NodeId::ROOT {
            Ok(self.len() + 1)
        } else {
            self.new.dynstr().rank(v)
        }
    }

    /// Number of phrases of the whole string.
    pub fn phrase_count(&mut self) -> Result<usize> {
        if self.is_empty() {
            return Ok(0);
        }
        self.depth(1)
    }

    /// The `k`-th phrase, 1-based.
    pub fn select_phrase(&mut self, k: usize) -> Result<Phrase> {
        let z = self.phrase_count()?;
        if k == 0 || k > z {
            return Err(Error::OutOfRange { pos: k, len: z });
        }
        let first = self.new.dynstr().select(1)?;
        let a = self.tree.level_ancestor(first, k - 1)?;
        let b = self.tree.level_ancestor(first, k)?;
        let (start, end) = (self.rank_or_end(a)?, self.rank_or_end(b)? - 1);
        let kind = if start == end && self.fresh(start)? { PhraseKind::FreshChar } else { PhraseKind::Copy };
        Ok(Phrase { start, end, kind, source: None })
    }

    fn fresh(&self, p: usize) -> Result<bool> {
        self.new.set_phase(Phase::Query);
        let r = lpf::lpf_raw(&self.new, p).map(|l| l == 0);
        self.new.set_phase(Phase::Other);
        r
    }

    /// Number of phrases needed to cover `[1..i]`.
    pub fn lz_length(&mut self, i: usize) -> Result<usize> {
        let n = self.len();
        if i > n {
            return Err(Error::OutOfRange { pos: i, len: n });
        }
        if i == 0 {
            return Ok(0);
        }
        let z = self.phrase_count()?;
        let first = self.new.dynstr().select(1)?;
        // Smallest k with start(k + 1) > i.
        let (mut lo, mut hi) = (1, z);
        while lo < hi {
            let mid = (lo + hi) / 2;
            let b = self.tree.level_ancestor(first, mid)?;
            if self.rank_or_end(b)? > i {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(lo)
    }

    /// The phrase covering position `i`.
    pub fn containing_phrase(&mut self, i: usize) -> Result<Phrase> {
        if i == 0 || i > self.len() {
            return Err(Error::OutOfRange { pos: i, len: self.len() });
        }
        let k = self.lz_length(i)?;
        self.select_phrase(k)
    }

    /// The whole factorization from `|LZ77|` LPF queries, bypassing the tree.
    pub fn recompute_factorization(&self) -> Result<Vec<Phrase>> {
        self.new.set_phase(Phase::Query);
        let mut out = Vec::new();
        let mut i = 1;
        let n = self.len();
        while i <= n {
            let l = match lpf::lpf_raw(&self.new, i) {
                Ok(l) => l,
                Err(e) => {
                    self.new.set_phase(Phase::Other);
                    return Err(e);
                }
            };
            let p = if l == 0 {
                Phrase { start: i, end: i, kind: PhraseKind::FreshChar, source: None }
            } else {
                Phrase { start: i, end: i + l - 1, kind: PhraseKind::Copy, source: None }
            };
            out.push(p);
            i = p.end + 1;
        }
        self.new.set_phase(Phase::Other);
        Ok(out)
    }

    /// `L(i, j)` on the current string.
    pub fn critical_sequence(&self, i: usize, j: usize) -> Result<CriticalSequence> {
        critical_sequence(&self.new, i, j, Side::New)
    }
}

fn context(kind: EditKind, pivot: NodeId, z: usize, m: usize, old_len: usize, new_len: usize) -> UpdateContext {
    let m_left = (z > m).then(|| Span::new(z - m, z - 1));
    let right = |has: bool, len: usize| {
        let a = z + has as usize;
        (a + m <= len + 1).then(|| Span::with_len(a, m))
    };
    UpdateContext {
        kind,
        pivot,
        z,
        m,
        old_len,
        new_len,
        m_left,
        m_right_old: right(kind != EditKind::Insert, old_len),
        m_right_new: right(kind != EditKind::Delete, new_len),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::NaiveIndex;

    fn eng(s: &str) -> Engine<NaiveIndex> {
        let cfg = EngineConfig { debug_checks: true, ..EngineConfig::default() };
        Engine::preprocess(&s.bytes().map(u32::from).collect::<Vec<_>>(), cfg).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(eng("").phrase_count().unwrap(), 0);
        assert_eq!(eng("abab").phrase_count().unwrap(), 3);
        assert_eq!(eng("aaaa").phrase_count().unwrap(), 2);
        let mut e = eng("abab");
        e.update(&EditOp::Substitute { pos: 4, sym: b'c' as u32 }).unwrap();
        assert_eq!(e.phrase_count().unwrap(), 4);
        let mut e = eng("aaaa");
        e.update(&EditOp::Delete { pos: 1 }).unwrap();
        assert_eq!(e.phrase_count().unwrap(), 2);
        let mut e = eng("abab");
        let p = e.select_phrase(3).unwrap();
        assert_eq!((p.start, p.end, p.kind), (3, 4, PhraseKind::Copy));
        assert_eq!(e.lz_length(4).unwrap(), 3);
        let mut e = eng("aaaa");
        assert_eq!(e.lz_length(2).unwrap(), 2);
    }

    #[test]
    fn window() {
        assert_eq!(window_param(0), 1);
        assert_eq!(window_param(8), 2);
        assert_eq!(window_param(9), 3);
        assert_eq!(window_param(1 << 12), 16);
    }
}
