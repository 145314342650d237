//! One transition from `T_S` to `T_S'`.
//!
//! The updaters only collect assignments `[lo..hi] -> target` over ranks in
//! the union string `U` (the one holding every node of both strings). Each
//! target is computed from `S'`, so overlapping assignments must agree. The
//! sweep in [`Transition::apply`] refines them into disjoint segments and moves
//! each one with a single `move_interval`.

use std::collections::{HashMap, HashSet};

use crate::dynstr::{EditKind, NodeId};
use crate::error::{Error, Result};
use crate::index::{Phase, Span, StringIndex};
use crate::lpf;
use crate::lpftree::LpfTree;

use super::critical::{critical_with, Side};

const SIDES: [Side; 2] = [Side::Old, Side::New];

#[derive(Clone, Copy, Debug)]
struct Assignment {
    lo: usize,
    hi: usize,
    target: NodeId,
}

/// Heavy direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(super) enum Dir {
    L,
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Reach {
    /// `j = i + m - 1`.
    Window,
    /// `j` = rank of this node (the run end), or `z - 1` when it is missing.
    RunEnd(NodeId),
}

/// Counters reported back to the engine.
#[derive(Clone, Copy, Debug, Default)]
pub(super) struct Applied {
    pub assignments: usize,
    pub segments: usize,
    pub moves: usize,
    pub links: usize,
}

/// Oracle parent tables used by the debug cleanliness check: entry `p-1` is the
/// parent position of `p` (`len + 1` is the root).
pub(super) struct CleanTables {
    pub old: Vec<usize>,
    pub new: Vec<usize>,
}

pub(super) struct Transition<'a, I: StringIndex> {
    old: &'a I,
    new: &'a I,
    kind: EditKind,
    pivot: NodeId,
    zp: usize,
    m: usize,
    memo: [HashMap<usize, usize>; 2],
    out: Vec<Assignment>,
}

impl<'a, I: StringIndex> Transition<'a, I> {
    pub(super) fn new(old: &'a I, new: &'a I, kind: EditKind, pivot: NodeId, zp: usize, m: usize) -> Self {
        Transition { old, new, kind, pivot, zp, m, memo: [HashMap::new(), HashMap::new()], out: Vec::new() }
    }

    fn idx(&self, side: Side) -> &'a I {
        match side {
            Side::Old => self.old,
            Side::New => self.new,
        }
    }

    fn has_pivot(&self, side: Side) -> bool {
        !matches!((side, self.kind), (Side::Old, EditKind::Insert) | (Side::New, EditKind::Delete))
    }

    fn len(&self, side: Side) -> usize {
        self.idx(side).len()
    }

    /// First position after the pivot in `side`.
    fn after(&self, side: Side) -> usize {
        self.zp + self.has_pivot(side) as usize
    }

    fn u(&self) -> Side {
        if self.kind == EditKind::Delete {
            Side::Old
        } else {
            Side::New
        }
    }

    fn rank(&self, side: Side, v: NodeId) -> Result<usize> {
        self.idx(side).dynstr().rank(v)
    }

    fn select(&self, side: Side, p: usize) -> Result<NodeId> {
        self.idx(side).dynstr().select(p)
    }

    fn set_phase(&self, phase: Phase) {
        self.old.set_phase(phase);
        self.new.set_phase(phase);
    }

    /// `p + max(LPF(p), 1)` in `side`, memoized for the transition.
    fn reach(&mut self, side: Side, p: usize) -> Result<usize> {
        let slot = side as usize;
        if let Some(&l) = self.memo[slot].get(&p) {
            return Ok(p + l);
        }
        let l = lpf::lpf(self.idx(side), p)?;
        self.memo[slot].insert(p, l);
        Ok(p + l)
    }

    /// Parent of `v` in `T_S'`.
    fn target(&mut self, v: NodeId) -> Result<NodeId> {
        let p = self.rank(Side::New, v)?;
        let t = self.reach(Side::New, p)?;
        if t > self.len(Side::New) {
            Ok(NodeId::ROOT)
        } else {
            self.select(Side::New, t)
        }
    }

    fn assign_node(&mut self, v: NodeId) -> Result<()> {
        if v == self.pivot && !self.has_pivot(Side::New) {
            return Ok(());
        }
        let r = self.rank(self.u(), v)?;
        let target = self.target(v)?;
        self.out.push(Assignment { lo: r, hi: r, target });
        Ok(())
    }

    pub(super) fn super_light(&mut self) -> Result<()> {
        self.set_phase(Phase::SuperLight);
        let lo = self.zp.saturating_sub(self.m + 1).max(1);
        let hi = self.len(Side::New).min(self.zp);
        for p in lo..=hi {
            let v = self.select(Side::New, p)?;
            self.assign_node(v)?;
        }
        Ok(())
    }

    /// Leftmost occurrences after the pivot of every window `T[z-a..z+b]`.
    /// Once a window has no occurrence, every window containing it is skipped.
    pub(super) fn light(&mut self) -> Result<()> {
        self.set_phase(Phase::Light);
        for side in SIDES {
            let n = self.len(side);
            let aft = self.after(side);
            if aft > n {
                continue;
            }
            let text = Span::new(aft, n);
            let amax = self.m.min(self.zp - 1);
            let mut limit = self.m.min(n + 1 - aft) + 1;
            for a in 0..=amax {
                let mut b = 0;
                while b < limit {
                    let (start, end) = (self.zp - a, aft + b);
                    if end == start {
                        // Empty window: every position qualifies, nothing to learn.
                        b += 1;
                        continue;
                    }
                    let pat = Span::new(start, end - 1);
                    if pat.len() > text.len() {
                        limit = b;
                        break;
                    }
                    match self.idx(side).first_occ(pat, text)? {
                        Some(k) => {
                            let v = self.select(side, k)?;
                            self.assign_node(v)?;
                            b += 1;
                        }
                        None => {
                            limit = b;
                        }
                    }
                }
                if limit == 0 {
                    break;
                }
            }
        }
        Ok(())
    }

    fn window(&self, dir: Dir, side: Side) -> Span {
        match dir {
            Dir::L => Span::new(self.zp - self.m, self.zp - 1),
            Dir::R => Span::with_len(self.after(side), self.m),
        }
    }

    pub(super) fn heavy(&mut self, dir: Dir) -> Result<()> {
        self.set_phase(match dir {
            Dir::L => Phase::HeavyL,
            Dir::R => Phase::HeavyR,
        });
        let m = self.m;
        match dir {
            Dir::L if self.zp <= m => return Ok(()),
            Dir::R if self.len(Side::New) + 1 - self.after(Side::New) < m => return Ok(()),
            _ => {}
        }
        let mut anchors: Vec<(NodeId, Reach)> = Vec::new();
        let mut seen = HashSet::new();
        for side in SIDES {
            let n = self.len(side);
            let idx = self.idx(side);
            for c in idx.clusters(self.window(dir, side), Span::new(1, n))? {
                let e = if c.a + c.p > n { n } else { c.a + c.p + idx.lcp(c.a, c.a + c.p)? - 1 };
                let mut push = |v: NodeId, r: Reach| {
                    if seen.insert((v, r)) {
                        anchors.push((v, r));
                    }
                };
                push(self.select(side, c.a)?, Reach::Window);
                if c.a + c.p <= n {
                    push(self.select(side, c.a + c.p)?, Reach::Window);
                }
                push(self.select(side, c.b)?, Reach::RunEnd(self.select(side, e)?));
            }
        }
        for (v, reach) in anchors {
            self.heavy_anchor(dir, v, reach)?;
        }
        Ok(())
    }

    fn heavy_anchor(&mut self, dir: Dir, v: NodeId, reach: Reach) -> Result<()> {
        if v == self.pivot && self.kind != EditKind::Substitute {
            return Ok(());
        }
        let m = self.m;
        let mut lists: Vec<Vec<NodeId>> = Vec::with_capacity(2);
        for side in SIDES {
            let n = self.len(side);
            let i = self.rank(side, v)?;
            let w = self.window(dir, side);
            if i + m - 1 > n || (i != w.start && self.idx(side).lcp(i, w.start)? < m) {
                return Ok(());
            }
            let j = match reach {
                Reach::Window => i + m - 1,
                Reach::RunEnd(e) if e == self.pivot && !self.has_pivot(side) => self.zp - 1,
                Reach::RunEnd(e) => self.rank(side, e)?,
            };
            let crit = critical_with(i, j, |x| self.reach(side, x))?;
            let mut nodes = vec![v];
            for p in crit {
                nodes.push(self.select(side, p)?);
            }
            lists.push(nodes);
        }
        let u = self.u();
        let mut q = 0;
        for l in &lists {
            q = q.max(self.rank(u, *l.last().unwrap())?);
        }
        let mut starts = vec![q];
        for l in &lists {
            for &x in &l[1..] {
                let r = self.rank(u, x)?;
                if r >= q {
                    starts.push(r);
                }
            }
        }
        starts.sort_unstable();
        starts.dedup();
        let anchor = self.rank(u, v)?;
        for k in 0..starts.len() {
            let lo = starts[k];
            let hi = starts.get(k + 1).map_or(anchor, |&s| s - 1);
            let mut first = self.select(u, lo)?;
            if first == self.pivot && !self.has_pivot(Side::New) {
                if lo == hi {
                    continue;
                }
                first = self.select(u, lo + 1)?;
            }
            let target = self.target(first)?;
            self.out.push(Assignment { lo, hi, target });
        }
        Ok(())
    }

    /// Refines the collected assignments into disjoint segments and applies them.
    pub(super) fn apply(self, tree: &mut LpfTree, clean: Option<&CleanTables>) -> Result<Applied> {
        let u = self.u();
        let uds = self.idx(u).dynstr();
        let key = |x: NodeId| uds.rank(x).expect("tree nodes live in the union string");
        let zu = self.rank(u, self.pivot)?;
        let mut applied = Applied { assignments: self.out.len(), ..Applied::default() };

        let mut points: Vec<usize> = Vec::with_capacity(2 * self.out.len() + 2);
        for a in &self.out {
            points.push(a.lo);
            points.push(a.hi + 1);
        }
        points.push(zu);
        points.push(zu + 1);
        points.sort_unstable();
        points.dedup();
        let mut by_start: Vec<Assignment> = self.out.clone();
        by_start.sort_unstable_by_key(|a| a.lo);
        let mut by_end: Vec<Assignment> = self.out.clone();
        by_end.sort_unstable_by_key(|a| a.hi);
        let (mut si, mut ei) = (0, 0);
        let mut active: HashMap<NodeId, usize> = HashMap::new();
        let mut segments = Vec::new();
        for w in points.windows(2) {
            let (x, next) = (w[0], w[1]);
            while ei < by_end.len() && by_end[ei].hi < x {
                let t = by_end[ei].target;
                let c = active.get_mut(&t).expect("ended assignment was active");
                *c -= 1;
                if *c == 0 {
                    active.remove(&t);
                }
                ei += 1;
            }
            while si < by_start.len() && by_start[si].lo <= x {
                *active.entry(by_start[si].target).or_insert(0) += 1;
                si += 1;
            }
            match active.len() {
                0 => {}
                1 => segments.push((x, next - 1, *active.keys().next().unwrap())),
                _ => {
                    return Err(Error::Internal(format!(
                        "conflicting targets {:?} for ranks {x}..{}",
                        active.keys().collect::<Vec<_>>(),
                        next - 1
                    )))
                }
            }
        }

        for (lo, hi, target) in segments {
            if lo == zu && !self.has_pivot(Side::New) {
                continue;
            }
            applied.segments += 1;
            if let Some(t) = clean {
                self.check_clean(t, lo, hi, target)?;
            }
            if lo == zu && !self.has_pivot(Side::Old) {
                tree.link(self.pivot, target, &key)?;
                applied.links += 1;
                continue;
            }
            let (a, b) = (self.select(u, lo)?, self.select(u, hi)?);
            if tree.parent(a)? == Some(target) {
                continue;
            }
            tree.move_interval(target, a, b, hi - lo + 1, &key)
                .map_err(|e| Error::Internal(format!("move of ranks {lo}..{hi}: {e}")))?;
            applied.moves += 1;
        }
        Ok(applied)
    }

    fn parent_by_table(&self, side: Side, table: &[usize], v: NodeId) -> Result<NodeId> {
        let p = self.rank(side, v)?;
        let t = table[p - 1];
        if t > self.len(side) {
            Ok(NodeId::ROOT)
        } else {
            self.select(side, t)
        }
    }

    /// Every node of the segment shares its parent in `T_S` and has `target`
    /// as parent in `T_S'`.
    fn check_clean(&self, t: &CleanTables, lo: usize, hi: usize, target: NodeId) -> Result<()> {
        let u = self.u();
        let mut old_parent = None;
        for r in lo..=hi {
            let v = self.select(u, r)?;
            if v != self.pivot || self.has_pivot(Side::New) {
                let np = self.parent_by_table(Side::New, &t.new, v)?;
                if np != target {
                    return Err(Error::Internal(format!("rank {r} is not S'-clean: parent {np:?}, target {target:?}")));
                }
            }
            if v != self.pivot || self.has_pivot(Side::Old) {
                let op = self.parent_by_table(Side::Old, &t.old, v)?;
                if *old_parent.get_or_insert(op) != op {
                    return Err(Error::Internal(format!("ranks {lo}..{hi} are not S-clean")));
                }
            }
        }
        Ok(())
    }
}
