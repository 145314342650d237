//! The dynamic LPF-tree.
//!
//! The children of every node sit in a treap ordered by a caller-supplied key
//! (string rank). The union of all treaps plus owner edges forms a forest `U`:
//! a treap edge weighs 0 and the edge from a treap root to its owner weighs 1,
//! so the weighted depth in `U` equals the depth in the LPF-tree. A link-cut
//! forest over `U` answers depth and level-ancestor queries. Moving a key
//! interval of children is a split of one treap and a union into another.

mod lct;
mod naive;

pub use naive::NaiveTree;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use self::lct::{LinkCut, NIL};
use crate::dynstr::NodeId;
use crate::error::{Error, Result};

fn slot(id: NodeId) -> u32 {
    if id == NodeId::ROOT {
        0
    } else {
        id.0 + 1
    }
}

fn node(s: u32) -> NodeId {
    if s == 0 {
        NodeId::ROOT
    } else {
        NodeId(s - 1)
    }
}

#[derive(Clone, Copy, Debug)]
struct Slot {
    live: bool,
    prio: u32,
    l: u32,
    r: u32,
    p: u32,
    size: u32,
    /// Treap root of this node's children.
    kids: u32,
    /// Set on treap roots: the node whose children the treap holds.
    owner: u32,
    /// Parent and weight currently linked in the link-cut forest.
    cur_up: u32,
    cur_w: u32,
}

const EMPTY: Slot =
    Slot { live: false, prio: 0, l: NIL, r: NIL, p: NIL, size: 1, kids: NIL, owner: NIL, cur_up: NIL, cur_w: 0 };

/// Dynamic rooted tree over live [`NodeId`]s plus the virtual root.
#[derive(Clone, Debug)]
pub struct LpfTree {
    s: Vec<Slot>,
    lct: LinkCut,
    rng: ChaCha8Rng,
    touched: Vec<u32>,
    mark: Vec<u32>,
    epoch: u32,
}

impl LpfTree {
    /// A tree holding only the virtual root.
    pub fn new(seed: u64) -> Self {
        let mut t = LpfTree {
            s: Vec::new(),
            lct: LinkCut::default(),
            rng: ChaCha8Rng::seed_from_u64(seed ^ 0x7eee_5eed),
            touched: Vec::new(),
            mark: Vec::new(),
            epoch: 1,
        };
        t.grow(1);
        t.s[0].live = true;
        t
    }

    fn grow(&mut self, n: usize) {
        if self.s.len() < n {
            let n = n.max(self.s.len() * 3 / 2);
            self.s.resize(n, EMPTY);
            self.mark.resize(n, 0);
            self.lct.grow(n);
        }
    }

    fn live_slot(&self, id: NodeId) -> Result<u32> {
        let x = slot(id);
        match self.s.get(x as usize) {
            Some(sl) if sl.live => Ok(x),
            _ => Err(Error::DeadNode(id)),
        }
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.live_slot(id).is_ok()
    }

    // ---- treap plumbing ----

    fn touch(&mut self, x: u32) {
        if x != NIL && self.mark[x as usize] != self.epoch {
            self.mark[x as usize] = self.epoch;
            self.touched.push(x);
        }
    }

    fn size(&self, t: u32) -> u32 {
        if t == NIL {
            0
        } else {
            self.s[t as usize].size
        }
    }

    fn pull(&mut self, t: u32) {
        let (l, r) = (self.s[t as usize].l, self.s[t as usize].r);
        self.s[t as usize].size = 1 + self.size(l) + self.size(r);
    }

    fn set_l(&mut self, t: u32, c: u32) {
        self.s[t as usize].l = c;
        if c != NIL {
            self.s[c as usize].p = t;
            self.s[c as usize].owner = NIL;
            self.touch(c);
        }
    }

    fn set_r(&mut self, t: u32, c: u32) {
        self.s[t as usize].r = c;
        if c != NIL {
            self.s[c as usize].p = t;
            self.s[c as usize].owner = NIL;
            self.touch(c);
        }
    }

    fn detach(&mut self, t: u32) -> u32 {
        if t != NIL {
            self.s[t as usize].p = NIL;
            self.s[t as usize].owner = NIL;
            self.touch(t);
        }
        t
    }

    fn set_kids(&mut self, u: u32, t: u32) {
        self.s[u as usize].kids = t;
        if t != NIL {
            self.s[t as usize].p = NIL;
            self.s[t as usize].owner = u;
            self.touch(t);
        }
    }

    /// Splits into keys `< k` and keys `>= k`.
    fn split<K: Fn(NodeId) -> usize>(&mut self, t: u32, k: usize, key: &K) -> (u32, u32) {
        if t == NIL {
            return (NIL, NIL);
        }
        if key(node(t)) < k {
            let r = self.s[t as usize].r;
            let (a, b) = self.split(r, k, key);
            self.set_r(t, a);
            self.pull(t);
            (self.detach(t), self.detach(b))
        } else {
            let l = self.s[t as usize].l;
            let (a, b) = self.split(l, k, key);
            self.set_l(t, b);
            self.pull(t);
            (self.detach(a), self.detach(t))
        }
    }

    /// Concatenates treaps whose key ranges are ordered `a < b`.
    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return self.detach(b);
        }
        if b == NIL {
            return self.detach(a);
        }
        if self.s[a as usize].prio > self.s[b as usize].prio {
            let r = self.s[a as usize].r;
            let m = self.merge(r, b);
            self.set_r(a, m);
            self.pull(a);
            self.detach(a)
        } else {
            let l = self.s[b as usize].l;
            let m = self.merge(a, l);
            self.set_l(b, m);
            self.pull(b);
            self.detach(b)
        }
    }

    /// Union of two treaps with disjoint (possibly interleaved) key sets.
    fn union<K: Fn(NodeId) -> usize>(&mut self, a: u32, b: u32, key: &K) -> u32 {
        if a == NIL {
            return self.detach(b);
        }
        if b == NIL {
            return self.detach(a);
        }
        let (a, b) = if self.s[a as usize].prio > self.s[b as usize].prio { (a, b) } else { (b, a) };
        let (lb, rb) = self.split(b, key(node(a)), key);
        let (la, ra) = (self.s[a as usize].l, self.s[a as usize].r);
        let l = self.union(la, lb, key);
        let r = self.union(ra, rb, key);
        self.set_l(a, l);
        self.set_r(a, r);
        self.pull(a);
        self.detach(a)
    }

    fn treap_root(&self, mut x: u32) -> u32 {
        while self.s[x as usize].p != NIL {
            x = self.s[x as usize].p;
        }
        x
    }

    /// Parent slot in the LPF-tree, or `NIL` for roots.
    fn parent_slot(&self, x: u32) -> u32 {
        let sl = &self.s[x as usize];
        if sl.p == NIL && sl.owner == NIL {
            return NIL;
        }
        self.s[self.treap_root(x) as usize].owner
    }

    /// Removes `v` from its parent's treap in place.
    fn unhook(&mut self, v: u32) {
        let Slot { l, r, p, owner, .. } = self.s[v as usize];
        if p == NIL && owner == NIL {
            return;
        }
        self.s[v as usize].l = NIL;
        self.s[v as usize].r = NIL;
        let m = self.merge(l, r);
        if p == NIL {
            self.set_kids(owner, m);
        } else {
            if self.s[p as usize].l == v {
                self.set_l(p, m);
            } else {
                self.set_r(p, m);
            }
            let mut y = p;
            while y != NIL {
                self.pull(y);
                y = self.s[y as usize].p;
            }
        }
        let sl = &mut self.s[v as usize];
        sl.p = NIL;
        sl.owner = NIL;
        sl.size = 1;
        self.touch(v);
    }

    /// Brings the link-cut forest in line with the treap pointers of every touched slot.
    fn sync(&mut self) {
        let touched = std::mem::take(&mut self.touched);
        let mut relink = Vec::new();
        for &x in &touched {
            let sl = self.s[x as usize];
            let want = if sl.p != NIL {
                (sl.p, 0)
            } else if sl.owner != NIL {
                (sl.owner, 1)
            } else {
                (NIL, 0)
            };
            if want != (sl.cur_up, sl.cur_w) {
                if sl.cur_up != NIL {
                    self.lct.cut(x);
                }
                self.s[x as usize].cur_up = want.0;
                self.s[x as usize].cur_w = want.1;
                if want.0 != NIL {
                    relink.push((x, want.0, want.1));
                }
            }
        }
        for (x, y, w) in relink {
            self.lct.link(x, y, w);
        }
        self.touched = touched;
        self.touched.clear();
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.epoch = 1;
        }
    }

    // ---- public operations ----

    /// Adds an isolated node.
    pub fn insert(&mut self, v: NodeId) -> Result<()> {
        if v == NodeId::ROOT {
            return Err(Error::Tree("the virtual root cannot be inserted".into()));
        }
        let x = slot(v);
        self.grow(x as usize + 1);
        if self.s[x as usize].live {
            return Err(Error::Tree(format!("node {v:?} is already present")));
        }
        self.s[x as usize] = Slot { live: true, prio: self.rng.gen(), ..EMPTY };
        Ok(())
    }

    /// Removes a leaf, detaching it from its parent first.
    pub fn delete(&mut self, v: NodeId) -> Result<()> {
        let x = self.live_slot(v)?;
        if x == 0 {
            return Err(Error::Tree("the virtual root cannot be deleted".into()));
        }
        if self.s[x as usize].kids != NIL {
            return Err(Error::Tree(format!("node {v:?} is not a leaf")));
        }
        self.unhook(x);
        self.sync();
        self.s[x as usize].live = false;
        Ok(())
    }

    /// Makes root `v` a child of `u`.
    pub fn link<K: Fn(NodeId) -> usize>(&mut self, v: NodeId, u: NodeId, key: &K) -> Result<()> {
        let x = self.live_slot(v)?;
        let y = self.live_slot(u)?;
        if x == 0 || self.parent_slot(x) != NIL {
            return Err(Error::Tree(format!("node {v:?} is not a root")));
        }
        if self.lct.find_root(y) == x {
            return Err(Error::Tree(format!("linking {v:?} under {u:?} would close a cycle")));
        }
        let kids = self.s[y as usize].kids;
        let t = self.union(kids, x, key);
        self.set_kids(y, t);
        self.sync();
        Ok(())
    }

    /// Detaches `v` (and its subtree) from its parent.
    pub fn cut(&mut self, v: NodeId) -> Result<()> {
        let x = self.live_slot(v)?;
        self.unhook(x);
        self.sync();
        Ok(())
    }

    /// Moves the `count` siblings with keys in `key(lo)..=key(hi)` under `target`.
    ///
    /// `lo` and `hi` must share a parent, and exactly `count` of that parent's
    /// children may fall in the key range; otherwise nothing changes and an
    /// error is returned. The caller guarantees `target` is not inside a moved
    /// subtree.
    pub fn move_interval<K: Fn(NodeId) -> usize>(
        &mut self,
        target: NodeId,
        lo: NodeId,
        hi: NodeId,
        count: usize,
        key: &K,
    ) -> Result<()> {
        let (a, b) = (self.live_slot(lo)?, self.live_slot(hi)?);
        let v = self.live_slot(target)?;
        let u = self.parent_slot(a);
        if u == NIL || self.parent_slot(b) != u {
            return Err(Error::Tree(format!("{lo:?} and {hi:?} are not siblings")));
        }
        if u == v {
            return Ok(());
        }
        let (klo, khi) = (key(lo), key(hi));
        let kids = self.s[u as usize].kids;
        let (left, rest) = self.split(kids, klo, key);
        let (mid, right) = self.split(rest, khi + 1, key);
        if self.size(mid) as usize != count {
            let rest = self.merge(mid, right);
            let all = self.merge(left, rest);
            self.set_kids(u, all);
            self.sync();
            return Err(Error::Tree(format!("interval {lo:?}..{hi:?} holds children beyond the expected {count}")));
        }
        let keep = self.merge(left, right);
        self.set_kids(u, keep);
        let kids = self.s[v as usize].kids;
        let t = self.union(kids, mid, key);
        self.set_kids(v, t);
        self.sync();
        Ok(())
    }

    /// Parent in the LPF-tree; `None` for the root and detached nodes.
    pub fn parent(&self, v: NodeId) -> Result<Option<NodeId>> {
        let x = self.live_slot(v)?;
        let p = self.parent_slot(x);
        Ok((p != NIL).then(|| node(p)))
    }

    /// Number of edges from `v` to the root of its tree.
    pub fn depth(&mut self, v: NodeId) -> Result<usize> {
        let x = self.live_slot(v)?;
        Ok(self.lct.depth(x) as usize)
    }

    /// The ancestor `k` edges above `v`.
    pub fn level_ancestor(&mut self, v: NodeId, k: usize) -> Result<NodeId> {
        let x = self.live_slot(v)?;
        let d = self.lct.depth(x);
        if k as u64 > d {
            return Err(Error::Tree(format!("level {k} exceeds depth {d}")));
        }
        Ok(node(self.lct.deepest_within(x, d - k as u64)))
    }

    /// Children of `u` in key order.
    pub fn children(&self, u: NodeId) -> Result<Vec<NodeId>> {
        let x = self.live_slot(u)?;
        let mut out = Vec::new();
        let mut stack = Vec::new();
        let mut t = self.s[x as usize].kids;
        while t != NIL || !stack.is_empty() {
            while t != NIL {
                stack.push(t);
                t = self.s[t as usize].l;
            }
            let y = stack.pop().unwrap();
            out.push(node(y));
            t = self.s[y as usize].r;
        }
        Ok(out)
    }

    /// Live nodes other than the virtual root.
    pub fn nodes(&self) -> Vec<NodeId> {
        (1..self.s.len() as u32).filter(|&x| self.s[x as usize].live).map(node).collect()
    }

    /// Full consistency sweep: treap order and sizes, owner links, and
    /// `depth(x) = depth(parent(x)) + 1` for every node.
    pub fn check<K: Fn(NodeId) -> usize>(&mut self, key: &K) -> Result<()> {
        for x in 0..self.s.len() as u32 {
            if !self.s[x as usize].live {
                continue;
            }
            let kids = self.children(node(x))?;
            for w in kids.windows(2) {
                if key(w[0]) >= key(w[1]) {
                    return Err(Error::Internal(format!("children of {:?} out of order", node(x))));
                }
            }
            let t = self.s[x as usize].kids;
            if self.size(t) as usize != kids.len() {
                return Err(Error::Internal(format!("treap size mismatch under {:?}", node(x))));
            }
            for c in kids {
                if self.parent(c)? != Some(node(x)) {
                    return Err(Error::Internal(format!("{c:?} does not report parent {:?}", node(x))));
                }
                if self.depth(c)? != self.depth(node(x))? + 1 {
                    return Err(Error::Internal(format!("depth of {c:?} disagrees with its parent")));
                }
            }
        }
        Ok(())
    }
}
