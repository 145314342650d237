//! Link-cut forest with non-negative node weights and path sums.
//!
//! Each node carries the weight of the edge to its parent. No evert is ever
//! needed: links always attach a tree root below some node.

pub(super) const NIL: u32 = u32::MAX;

#[derive(Clone, Debug, Default)]
pub(super) struct LinkCut {
    ch: Vec<[u32; 2]>,
    up: Vec<u32>,
    w: Vec<u32>,
    agg: Vec<u64>,
}

impl LinkCut {
    pub(super) fn grow(&mut self, n: usize) {
        if self.ch.len() < n {
            self.ch.resize(n, [NIL, NIL]);
            self.up.resize(n, NIL);
            self.w.resize(n, 0);
            self.agg.resize(n, 0);
        }
    }

    fn sum(&self, x: u32) -> u64 {
        if x == NIL {
            0
        } else {
            self.agg[x as usize]
        }
    }

    fn pull(&mut self, x: u32) {
        let [l, r] = self.ch[x as usize];
        self.agg[x as usize] = self.sum(l) + self.sum(r) + self.w[x as usize] as u64;
    }

    fn is_splay_root(&self, x: u32) -> bool {
        let p = self.up[x as usize];
        p == NIL || (self.ch[p as usize][0] != x && self.ch[p as usize][1] != x)
    }

    fn rotate(&mut self, x: u32) {
        let p = self.up[x as usize];
        let g = self.up[p as usize];
        let dir = (self.ch[p as usize][1] == x) as usize;
        if !self.is_splay_root(p) {
            let side = (self.ch[g as usize][1] == p) as usize;
            self.ch[g as usize][side] = x;
        }
        self.up[x as usize] = g;
        let b = self.ch[x as usize][1 - dir];
        self.ch[p as usize][dir] = b;
        if b != NIL {
            self.up[b as usize] = p;
        }
        self.ch[x as usize][1 - dir] = p;
        self.up[p as usize] = x;
        self.pull(p);
        self.pull(x);
    }

    fn splay(&mut self, x: u32) {
        while !self.is_splay_root(x) {
            let p = self.up[x as usize];
            if !self.is_splay_root(p) {
                let g = self.up[p as usize];
                let zigzig = (self.ch[g as usize][0] == p) == (self.ch[p as usize][0] == x);
                self.rotate(if zigzig { p } else { x });
            }
            self.rotate(x);
        }
    }

    /// Makes the root-to-`x` path preferred; `x` ends as the splay root with no right child.
    fn access(&mut self, x: u32) {
        let mut last = NIL;
        let mut y = x;
        while y != NIL {
            self.splay(y);
            self.ch[y as usize][1] = last;
            self.pull(y);
            last = y;
            y = self.up[y as usize];
        }
        self.splay(x);
    }

    /// Attaches tree root `x` below `y` with edge weight `w`.
    pub(super) fn link(&mut self, x: u32, y: u32, w: u32) {
        self.access(x);
        self.w[x as usize] = w;
        self.pull(x);
        self.up[x as usize] = y;
    }

    /// Detaches `x` from its parent; the edge weight becomes 0.
    pub(super) fn cut(&mut self, x: u32) {
        self.access(x);
        let l = self.ch[x as usize][0];
        if l != NIL {
            self.up[l as usize] = NIL;
            self.ch[x as usize][0] = NIL;
        }
        self.w[x as usize] = 0;
        self.pull(x);
    }

    /// Sum of edge weights from `x` up to its tree root.
    pub(super) fn depth(&mut self, x: u32) -> u64 {
        self.access(x);
        self.agg[x as usize]
    }

    pub(super) fn find_root(&mut self, x: u32) -> u32 {
        self.access(x);
        let mut t = x;
        while self.ch[t as usize][0] != NIL {
            t = self.ch[t as usize][0];
        }
        self.splay(t);
        t
    }

    /// Deepest ancestor of `x` (inclusive) whose weighted depth is at most `d`.
    pub(super) fn deepest_within(&mut self, x: u32, d: u64) -> u32 {
        self.access(x);
        let mut t = x;
        let mut acc = 0;
        let mut cand = NIL;
        while t != NIL {
            let l = self.ch[t as usize][0];
            let through = acc + self.sum(l) + self.w[t as usize] as u64;
            if through <= d {
                cand = t;
                acc = through;
                t = self.ch[t as usize][1];
            } else {
                t = l;
            }
        }
        if cand != NIL {
            self.splay(cand);
        }
        cand
    }
}
