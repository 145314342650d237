//! Editable string with stable node identities.
//!
//! The sequence lives in a treap with parent pointers. Every tree node carries
//! its subtree size (for rank/select) and a pair of Karp-Rabin fingerprints
//! (for the fast index backend), so one structure serves both purposes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Alphabet letter.
pub type Symbol = u32;

/// Largest admissible symbol code.
pub const MAX_SYMBOL: Symbol = (1 << 30) - 1;

const NIL: u32 = u32::MAX;
const M61: u64 = (1 << 61) - 1;
const M31: u64 = (1 << 31) - 1;

/// Stable identity of one string position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    /// Sentinel for the virtual position `n + 1`.
    pub const ROOT: NodeId = NodeId(u32::MAX);

    pub fn raw(self) -> u32 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EditKind {
    Insert,
    Delete,
    Substitute,
}

/// A single edit. Positions are 1-based; an insertion may target `n + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EditOp {
    Insert { pos: usize, sym: Symbol },
    Delete { pos: usize },
    Substitute { pos: usize, sym: Symbol },
}

impl EditOp {
    pub fn kind(&self) -> EditKind {
        match self {
            EditOp::Insert { .. } => EditKind::Insert,
            EditOp::Delete { .. } => EditKind::Delete,
            EditOp::Substitute { .. } => EditKind::Substitute,
        }
    }

    pub fn pos(&self) -> usize {
        match *self {
            EditOp::Insert { pos, .. } | EditOp::Delete { pos } | EditOp::Substitute { pos, .. } => pos,
        }
    }

    /// Checks bounds against a string of length `len`.
    pub fn validate(&self, len: usize) -> Result<()> {
        let (pos, limit) = match *self {
            EditOp::Insert { pos, sym } => {
                check_symbol(sym)?;
                (pos, len + 1)
            }
            EditOp::Delete { pos } => (pos, len),
            EditOp::Substitute { pos, sym } => {
                check_symbol(sym)?;
                (pos, len)
            }
        };
        if pos == 0 || pos > limit {
            return Err(Error::OutOfRange { pos, len });
        }
        Ok(())
    }

    /// Applies the edit to a plain vector (reference model).
    pub fn apply_to_vec(&self, v: &mut Vec<Symbol>) {
        match *self {
            EditOp::Insert { pos, sym } => v.insert(pos - 1, sym),
            EditOp::Delete { pos } => {
                v.remove(pos - 1);
            }
            EditOp::Substitute { pos, sym } => v[pos - 1] = sym,
        }
    }
}

/// Outcome of [`DynString::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EditReceipt {
    pub kind: EditKind,
    /// Inserted, deleted or substituted node.
    pub pivot: NodeId,
    /// Position of the pivot in whichever string contains it.
    pub pos: usize,
    pub old_len: usize,
    pub new_len: usize,
}

fn check_symbol(sym: Symbol) -> Result<()> {
    if sym > MAX_SYMBOL {
        Err(Error::SymbolTooLarge(sym))
    } else {
        Ok(())
    }
}

/// Fingerprint of a string under two independent moduli.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Fingerprint(pub u64, pub u64);

#[inline]
fn mul61(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    let s = (p as u64 & M61) + (p >> 61) as u64;
    if s >= M61 {
        s - M61
    } else {
        s
    }
}

#[inline]
fn mul31(a: u64, b: u64) -> u64 {
    let p = a * b;
    let s = (p & M31) + (p >> 31);
    let s = (s & M31) + (s >> 31);
    if s >= M31 {
        s - M31
    } else {
        s
    }
}

#[inline]
fn add(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
fn sub(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

#[derive(Clone, Debug)]
struct Powers {
    b1: u64,
    b2: u64,
    p1: Vec<u64>,
    p2: Vec<u64>,
}

impl Powers {
    fn new(rng: &mut ChaCha8Rng) -> Self {
        let b1 = rng.gen_range(1 << 20..M61 - 1);
        let b2 = rng.gen_range(1 << 20..M31 - 1);
        Powers { b1, b2, p1: vec![1], p2: vec![1] }
    }

    fn reserve(&mut self, n: usize) {
        while self.p1.len() <= n {
            let a = *self.p1.last().unwrap();
            let b = *self.p2.last().unwrap();
            self.p1.push(mul61(a, self.b1));
            self.p2.push(mul31(b, self.b2));
        }
    }

    /// Concatenation: fingerprint of `x` followed by `len_y` symbols hashing to `y`.
    #[inline]
    fn concat(&self, x: Fingerprint, y: Fingerprint, len_y: usize) -> Fingerprint {
        Fingerprint(
            add(mul61(x.0, self.p1[len_y]), y.0, M61),
            add(mul31(x.1, self.p2[len_y]), y.1, M31),
        )
    }
}

#[derive(Clone, Debug)]
struct Node {
    sym: Symbol,
    prio: u32,
    l: u32,
    r: u32,
    p: u32,
    size: u32,
    fp: Fingerprint,
    live: bool,
}

/// The editable string. Positions in the public API are 1-based.
#[derive(Clone, Debug)]
pub struct DynString {
    nodes: Vec<Node>,
    root: u32,
    pow: Powers,
    rng: ChaCha8Rng,
}

impl DynString {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pow = Powers::new(&mut rng);
        DynString { nodes: Vec::new(), root: NIL, pow, rng }
    }

    /// Builds the string in linear time.
    pub fn from_symbols(symbols: &[Symbol], seed: u64) -> Result<Self> {
        let mut s = DynString::new(seed);
        for &c in symbols {
            check_symbol(c)?;
        }
        s.pow.reserve(symbols.len() + 1);
        // Cartesian tree over random priorities.
        let mut stack: Vec<u32> = Vec::new();
        for &c in symbols {
            let x = s.alloc(c);
            let mut last = NIL;
            while let Some(&top) = stack.last() {
                if s.nodes[top as usize].prio < s.nodes[x as usize].prio {
                    last = top;
                    stack.pop();
                } else {
                    break;
                }
            }
            s.set_l(x, last);
            if let Some(&top) = stack.last() {
                s.set_r(top, x);
            }
            stack.push(x);
        }
        if let Some(&r) = stack.first() {
            s.root = r;
            s.nodes[r as usize].p = NIL;
            s.pull_subtree(r);
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.size(self.root)
    }

    pub fn is_empty(&self) -> bool {
        self.root == NIL
    }

    pub fn is_live(&self, id: NodeId) -> bool {
        self.nodes.get(id.0 as usize).is_some_and(|n| n.live)
    }

    /// Applies an edit; rejected edits leave the string untouched.
    pub fn apply(&mut self, op: &EditOp) -> Result<EditReceipt> {
        let old_len = self.len();
        op.validate(old_len)?;
        let pivot = match *op {
            EditOp::Insert { pos, sym } => self.insert(pos, sym)?,
            EditOp::Delete { pos } => self.delete(pos)?,
            EditOp::Substitute { pos, sym } => self.substitute(pos, sym)?,
        };
        Ok(EditReceipt { kind: op.kind(), pivot, pos: op.pos(), old_len, new_len: self.len() })
    }

    pub fn insert(&mut self, pos: usize, sym: Symbol) -> Result<NodeId> {
        let n = self.len();
        check_symbol(sym)?;
        if pos == 0 || pos > n + 1 {
            return Err(Error::OutOfRange { pos, len: n });
        }
        self.pow.reserve(n + 2);
        let x = self.alloc(sym);
        self.pull(x);
        let (a, b) = self.split(self.root, pos - 1);
        let t = self.merge(a, x);
        self.root = self.merge(t, b);
        self.nodes[self.root as usize].p = NIL;
        Ok(NodeId(x))
    }

    pub fn delete(&mut self, pos: usize) -> Result<NodeId> {
        let n = self.len();
        if pos == 0 || pos > n {
            return Err(Error::OutOfRange { pos, len: n });
        }
        let (a, bc) = self.split(self.root, pos - 1);
        let (x, c) = self.split(bc, 1);
        self.root = self.merge(a, c);
        if self.root != NIL {
            self.nodes[self.root as usize].p = NIL;
        }
        let node = &mut self.nodes[x as usize];
        node.live = false;
        node.l = NIL;
        node.r = NIL;
        node.p = NIL;
        Ok(NodeId(x))
    }

    pub fn substitute(&mut self, pos: usize, sym: Symbol) -> Result<NodeId> {
        check_symbol(sym)?;
        let x = self.select_raw(pos)?;
        self.nodes[x as usize].sym = sym;
        let mut t = x;
        while t != NIL {
            self.pull(t);
            t = self.nodes[t as usize].p;
        }
        Ok(NodeId(x))
    }

    /// Position of a live node.
    pub fn rank(&self, id: NodeId) -> Result<usize> {
        if !self.is_live(id) {
            return Err(Error::DeadNode(id));
        }
        let mut x = id.0;
        let mut r = self.size(self.nodes[x as usize].l) + 1;
        loop {
            let p = self.nodes[x as usize].p;
            if p == NIL {
                break;
            }
            if self.nodes[p as usize].r == x {
                r += self.size(self.nodes[p as usize].l) + 1;
            }
            x = p;
        }
        Ok(r)
    }

    /// Node at a position.
    pub fn select(&self, pos: usize) -> Result<NodeId> {
        self.select_raw(pos).map(NodeId)
    }

    pub fn char_at(&self, pos: usize) -> Result<Symbol> {
        Ok(self.nodes[self.select_raw(pos)? as usize].sym)
    }

    /// Symbol stored at a live node.
    pub fn symbol_of(&self, id: NodeId) -> Result<Symbol> {
        if !self.is_live(id) {
            return Err(Error::DeadNode(id));
        }
        Ok(self.nodes[id.0 as usize].sym)
    }

    /// Symbols at positions `start..=end`; empty when `start > end`.
    pub fn extract(&self, start: usize, end: usize) -> Result<Vec<Symbol>> {
        if start > end {
            return Ok(Vec::new());
        }
        self.check_range(start, end)?;
        let mut out = Vec::with_capacity(end - start + 1);
        let mut x = self.select_raw(start)?;
        out.push(self.nodes[x as usize].sym);
        for _ in start..end {
            x = self.successor(x);
            out.push(self.nodes[x as usize].sym);
        }
        Ok(out)
    }

    pub fn to_vec(&self) -> Vec<Symbol> {
        self.extract(1, self.len()).unwrap_or_default()
    }

    /// Fingerprint of positions `start..=end` (empty fingerprint when `start > end`).
    pub fn fingerprint(&self, start: usize, end: usize) -> Result<Fingerprint> {
        if start > end {
            return Ok(Fingerprint::default());
        }
        self.check_range(start, end)?;
        Ok(self.fp_unchecked(start, end))
    }

    pub(crate) fn fp_unchecked(&self, start: usize, end: usize) -> Fingerprint {
        let hi = self.prefix_fp(end);
        let lo = self.prefix_fp(start - 1);
        let len = end + 1 - start;
        Fingerprint(
            sub(hi.0, mul61(lo.0, self.pow.p1[len]), M61),
            sub(hi.1, mul31(lo.1, self.pow.p2[len]), M31),
        )
    }

    fn prefix_fp(&self, mut k: usize) -> Fingerprint {
        let mut acc = Fingerprint::default();
        let mut t = self.root;
        while k > 0 {
            let node = &self.nodes[t as usize];
            let ls = self.size(node.l);
            if k <= ls {
                t = node.l;
                continue;
            }
            let left = if node.l == NIL { Fingerprint::default() } else { self.nodes[node.l as usize].fp };
            acc = self.pow.concat(acc, left, ls);
            acc = self.pow.concat(acc, leaf_fp(node.sym), 1);
            k -= ls + 1;
            t = node.r;
        }
        acc
    }

    fn check_range(&self, start: usize, end: usize) -> Result<()> {
        let len = self.len();
        if start == 0 || end > len || start > end {
            return Err(Error::BadRange { start, end, len });
        }
        Ok(())
    }

    fn alloc(&mut self, sym: Symbol) -> u32 {
        let prio = self.rng.gen();
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            sym,
            prio,
            l: NIL,
            r: NIL,
            p: NIL,
            size: 1,
            fp: leaf_fp(sym),
            live: true,
        });
        id
    }

    fn select_raw(&self, pos: usize) -> Result<u32> {
        let n = self.len();
        if pos == 0 || pos > n {
            return Err(Error::OutOfRange { pos, len: n });
        }
        let mut k = pos;
        let mut t = self.root;
        loop {
            let node = &self.nodes[t as usize];
            let ls = self.size(node.l);
            if k <= ls {
                t = node.l;
            } else if k == ls + 1 {
                return Ok(t);
            } else {
                k -= ls + 1;
                t = node.r;
            }
        }
    }

    fn successor(&self, mut x: u32) -> u32 {
        let r = self.nodes[x as usize].r;
        if r != NIL {
            let mut t = r;
            while self.nodes[t as usize].l != NIL {
                t = self.nodes[t as usize].l;
            }
            return t;
        }
        loop {
            let p = self.nodes[x as usize].p;
            if p == NIL || self.nodes[p as usize].l == x {
                return p;
            }
            x = p;
        }
    }

    #[inline]
    fn size(&self, t: u32) -> usize {
        if t == NIL {
            0
        } else {
            self.nodes[t as usize].size as usize
        }
    }

    fn set_l(&mut self, t: u32, c: u32) {
        self.nodes[t as usize].l = c;
        if c != NIL {
            self.nodes[c as usize].p = t;
        }
    }

    fn set_r(&mut self, t: u32, c: u32) {
        self.nodes[t as usize].r = c;
        if c != NIL {
            self.nodes[c as usize].p = t;
        }
    }

    fn pull(&mut self, t: u32) {
        let (l, r, sym) = {
            let n = &self.nodes[t as usize];
            (n.l, n.r, n.sym)
        };
        let (ls, lf) = if l == NIL { (0, Fingerprint::default()) } else { (self.size(l), self.nodes[l as usize].fp) };
        let (rs, rf) = if r == NIL { (0, Fingerprint::default()) } else { (self.size(r), self.nodes[r as usize].fp) };
        let mid = self.pow.concat(lf, leaf_fp(sym), 1);
        let fp = self.pow.concat(mid, rf, rs);
        let node = &mut self.nodes[t as usize];
        node.size = (ls + rs + 1) as u32;
        node.fp = fp;
    }

    fn pull_subtree(&mut self, root: u32) {
        // Iterative post-order so that deep builds cannot overflow the stack.
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![root];
        while let Some(t) = stack.pop() {
            order.push(t);
            let n = &self.nodes[t as usize];
            if n.l != NIL {
                stack.push(n.l);
            }
            if n.r != NIL {
                stack.push(n.r);
            }
        }
        for &t in order.iter().rev() {
            self.pull(t);
        }
    }

    /// Splits off the first `k` nodes.
    fn split(&mut self, t: u32, k: usize) -> (u32, u32) {
        if t == NIL {
            return (NIL, NIL);
        }
        let ls = self.size(self.nodes[t as usize].l);
        let (a, b) = if k <= ls {
            let (a, b) = self.split(self.nodes[t as usize].l, k);
            self.set_l(t, b);
            self.pull(t);
            (a, t)
        } else {
            let (a, b) = self.split(self.nodes[t as usize].r, k - ls - 1);
            self.set_r(t, a);
            self.pull(t);
            (t, b)
        };
        if a != NIL {
            self.nodes[a as usize].p = NIL;
        }
        if b != NIL {
            self.nodes[b as usize].p = NIL;
        }
        (a, b)
    }

    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        if self.nodes[a as usize].prio > self.nodes[b as usize].prio {
            let r = self.merge(self.nodes[a as usize].r, b);
            self.set_r(a, r);
            self.pull(a);
            a
        } else {
            let l = self.merge(a, self.nodes[b as usize].l);
            self.set_l(b, l);
            self.pull(b);
            b
        }
    }
}

#[inline]
fn leaf_fp(sym: Symbol) -> Fingerprint {
    let v = sym as u64 + 1;
    Fingerprint(v, v)
}
