use std::collections::BTreeMap;

use crate::dynstr::NodeId;
use crate::error::{Error, Result};

/// Reference tree: explicit parent pointers, linear-time queries.
#[derive(Clone, Debug)]
pub struct NaiveTree {
    parent: BTreeMap<NodeId, Option<NodeId>>,
}

impl Default for NaiveTree {
    fn default() -> Self {
        Self::new()
    }
}

impl NaiveTree {
    pub fn new() -> Self {
        NaiveTree { parent: BTreeMap::from([(NodeId::ROOT, None)]) }
    }

    fn get(&self, v: NodeId) -> Result<Option<NodeId>> {
        self.parent.get(&v).copied().ok_or(Error::DeadNode(v))
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.parent.contains_key(&v)
    }

    pub fn insert(&mut self, v: NodeId) -> Result<()> {
        if self.parent.contains_key(&v) {
            return Err(Error::Tree(format!("node {v:?} is already present")));
        }
        self.parent.insert(v, None);
        Ok(())
    }

    pub fn delete(&mut self, v: NodeId) -> Result<()> {
        self.get(v)?;
        if v == NodeId::ROOT {
            return Err(Error::Tree("the virtual root cannot be deleted".into()));
        }
        if self.parent.values().any(|&p| p == Some(v)) {
            return Err(Error::Tree(format!("node {v:?} is not a leaf")));
        }
        self.parent.remove(&v);
        Ok(())
    }

    fn is_ancestor(&self, a: NodeId, mut x: NodeId) -> bool {
        loop {
            if x == a {
                return true;
            }
            match self.parent[&x] {
                Some(p) => x = p,
                None => return false,
            }
        }
    }

    pub fn link(&mut self, v: NodeId, u: NodeId) -> Result<()> {
        self.get(u)?;
        if v == NodeId::ROOT || self.get(v)?.is_some() {
            return Err(Error::Tree(format!("node {v:?} is not a root")));
        }
        if self.is_ancestor(v, u) {
            return Err(Error::Tree(format!("linking {v:?} under {u:?} would close a cycle")));
        }
        self.parent.insert(v, Some(u));
        Ok(())
    }

    pub fn cut(&mut self, v: NodeId) -> Result<()> {
        self.get(v)?;
        self.parent.insert(v, None);
        Ok(())
    }

    /// Same contract as [`super::LpfTree::move_interval`].
    pub fn move_interval<K: Fn(NodeId) -> usize>(
        &mut self,
        target: NodeId,
        lo: NodeId,
        hi: NodeId,
        count: usize,
        key: &K,
    ) -> Result<()> {
        self.get(target)?;
        let u = self.get(lo)?;
        if u.is_none() || self.get(hi)? != u {
            return Err(Error::Tree(format!("{lo:?} and {hi:?} are not siblings")));
        }
        if u == Some(target) {
            return Ok(());
        }
        let (klo, khi) = (key(lo), key(hi));
        let moved: Vec<NodeId> = self
            .parent
            .iter()
            .filter(|(&x, &p)| p == u && x != NodeId::ROOT && (klo..=khi).contains(&key(x)))
            .map(|(&x, _)| x)
            .collect();
        if moved.len() != count {
            return Err(Error::Tree(format!("interval {lo:?}..{hi:?} holds children beyond the expected {count}")));
        }
        for x in moved {
            self.parent.insert(x, Some(target));
        }
        Ok(())
    }

    pub fn parent(&self, v: NodeId) -> Result<Option<NodeId>> {
        self.get(v)
    }

    pub fn depth(&self, v: NodeId) -> Result<usize> {
        let mut d = 0;
        let mut x = v;
        while let Some(p) = self.get(x)? {
            d += 1;
            x = p;
        }
        Ok(d)
    }

    pub fn level_ancestor(&self, v: NodeId, k: usize) -> Result<NodeId> {
        let d = self.depth(v)?;
        if k > d {
            return Err(Error::Tree(format!("level {k} exceeds depth {d}")));
        }
        let mut x = v;
        for _ in 0..k {
            x = self.parent[&x].expect("depth bounds the walk");
        }
        Ok(x)
    }

    pub fn children<K: Fn(NodeId) -> usize>(&self, u: NodeId, key: &K) -> Result<Vec<NodeId>> {
        self.get(u)?;
        let mut out: Vec<NodeId> = self.parent.iter().filter(|(_, &p)| p == Some(u)).map(|(&x, _)| x).collect();
        out.sort_by_key(|&x| key(x));
        Ok(out)
    }
}
