//! Strings that encode an Orthogonal Vectors instance so that LZ77 phrase
//! counts reveal orthogonality, plus a driver that answers the instance with
//! two dynamic engines.
//!
//! Letters `0_j`, `1_j`, `2_j` are encoded as `family * (d + 2) + j`; every
//! `#` is a distinct code at or above `3 * (d + 2)`. Separator codes follow a
//! fixed layout (dictionary, then the vector of `B`, then the matrix), so two
//! strings built for the same `(n, d)` agree on their shared prefix.

use serde::{Deserialize, Serialize};

use crate::dynstr::{EditOp, Symbol};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::index::StringIndex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OvInstance {
    pub a: Vec<Vec<bool>>,
    pub b: Vec<Vec<bool>>,
}

/// Boolean dot product: whether the vectors share a 1.
pub fn dot(u: &[bool], v: &[bool]) -> bool {
    u.iter().zip(v).any(|(&x, &y)| x && y)
}

impl OvInstance {
    /// `|A|` must be a perfect square and all vectors must share one dimension.
    pub fn new(a: Vec<Vec<bool>>, b: Vec<Vec<bool>>) -> Result<Self> {
        let n = a.len();
        let r = isqrt(n);
        if n == 0 || r * r != n {
            return Err(Error::Gadget(format!("|A| = {n} is not a positive perfect square")));
        }
        let d = a[0].len();
        if d == 0 || a.iter().chain(&b).any(|v| v.len() != d) {
            return Err(Error::Gadget("vectors must share a positive dimension".into()));
        }
        Ok(OvInstance { a, b })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn d(&self) -> usize {
        self.a[0].len()
    }

    /// Quadratic reference answer.
    pub fn brute_force(&self) -> bool {
        self.b.iter().any(|u| self.a.iter().any(|v| !dot(u, v)))
    }
}

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Decoded meaning of one symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Letter {
    /// `family_j` with family 0, 1 or 2.
    Digit { family: u8, j: usize },
    /// The `k`-th unique separator.
    Hash(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetString {
    pub d: usize,
    pub symbols: Vec<Symbol>,
}

impl GadgetString {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn decode(&self, s: Symbol) -> Letter {
        decode(self.d, s)
    }

    /// Every distinct symbol with its meaning, in order of first appearance.
    pub fn legend(&self) -> Vec<(Symbol, Letter)> {
        let mut seen = std::collections::HashSet::new();
        self.symbols.iter().filter(|s| seen.insert(**s)).map(|&s| (s, self.decode(s))).collect()
    }
}

fn decode(d: usize, s: Symbol) -> Letter {
    let w = (d + 2) as Symbol;
    if s >= 3 * w {
        Letter::Hash((s - 3 * w) as usize)
    } else {
        Letter::Digit { family: (s / w) as u8, j: (s % w) as usize }
    }
}

/// Builder for one `(n, d)` shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gadgets {
    n: usize,
    d: usize,
    r: usize,
}

impl Gadgets {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        let r = isqrt(n);
        if n == 0 || r * r != n {
            return Err(Error::Gadget(format!("n = {n} is not a positive perfect square")));
        }
        if d == 0 {
            return Err(Error::Gadget("d must be positive".into()));
        }
        Ok(Gadgets { n, d, r })
    }

    pub fn for_instance(inst: &OvInstance) -> Result<Self> {
        Self::new(inst.n(), inst.d())
    }

    pub fn sqrt_n(&self) -> usize {
        self.r
    }

    /// `i = i1 * √n + i2` with `i2 < √n`.
    pub fn split(&self, i: usize) -> (usize, usize) {
        (i / self.r, i % self.r)
    }

    fn digit(&self, family: u8, j: usize) -> Symbol {
        (family as usize * (self.d + 2) + j) as Symbol
    }

    fn hash(&self, k: usize) -> Symbol {
        (3 * (self.d + 2) + k) as Symbol
    }

    fn run(&self, out: &mut Vec<Symbol>, family: u8, j: usize, len: usize) {
        out.extend(std::iter::repeat_n(self.digit(family, j), len));
    }

    fn wrap(&self, symbols: Vec<Symbol>) -> GadgetString {
        GadgetString { d: self.d, symbols }
    }

    // Separator layout.
    fn dict_hashes(&self) -> usize {
        self.d + self.d * (self.r + 1) * 4
    }

    fn bvec_hash(&self, j: usize, inner: bool) -> Symbol {
        self.hash(self.dict_hashes() + 2 * (j - 1) + !inner as usize)
    }

    fn matrix_hash(&self, i: usize) -> Symbol {
        self.hash(self.dict_hashes() + 2 * self.d + i - 1)
    }

    /// `bit_j^{3√n+i1} 2_j^{i2}`.
    pub fn a_coordinate(&self, i: usize, j: usize, bit: bool) -> GadgetString {
        let mut out = Vec::new();
        self.push_a_coordinate(&mut out, i, j, bit);
        self.wrap(out)
    }

    fn push_a_coordinate(&self, out: &mut Vec<Symbol>, i: usize, j: usize, bit: bool) {
        let (i1, i2) = self.split(i);
        self.run(out, bit as u8, j, 3 * self.r + i1);
        self.run(out, 2, j, i2);
    }

    /// Vector `i` (1-based) of `A`, without its separator.
    pub fn a_vector(&self, i: usize, v: &[bool]) -> GadgetString {
        let mut out = Vec::new();
        for (j, &bit) in v.iter().enumerate() {
            self.push_a_coordinate(&mut out, i, j + 1, bit);
        }
        self.wrap(out)
    }

    /// `AVector(1)# AVector(2)# ...`.
    pub fn matrix(&self, a: &[Vec<bool>]) -> GadgetString {
        let mut out = Vec::new();
        for (k, v) in a.iter().enumerate() {
            out.extend(self.a_vector(k + 1, v).symbols);
            out.push(self.matrix_hash(k + 1));
        }
        self.wrap(out)
    }

    /// `0_j^{4√n} 2_j^{√n}`.
    pub fn skip0(&self, j: usize) -> GadgetString {
        let mut out = Vec::new();
        self.run(&mut out, 0, j, 4 * self.r);
        self.run(&mut out, 2, j, self.r);
        self.wrap(out)
    }

    /// `x_j^{2√n} 2_j^{i2} y_{j+1}^{2√n}`.
    pub fn skip2_halves(&self, j: usize, i2: usize, x: bool, y: bool) -> GadgetString {
        let mut out = Vec::new();
        self.run(&mut out, x as u8, j, 2 * self.r);
        self.run(&mut out, 2, j, i2);
        self.run(&mut out, y as u8, j + 1, 2 * self.r);
        self.wrap(out)
    }

    pub fn dictionary(&self) -> GadgetString {
        let mut out = Vec::new();
        let mut k = 0;
        for j in 1..=self.d {
            out.extend(self.skip0(j).symbols);
            out.push(self.hash(k));
            k += 1;
        }
        for j in 1..=self.d {
            for i2 in 0..=self.r {
                for (x, y) in [(false, false), (false, true), (true, false), (true, true)] {
                    out.extend(self.skip2_halves(j, i2, x, y).symbols);
                    out.push(self.hash(k));
                    k += 1;
                }
            }
        }
        self.wrap(out)
    }

    /// Offset of the switchable symbol of coordinate `j` inside the vector of `B`.
    fn b_switch_offset(&self, j: usize) -> usize {
        (j - 1) * (5 * self.r + 2) + 2 * self.r
    }

    /// `1_j^{4√n+1} 2_j^{√n}` for a 0, `1_j^{2√n} # 1_j^{2√n} 2_j^{√n}` for a 1.
    pub fn b_coordinate(&self, j: usize, bit: bool) -> GadgetString {
        let mut out = Vec::new();
        self.run(&mut out, 1, j, 2 * self.r);
        out.push(self.b_switch_symbol(j, bit));
        self.run(&mut out, 1, j, 2 * self.r);
        self.run(&mut out, 2, j, self.r);
        self.wrap(out)
    }

    fn b_switch_symbol(&self, j: usize, bit: bool) -> Symbol {
        if bit {
            self.bvec_hash(j, true)
        } else {
            self.digit(1, j)
        }
    }

    pub fn b_vector(&self, u: &[bool]) -> GadgetString {
        let mut out = Vec::new();
        for (k, &bit) in u.iter().enumerate() {
            out.extend(self.b_coordinate(k + 1, bit).symbols);
            out.push(self.bvec_hash(k + 1, false));
        }
        self.wrap(out)
    }

    /// `Dictionary · BVector(u)`.
    pub fn build_s_prime(&self, u: &[bool]) -> GadgetString {
        let mut out = self.dictionary().symbols;
        out.extend(self.b_vector(u).symbols);
        self.wrap(out)
    }

    /// `Dictionary · BVector(u) · Matrix(A)`.
    pub fn build_s(&self, u: &[bool], a: &[Vec<bool>]) -> GadgetString {
        let mut out = self.build_s_prime(u).symbols;
        out.extend(self.matrix(a).symbols);
        self.wrap(out)
    }

    /// Substitutions that turn `BVector(from)` into `BVector(to)` inside a
    /// string that starts with the dictionary.
    pub fn switch_ops(&self, from: &[bool], to: &[bool]) -> Vec<EditOp> {
        let base = self.dictionary().len();
        (1..=self.d)
            .filter(|&j| from[j - 1] != to[j - 1])
            .map(|j| EditOp::Substitute { pos: base + self.b_switch_offset(j) + 1, sym: self.b_switch_symbol(j, to[j - 1]) })
            .collect()
    }

    /// Positions (1-based) of the separator closing each vector of `A` in `S(u)`.
    pub fn matrix_ends(&self, a: &[Vec<bool>]) -> Vec<usize> {
        let mut at = self.build_s_prime(&vec![true; self.d]).len();
        let mut out = Vec::with_capacity(a.len());
        for (k, v) in a.iter().enumerate() {
            at += self.a_vector(k + 1, v).len() + 1;
            out.push(at);
        }
        out
    }
}

/// Outcome for one vector of `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorReport {
    /// `|LZ77(S(u))| - |LZ77(S'(u))|`.
    pub difference: usize,
    /// Phrases covering `AVector(i)#`, for each vector of `A`.
    pub per_a: Vec<usize>,
    /// The difference is below `(d + 2) n`.
    pub orthogonal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OvReport {
    pub has_orthogonal: bool,
    pub per_b: Vec<VectorReport>,
    pub len_s: usize,
    pub len_s_prime: usize,
    pub updates: usize,
}

/// Decides the instance with two engines built by `factory`, sweeping every
/// `u ∈ B` with at most `d` substitutions per engine and undoing them after.
pub fn solve_ov<I, F>(inst: &OvInstance, mut factory: F) -> Result<OvReport>
where
    I: StringIndex,
    F: FnMut(&[Symbol]) -> Result<Engine<I>>,
{
    let g = Gadgets::for_instance(inst)?;
    let (n, d) = (inst.n(), inst.d());
    let ones = vec![true; d];
    let s = g.build_s(&ones, &inst.a);
    let sp = g.build_s_prime(&ones);
    let mut es = factory(&s.symbols)?;
    let mut esp = factory(&sp.symbols)?;
    let ends = g.matrix_ends(&inst.a);
    let start = sp.len();
    let mut per_b = Vec::with_capacity(inst.b.len());
    let mut updates = 0;
    for u in &inst.b {
        let ops = g.switch_ops(&ones, u);
        for op in &ops {
            es.update(op)?;
            esp.update(op)?;
            updates += 2;
        }
        let difference = es.phrase_count()? - esp.phrase_count()?;
        let mut per_a = Vec::with_capacity(n);
        let mut prev = es.lz_length(start)?;
        for &e in &ends {
            let cur = es.lz_length(e)?;
            per_a.push(cur - prev);
            prev = cur;
        }
        per_b.push(VectorReport { difference, per_a, orthogonal: difference < (d + 2) * n });
        for op in g.switch_ops(u, &ones) {
            es.update(&op)?;
            esp.update(&op)?;
            updates += 2;
        }
    }
    Ok(OvReport {
        has_orthogonal: per_b.iter().any(|r| r.orthogonal),
        per_b,
        len_s: s.len(),
        len_s_prime: sp.len(),
        updates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let g = Gadgets::new(4, 1).unwrap();
        let w = 3; // d + 2
        assert_eq!(g.a_coordinate(1, 1, false).symbols, [vec![1; 6], vec![2 * w + 1]].concat());
        assert_eq!(g.a_coordinate(2, 1, false).symbols, vec![1; 7]);
        assert_eq!(g.a_coordinate(1, 1, true).symbols[0], w + 1);
        let dict = g.dictionary();
        let hashes = dict.symbols.iter().filter(|&&s| s >= 3 * w).count();
        assert_eq!(hashes, 1 + 12);
        assert_eq!(g.b_coordinate(1, true).len(), g.b_coordinate(1, false).len());
        assert_eq!(g.b_coordinate(1, false).len(), 5 * 2 + 1);
        assert!(Gadgets::new(5, 2).is_err());
    }

    #[test]
    fn hashes_are_unique() {
        let g = Gadgets::new(9, 3).unwrap();
        let a = vec![vec![true, false, true]; 9];
        let s = g.build_s(&[true, true, true], &a);
        let mut hs: Vec<Symbol> = s.symbols.iter().copied().filter(|&x| matches!(s.decode(x), Letter::Hash(_))).collect();
        let total = hs.len();
        hs.sort_unstable();
        hs.dedup();
        assert_eq!(hs.len(), total);
    }

    #[test]
    fn one_substitution_per_coordinate() {
        let g = Gadgets::new(4, 3).unwrap();
        let ops = g.switch_ops(&[true, true, true], &[true, false, true]);
        assert_eq!(ops.len(), 1);
        let mut s = g.build_s_prime(&[true, true, true]).symbols;
        ops[0].apply_to_vec(&mut s);
        assert_eq!(s, g.build_s_prime(&[true, false, true]).symbols);
    }
}
