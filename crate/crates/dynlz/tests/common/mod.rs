#![allow(dead_code)]

use dynlz::dynstr::{EditOp, Symbol};
use dynlz::engine::{window_param, Engine, EngineConfig};
use dynlz::index::StringIndex;
use dynlz::oracle;
use rand::Rng;

pub fn bytes(s: &str) -> Vec<Symbol> {
    s.bytes().map(u32::from).collect()
}

pub fn random_string<R: Rng>(rng: &mut R, n: usize, sigma: u32) -> Vec<Symbol> {
    (0..n).map(|_| rng.gen_range(0..sigma)).collect()
}

/// A random edit on a string of length `len`. With `edge`, positions cluster
/// within a few windows of either end.
pub fn random_op<R: Rng>(rng: &mut R, len: usize, sigma: u32, edge: bool, max_len: usize) -> EditOp {
    let pick = |rng: &mut R, hi: usize| -> usize {
        if edge && hi > 2 {
            let w = (2 * window_param(hi) + 1).min(hi);
            if rng.gen_bool(0.5) {
                rng.gen_range(1..=w)
            } else {
                rng.gen_range(hi + 1 - w..=hi)
            }
        } else {
            rng.gen_range(1..=hi)
        }
    };
    let sym = rng.gen_range(0..sigma);
    let roll = rng.gen_range(0..3);
    if len == 0 || (roll == 0 && len < max_len) {
        EditOp::Insert { pos: pick(rng, len + 1), sym }
    } else if roll == 1 {
        EditOp::Delete { pos: pick(rng, len) }
    } else {
        EditOp::Substitute { pos: pick(rng, len), sym }
    }
}

/// Compares the engine with the oracle: parent array, phrase count, and
/// every query. Returns a description of the first mismatch.
pub fn compare<I: StringIndex>(e: &mut Engine<I>, full_queries: bool) -> Result<(), String> {
    let s = e.symbols();
    let want = oracle::lpf_tree_brute(&s);
    let got = e.parent_positions().map_err(|x| x.to_string())?;
    if want != got {
        return Err(format!("parents {got:?} != {want:?}"));
    }
    let lz = oracle::lz77_brute(&s);
    let z = e.phrase_count().map_err(|x| x.to_string())?;
    if z != lz.len() {
        return Err(format!("phrase count {z} != {}", lz.len()));
    }
    if s.is_empty() {
        return Ok(());
    }
    let n = s.len();
    let mut cover = vec![0; n + 1];
    for (k, p) in lz.iter().enumerate() {
        cover[p.start..=p.end].fill(k + 1);
    }
    let ks: Vec<usize> = if full_queries { (1..=lz.len()).collect() } else { vec![1, lz.len(), lz.len().div_ceil(2)] };
    for k in ks {
        let p = e.select_phrase(k).map_err(|x| x.to_string())?;
        if !p.same_shape(&lz[k - 1]) {
            return Err(format!("select_phrase({k}) = {p:?}, want {:?}", lz[k - 1]));
        }
    }
    let is: Vec<usize> = if full_queries { (0..=n).collect() } else { vec![0, 1, n, n.div_ceil(2)] };
    for i in is {
        let l = e.lz_length(i).map_err(|x| x.to_string())?;
        if l != cover[i] {
            return Err(format!("lz_length({i}) = {l}, want {}", cover[i]));
        }
        if i > 0 {
            let p = e.containing_phrase(i).map_err(|x| x.to_string())?;
            if !p.same_shape(&lz[cover[i] - 1]) {
                return Err(format!("containing_phrase({i}) = {p:?}"));
            }
        }
    }
    Ok(())
}

pub fn cfg(seed: u64, debug_checks: bool) -> EngineConfig {
    let mut c = EngineConfig { debug_checks, ..EngineConfig::default() };
    c.index.seed = seed;
    c
}
