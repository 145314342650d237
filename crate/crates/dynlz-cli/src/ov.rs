//! Orthogonal Vectors through phrase counts.

use dynlz::engine::Engine;
use dynlz::gadgets::{solve_ov, OvInstance, OvReport};
use dynlz::index::StringIndex;
use serde::{Deserialize, Serialize};

use crate::run::RunConfig;

/// One vector per line, as `0101` or `0 1 0 1`. Blank lines and `#` comments are skipped.
pub fn parse_vectors(text: &str) -> Result<Vec<Vec<bool>>, String> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let v: Option<Vec<bool>> = body
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect();
        out.push(v.ok_or_else(|| format!("line {}: expected 0/1 digits", k + 1))?);
    }
    Ok(out)
}

pub fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OvRow {
    pub u: String,
    /// Phrases per gadget of `A`, in order.
    pub counts: Vec<usize>,
    pub difference: usize,
    pub orthogonal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OvOutput {
    pub n: usize,
    pub d: usize,
    pub has_orthogonal: bool,
    /// Present with oracle checking.
    pub brute_force: Option<bool>,
    pub len_s: usize,
    pub len_s_prime: usize,
    pub updates: usize,
    pub rows: Vec<OvRow>,
}

pub fn solve<I: StringIndex>(inst: &OvInstance, cfg: &RunConfig) -> dynlz::error::Result<OvOutput> {
    let ecfg = cfg.engine_config();
    let OvReport { has_orthogonal, per_b, len_s, len_s_prime, updates } = solve_ov(inst, |s| Engine::<I>::preprocess(s, ecfg))?;
    let rows = inst
        .b
        .iter()
        .zip(per_b)
        .map(|(u, r)| OvRow { u: bits(u), counts: r.per_a, difference: r.difference, orthogonal: r.orthogonal })
        .collect();
    Ok(OvOutput {
        n: inst.n(),
        d: inst.d(),
        has_orthogonal,
        brute_force: cfg.check_oracle.then(|| inst.brute_force()),
        len_s,
        len_s_prime,
        updates,
        rows,
    })
}
