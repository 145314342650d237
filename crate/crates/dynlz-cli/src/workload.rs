//! Deterministic edit-script generators.

use clap::ValueEnum;
use dynlz::dynstr::{EditOp, Symbol};
use dynlz::engine::window_param;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::script::{Command, EditScript, Line, Query};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WorkloadKind {
    /// Uniform positions and symbols.
    Random,
    /// A short period repeated, with edits that mostly keep it.
    Periodic,
    /// Edits within one window of either end.
    AdversarialEdge,
}

#[derive(Clone, Copy, Debug)]
pub struct WorkloadParams {
    pub kind: WorkloadKind,
    pub n: usize,
    pub steps: usize,
    pub seed: u64,
    pub sigma: u32,
    /// Probability of a random query after each edit.
    pub query_rate: f64,
}

/// Letters for small alphabets keep generated scripts readable.
fn sym(k: u32, sigma: u32) -> Symbol {
    if sigma <= 26 {
        u32::from(b'a') + k
    } else {
        k
    }
}

pub fn generate(params: &WorkloadParams) -> EditScript {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let sigma = params.sigma.max(1);
    let period = rng.gen_range(1..=8usize.min(params.n.max(1)));
    let unit: Vec<Symbol> = (0..period).map(|_| sym(rng.gen_range(0..sigma), sigma)).collect();
    let initial: Vec<Symbol> = match params.kind {
        WorkloadKind::Periodic => (0..params.n).map(|k| unit[k % period]).collect(),
        _ => (0..params.n).map(|_| sym(rng.gen_range(0..sigma), sigma)).collect(),
    };
    let mut len = initial.len();
    let mut commands = Vec::new();
    for _ in 0..params.steps {
        let pick = |rng: &mut ChaCha8Rng, hi: usize| -> usize {
            match params.kind {
                WorkloadKind::AdversarialEdge if hi > 1 => {
                    let m = window_param(hi).min(hi);
                    if rng.gen_bool(0.5) {
                        rng.gen_range(1..=m)
                    } else {
                        rng.gen_range(hi + 1 - m..=hi)
                    }
                }
                _ => rng.gen_range(1..=hi),
            }
        };
        let symbol = |rng: &mut ChaCha8Rng, pos: usize| {
            if params.kind == WorkloadKind::Periodic && rng.gen_bool(0.7) {
                unit[(pos - 1) % period]
            } else {
                sym(rng.gen_range(0..sigma), sigma)
            }
        };
        // Keep the length near n: grow when short, shrink when long.
        let roll: f64 = rng.gen();
        let grow = if len < params.n { 0.5 } else { 0.25 };
        let op = if len == 0 || roll < grow {
            let pos = pick(&mut rng, len + 1);
            len += 1;
            EditOp::Insert { pos, sym: symbol(&mut rng, pos) }
        } else if roll < 0.5 {
            len -= 1;
            EditOp::Delete { pos: pick(&mut rng, len + 1) }
        } else {
            let pos = pick(&mut rng, len);
            EditOp::Substitute { pos, sym: symbol(&mut rng, pos) }
        };
        commands.push(Command::Edit(op));
        if len > 0 && rng.gen_bool(params.query_rate) {
            let q = match rng.gen_range(0..3) {
                0 => Query::LzLength { i: Some(rng.gen_range(0..=len)) },
                1 => Query::Select { k: 1 },
                _ => Query::Contain { i: rng.gen_range(1..=len) },
            };
            commands.push(Command::Query(q));
        }
    }
    commands.push(Command::Query(Query::LzLength { i: None }));
    // Line numbers as if the script were printed: `init` is line 1.
    let commands = commands.into_iter().enumerate().map(|(k, command)| Line { line: k + 2, command }).collect();
    EditScript { initial, commands }
}
