//! Primitive-call counts per substitution across string lengths.

use std::collections::BTreeMap;
use std::time::Instant;

use dynlz::dynstr::EditOp;
use dynlz::engine::{window_param, Engine, EngineConfig};
use dynlz::index::StringIndex;
use dynlz::oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub m: usize,
    pub steps: usize,
    pub mean_calls: f64,
    pub p95_calls: u64,
    pub max_calls: u64,
    /// Mean calls per phase.
    pub phases: BTreeMap<String, f64>,
    pub wall_ns: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub seed: u64,
    pub sigma: u32,
    pub rows: Vec<ScalingRow>,
    /// Least-squares slope of ln(mean calls) against ln(n); `None` with fewer than two sizes.
    pub exponent: Option<f64>,
}

pub fn loglog_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = pts.iter().map(|&(x, y)| (x.ln(), y.max(1.0).ln())).unzip();
    let (mx, my) = (lx.iter().sum::<f64>() / k, ly.iter().sum::<f64>() / k);
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    (den > 0.0).then(|| num / den)
}

/// Random substitutions on random strings of each size. Preprocessing uses a
/// suffix-array LPF table so large sizes stay cheap to set up.
pub fn scaling_report<I: StringIndex>(sizes: &[usize], steps: usize, sigma: u32, cfg: EngineConfig) -> dynlz::error::Result<ScalingReport> {
    let sigma = sigma.max(1);
    let mut rows = Vec::new();
    for &n in sizes.iter().filter(|&&n| n > 0) {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.index.seed ^ n as u64);
        let s: Vec<u32> = (0..n).map(|_| rng.gen_range(0..sigma)).collect();
        let mut e: Engine<I> = Engine::preprocess_with_table(&s, cfg, &oracle::lpf_table_sa(&s))?;
        let mut calls = Vec::with_capacity(steps);
        let mut phases: BTreeMap<String, f64> = BTreeMap::new();
        let t = Instant::now();
        for _ in 0..steps {
            let op = EditOp::Substitute { pos: rng.gen_range(1..=n), sym: rng.gen_range(0..sigma) };
            let r = e.update(&op)?;
            calls.push(r.stats.total().primitive_calls());
            for (k, v) in crate::run::phase_breakdown(&r.stats) {
                *phases.entry(k).or_default() += v as f64;
            }
        }
        let wall_ns = t.elapsed().as_nanos() as u64 / steps.max(1) as u64;
        let div = steps.max(1) as f64;
        phases.values_mut().for_each(|v| *v /= div);
        let mut sorted = calls.clone();
        sorted.sort_unstable();
        let p95 = sorted.get((sorted.len() * 95).div_ceil(100).saturating_sub(1)).copied().unwrap_or(0);
        rows.push(ScalingRow {
            n,
            m: window_param(n),
            steps,
            mean_calls: calls.iter().sum::<u64>() as f64 / div,
            p95_calls: p95,
            max_calls: sorted.last().copied().unwrap_or(0),
            phases,
            wall_ns,
        });
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.mean_calls)).collect();
    Ok(ScalingReport { seed: cfg.index.seed, sigma, exponent: loglog_slope(&pts), rows })
}
