//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails. `ACCEPTANCE_SEED` overrides the base seed.

mod common;

use std::time::Instant;

use common::*;
use dynlz::dynstr::{EditOp, Symbol};
use dynlz::engine::{critical_sequence, Engine, EngineConfig, Side};
use dynlz::gadgets::{dot, solve_ov, OvInstance};
use dynlz::index::{FastIndex, IndexConfig, NaiveIndex, SnapshotIndex, Span, StringIndex};
use dynlz::oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn pass(detail: String) -> Self {
        Outcome { ok: true, detail }
    }

    fn fail(detail: String) -> Self {
        Outcome { ok: false, detail }
    }
}

/// State shared by criteria 1 to 3, which all run over the same scripts.
#[derive(Default)]
struct ScriptTally {
    scripts: usize,
    states: usize,
    mismatches: Vec<String>,
    depth_mismatches: usize,
    monotone_violations: usize,
}

fn monotone(reach: impl Iterator<Item = usize>) -> bool {
    let v: Vec<usize> = reach.collect();
    v.windows(2).all(|w| w[0] <= w[1])
}

fn check_state<I: StringIndex>(e: &mut Engine<I>, tally: &mut ScriptTally, label: &str) {
    tally.states += 1;
    let s = e.symbols();
    let t = oracle::lpf_table_brute(&s);
    let parents = e.parent_positions().unwrap_or_default();
    if !monotone((1..=s.len()).map(|i| i + t.at(i))) || !monotone(parents.iter().copied()) {
        tally.monotone_violations += 1;
    }
    // The empty string has no node 1; its factorization is empty.
    let depth = if s.is_empty() { e.phrase_count() } else { e.depth(1) };
    if depth.ok() != Some(oracle::lz77_brute(&s).len()) {
        tally.depth_mismatches += 1;
    }
    if let Err(m) = compare(e, true) {
        if tally.mismatches.len() < 5 {
            tally.mismatches.push(format!("{label}: {m}"));
        } else {
            tally.mismatches.push(String::new());
        }
    }
}

fn run_script<I: StringIndex>(rng: &mut ChaCha8Rng, seed: u64, cap: usize, edge: bool, debug: bool, tally: &mut ScriptTally) {
    let sigma = rng.gen_range(1..=4);
    let n0 = if cap > 100 { rng.gen_range(cap / 3..=cap) } else { rng.gen_range(0..=cap) };
    let init = random_string(rng, n0, sigma);
    let mut e: Engine<I> = match Engine::preprocess(&init, cfg(seed, debug)) {
        Ok(e) => e,
        Err(x) => {
            tally.mismatches.push(format!("seed {seed}: preprocess: {x}"));
            return;
        }
    };
    tally.scripts += 1;
    check_state(&mut e, tally, &format!("seed {seed} initial"));
    for step in 0..12 {
        let op = random_op(rng, e.len(), sigma, edge, cap);
        if let Err(x) = e.update(&op) {
            tally.mismatches.push(format!("seed {seed} step {step} {op:?}: {x}"));
            return;
        }
        check_state(&mut e, tally, &format!("seed {seed} step {step} {op:?}"));
    }
}

fn scripts(base: u64) -> ScriptTally {
    let mut tally = ScriptTally::default();
    for k in 0..20_000u64 {
        let seed = base.wrapping_add(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cap = if k % 10 == 0 { 300 } else { 60 };
        let edge = k % 2 == 0;
        let debug = k % 8 == 0 && cap < 100;
        match k % 20 {
            3 if cap < 100 => run_script::<FastIndex>(&mut rng, seed, cap, edge, debug, &mut tally),
            1 | 7 | 13 => run_script::<NaiveIndex>(&mut rng, seed, cap, edge, debug, &mut tally),
            _ => run_script::<SnapshotIndex>(&mut rng, seed, cap, edge, debug, &mut tally),
        }
    }
    tally
}

fn criterion_1(t: &ScriptTally) -> Outcome {
    let d = format!("{} scripts, {} states, {} mismatches", t.scripts, t.states, t.mismatches.len());
    if t.mismatches.is_empty() && t.scripts >= 20_000 {
        Outcome::pass(d)
    } else {
        let first: Vec<&String> = t.mismatches.iter().filter(|m| !m.is_empty()).collect();
        Outcome::fail(format!("{d}; first: {first:?}"))
    }
}

fn criterion_2(t: &ScriptTally) -> Outcome {
    let d = format!("{} states, {} depth mismatches", t.states, t.depth_mismatches);
    if t.depth_mismatches == 0 { Outcome::pass(d) } else { Outcome::fail(d) }
}

fn criterion_3(t: &ScriptTally) -> Outcome {
    let d = format!("{} states, {} violations", t.states, t.monotone_violations);
    if t.monotone_violations == 0 { Outcome::pass(d) } else { Outcome::fail(d) }
}

fn random_span<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> Span {
    let l = rng.gen_range(1..=n.min(max_len));
    Span::with_len(rng.gen_range(1..=n + 1 - l), l)
}

fn criterion_4(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut queries = 0usize;
    let mut mismatches = Vec::new();
    let mut round = 0u64;
    while queries < 100_000 {
        round += 1;
        let hash_seed = rng.gen::<u64>();
        let lmax = rng.gen_range(2..=5);
        let icfg = IndexConfig { seed: hash_seed, lmax: Some(lmax), debug_invariants: false };
        let sigma = rng.gen_range(1..=4);
        let n0 = rng.gen_range(1..=500);
        let init = random_string(&mut rng, n0, sigma);
        let mut nv = NaiveIndex::build(&init, &icfg).unwrap();
        let mut fa = FastIndex::build(&init, &icfg).unwrap();
        for _ in 0..20 {
            let edge = rng.gen_bool(0.2);
            let op = random_op(&mut rng, nv.len(), sigma, edge, 500);
            let (a, b) = (nv.apply(&op).map(|_| ()), fa.apply(&op).map(|_| ()));
            if a.is_err() != b.is_err() {
                mismatches.push(format!("round {round} hash seed {hash_seed}: apply {op:?}"));
            }
            let n = nv.len();
            if n == 0 {
                continue;
            }
            for _ in 0..25 {
                queries += 1;
                let kind = rng.gen_range(0..8);
                let same = match kind {
                    0 | 1 => {
                        let (i, j) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
                        if kind == 0 {
                            nv.lcp(i, j).ok() == fa.lcp(i, j).ok()
                        } else {
                            nv.lcs(i, j).ok() == fa.lcs(i, j).ok()
                        }
                    }
                    2 => {
                        let p = random_span(&mut rng, n, 40);
                        let tl = rng.gen_range(p.len()..=(2 * p.len()).min(n));
                        let t = Span::with_len(rng.gen_range(1..=n + 1 - tl), tl);
                        let flat = |v: Vec<dynlz::index::Progression>| v.iter().flat_map(|g| g.iter()).collect::<Vec<_>>();
                        nv.ipm(p, t).ok().map(flat) == fa.ipm(p, t).ok().map(flat)
                    }
                    3 => {
                        let p = random_span(&mut rng, n, 12);
                        let t = random_span(&mut rng, n, n);
                        nv.clusters(p, t).ok() == fa.clusters(p, t).ok()
                    }
                    4 => {
                        let p = random_span(&mut rng, n, 12);
                        let t = random_span(&mut rng, n, n);
                        nv.exists(p, t).ok() == fa.exists(p, t).ok()
                    }
                    5 | 6 => {
                        let p = random_span(&mut rng, n, 12);
                        let t = random_span(&mut rng, n, n);
                        if kind == 5 {
                            nv.first_occ(p, t).ok() == fa.first_occ(p, t).ok()
                        } else {
                            nv.last_occ(p, t).ok() == fa.last_occ(p, t).ok()
                        }
                    }
                    _ => {
                        let p = random_span(&mut rng, n, n);
                        nv.period(p).ok() == fa.period(p).ok()
                    }
                };
                if !same {
                    mismatches.push(format!("round {round} hash seed {hash_seed}: query kind {kind}"));
                }
            }
        }
    }
    let d = format!("seed {seed}, {queries} queries over {round} strings, {} mismatches", mismatches.len());
    if mismatches.is_empty() { Outcome::pass(d) } else { Outcome::fail(format!("{d}; first: {:?}", &mismatches[..mismatches.len().min(3)])) }
}

fn criterion_5(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut instances = 0;
    let mut bad = Vec::new();
    for n in [4usize, 9, 16] {
        for d in 2..=6usize {
            for k in 0..50 {
                let density = rng.gen_range(0.2..0.8);
                let mut vecs = |c: usize| -> Vec<Vec<bool>> { (0..c).map(|_| (0..d).map(|_| rng.gen_bool(density)).collect()).collect() };
                let inst = OvInstance::new(vecs(n), vecs(n)).unwrap();
                instances += 1;
                let rep = match solve_ov(&inst, |s| Engine::<SnapshotIndex>::preprocess(s, cfg(seed ^ k, false))) {
                    Ok(r) => r,
                    Err(x) => {
                        bad.push(format!("n={n} d={d} #{k}: {x}"));
                        continue;
                    }
                };
                let mut ok = rep.has_orthogonal == inst.brute_force();
                for (u, r) in inst.b.iter().zip(&rep.per_b) {
                    ok &= inst.a.iter().zip(&r.per_a).all(|(v, &c)| c == d + 1 + dot(u, v) as usize);
                    let none = inst.a.iter().all(|v| dot(u, v));
                    ok &= (r.difference == (d + 2) * n) == none && r.orthogonal != none;
                }
                if !ok {
                    bad.push(format!("n={n} d={d} #{k}"));
                }
            }
        }
    }
    let d = format!("seed {seed}, {instances} instances, {} wrong", bad.len());
    if bad.is_empty() { Outcome::pass(d) } else { Outcome::fail(format!("{d}; first: {:?}", &bad[..bad.len().min(3)])) }
}

fn criterion_6(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for k in 0..1000 {
        let n = rng.gen_range(1..=500);
        let s = if k % 3 == 0 {
            let p = rng.gen_range(1..=6);
            let unit = random_string(&mut rng, p, 2);
            let mut s: Vec<Symbol> = (0..n).map(|x| unit[x % p]).collect();
            for _ in 0..rng.gen_range(0..4) {
                let at = rng.gen_range(0..n);
                s[at] = rng.gen_range(0..3);
            }
            s
        } else {
            let sigma = rng.gen_range(1..=4);
            random_string(&mut rng, n, sigma)
        };
        let idx = SnapshotIndex::build(&s, &IndexConfig::default()).unwrap();
        let t = oracle::lpf_table_brute(&s);
        let i = rng.gen_range(1..=n);
        let reach = rng.gen_range(0..40);
        let j = rng.gen_range(i..=(i + reach).min(n));
        let side = if k % 2 == 0 { Side::Old } else { Side::New };
        match critical_sequence(&idx, i, j, side) {
            Ok(c) if c.critical == oracle::critical_brute(&t, i, j) => {}
            other => bad.push(format!("#{k} n={n} i={i} j={j}: {:?}", other.map(|c| c.critical))),
        }
    }
    let d = format!("seed {seed}, 1000 instances, {} wrong", bad.len());
    if bad.is_empty() { Outcome::pass(d) } else { Outcome::fail(format!("{d}; first: {:?}", &bad[..bad.len().min(3)])) }
}

/// Least-squares slope of `ln y` against `ln x`.
fn loglog_slope(pts: &[(f64, f64)]) -> f64 {
    let k = pts.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = pts.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let (mx, my) = (lx.iter().sum::<f64>() / k, ly.iter().sum::<f64>() / k);
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

fn criterion_7(seed: u64) -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for sigma in [2u32, 4] {
        let (mut pts, mut weighted) = (Vec::new(), Vec::new());
        for e in 10..=16u32 {
            let n = 1usize << e;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (u64::from(sigma) << 32) ^ u64::from(e));
            let s = random_string(&mut rng, n, sigma);
            let table = oracle::lpf_table_sa(&s);
            let cfg = EngineConfig { index: IndexConfig { seed, ..IndexConfig::default() }, debug_checks: false };
            let mut eng: Engine<SnapshotIndex> = match Engine::preprocess_with_table(&s, cfg, &table) {
                Ok(x) => x,
                Err(x) => return Outcome::fail(format!("n={n}: {x}")),
            };
            let (mut total, mut windows) = (0u64, 0u64);
            for _ in 0..200 {
                let op = EditOp::Substitute { pos: rng.gen_range(1..=n), sym: rng.gen_range(0..sigma) };
                match eng.update(&op) {
                    Ok(r) => {
                        total += r.stats.total().primitive_calls();
                        windows += r.stats.total().weighted_calls();
                    }
                    Err(x) => return Outcome::fail(format!("n={n}: {x}")),
                }
            }
            pts.push((n as f64, total as f64 / 200.0));
            weighted.push((n as f64, windows as f64 / 200.0));
        }
        let slope = loglog_slope(&pts);
        let (n_top, calls_top) = *pts.last().unwrap();
        ok &= slope <= 0.75 && calls_top * 20.0 <= n_top;
        let means: Vec<String> = pts.iter().map(|(n, c)| format!("{n}:{c:.0}")).collect();
        let (_, w_top) = *weighted.last().unwrap();
        lines.push(format!(
            "sigma {sigma}: exponent {slope:.3}, mean calls {}; with clusters charged per window (not gated): exponent {:.3}, {w_top:.0} at n={n_top}",
            means.join(" "),
            loglog_slope(&weighted)
        ));
    }
    let d = format!("seed {seed}; {}", lines.join("; "));
    if ok { Outcome::pass(d) } else { Outcome::fail(d) }
}

fn criterion_8(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for k in 0..100 {
        let n = rng.gen_range(2..=2000);
        let s = match k % 3 {
            0 => random_string(&mut rng, n, 2),
            1 => {
                let p = rng.gen_range(1..=8);
                let unit = random_string(&mut rng, p, 2);
                let mut s: Vec<Symbol> = (0..n).map(|x| unit[x % p]).collect();
                for _ in 0..rng.gen_range(0..=n / 50) {
                    let at = rng.gen_range(0..n);
                    s[at] = 2;
                }
                s
            }
            _ => {
                // Fibonacci-like word: highly repetitive without a short period.
                let (mut a, mut b) = (vec![0u32], vec![0u32, 1]);
                while b.len() < n {
                    let c = [b.clone(), a].concat();
                    a = b;
                    b = c;
                }
                b.truncate(n);
                b
            }
        };
        let size = rng.gen_range(1..=n.min(500));
        let set: Vec<usize> = if k % 2 == 0 {
            (0..size).map(|_| rng.gen_range(1..=n)).collect()
        } else {
            let pat_len = rng.gen_range(1..=4);
            let at = rng.gen_range(1..=n + 1 - pat_len);
            let mut occ = oracle::occurrences_brute(&s, &s[at - 1..at - 1 + pat_len]);
            occ.truncate(size);
            occ
        };
        let mut uniq = set.clone();
        uniq.sort_unstable();
        uniq.dedup();
        let sum = oracle::nd_extension_sum(&s, &uniq);
        let lg = (usize::BITS - (n - 1).leading_zeros()) as usize + 1;
        let c = sum as f64 / (uniq.len() * lg * lg) as f64;
        worst = worst.max(c);
        if c > 16.0 || sum > uniq.len() * uniq.len() {
            bad.push(format!("#{k} n={n} |I|={} sum={sum}", uniq.len()));
        }
    }
    let d = format!("seed {seed}, 100 instances, largest observed constant {worst:.3} (bound 16), {} violations", bad.len());
    if bad.is_empty() { Outcome::pass(d) } else { Outcome::fail(format!("{d}; {:?}", &bad[..bad.len().min(3)])) }
}

fn criterion_9() -> Outcome {
    let mut strings = 0usize;
    let mut bad = Vec::new();
    for n in 0..=12u32 {
        for code in 0..1u32 << n {
            let s: Vec<Symbol> = (0..n).map(|k| code >> k & 1).collect();
            strings += 1;
            let (greedy, best) = (oracle::lz77_brute(&s).len(), oracle::lz77_like_min_enumerated(&s));
            if greedy != best {
                bad.push(format!("{s:?}: greedy {greedy}, best {best}"));
            }
        }
    }
    let d = format!("{strings} binary strings with n <= 12, {} non-optimal", bad.len());
    if bad.is_empty() { Outcome::pass(d) } else { Outcome::fail(format!("{d}; {:?}", &bad[..bad.len().min(3)])) }
}

fn main() {
    let base: u64 = std::env::var("ACCEPTANCE_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0xacce_97ed);
    println!("acceptance base seed {base}");
    let mut failed = 0;
    let mut report = |k: usize, title: &str, started: Instant, o: Outcome| {
        let tag = if o.ok { "PASS" } else { "FAIL" };
        failed += usize::from(!o.ok);
        println!("{tag} criterion {k} ({title}): {} [{:.1}s]", o.detail, started.elapsed().as_secs_f64());
    };

    let t = Instant::now();
    let tally = scripts(base);
    report(1, "oracle equivalence", t, criterion_1(&tally));
    report(2, "root depth equals phrase count", t, criterion_2(&tally));
    report(3, "monotone reach", t, criterion_3(&tally));
    let t = Instant::now();
    report(4, "backend equivalence", t, criterion_4(base ^ 4));
    let t = Instant::now();
    report(5, "gadget phrase counts", t, criterion_5(base ^ 5));
    let t = Instant::now();
    report(6, "critical sequences", t, criterion_6(base ^ 6));
    let t = Instant::now();
    report(7, "query-count budget", t, criterion_7(base ^ 7));
    let t = Instant::now();
    report(8, "non-dominated extensions", t, criterion_8(base ^ 8));
    let t = Instant::now();
    report(9, "LZ77-like optimality", t, criterion_9());
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
