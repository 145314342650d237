//! Executes an edit script against an engine and records per-step counts.

use std::collections::BTreeMap;
use std::time::Instant;

use dynlz::dynstr::{EditOp, Symbol};
use dynlz::engine::{Engine, EngineConfig, Phrase};
use dynlz::error::Error;
use dynlz::index::{Counts, IndexConfig, IndexStats, Phase, StringIndex};
use dynlz::oracle;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::script::{format_init, Command, EditScript, Query};
use crate::Backend;

/// How a run was configured, echoed into every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub backend: Backend,
    pub seed: u64,
    pub lmax: Option<u32>,
    pub check_oracle: bool,
    /// Cleanliness checks inside every transition (slow).
    pub debug_checks: bool,
}

impl RunConfig {
    pub fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            index: IndexConfig { seed: self.seed, lmax: self.lmax, debug_invariants: self.debug_checks },
            debug_checks: self.debug_checks,
        }
    }
}

/// Primitive-call counts of one step, by primitive.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallCounts {
    pub calls_lcp: u64,
    pub calls_lcs: u64,
    pub calls_ipm: u64,
    pub calls_exists: u64,
    pub calls_firstocc: u64,
    pub calls_lastocc: u64,
    pub calls_clusters: u64,
    pub calls_period: u64,
    pub calls_total: u64,
}

impl From<&Counts> for CallCounts {
    fn from(c: &Counts) -> Self {
        CallCounts {
            calls_lcp: c.lcp,
            calls_lcs: c.lcs,
            calls_ipm: c.ipm,
            calls_exists: c.exists,
            calls_firstocc: c.first_occ,
            calls_lastocc: c.last_occ,
            calls_clusters: c.clusters,
            calls_period: c.period,
            calls_total: c.primitive_calls(),
        }
    }
}

/// Total primitive calls per engine phase, keyed by phase name.
pub fn phase_breakdown(s: &IndexStats) -> BTreeMap<String, u64> {
    Phase::ALL.iter().map(|p| (p.name().to_string(), s.phase(*p).primitive_calls())).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub line: usize,
    pub op: String,
    /// String length after the step.
    pub n: usize,
    /// `null` for edits.
    pub answer: Value,
    #[serde(flatten)]
    pub calls: CallCounts,
    pub phases: BTreeMap<String, u64>,
}

/// Wall-clock times, kept apart so the rest of a report is reproducible.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallTimes {
    pub build_ns: u64,
    pub step_ns: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub m_policy: String,
    pub initial_len: usize,
    pub build: CallCounts,
    pub steps: Vec<StepRecord>,
    /// Set when the run stopped early.
    pub error: Option<String>,
    pub wall: WallTimes,
}

/// A failing edit sequence, shrunk as far as the minimizer could.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Repro {
    pub step: usize,
    pub line: usize,
    pub what: String,
    pub expected: Value,
    pub actual: Value,
    pub initial: Vec<Symbol>,
    pub edits: Vec<String>,
    /// Replayable script for the minimized case.
    pub script: String,
}

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("line {line}: {message}")]
    Script { line: usize, message: String },
    #[error("oracle mismatch at step {} (line {}): {}", .0.step, .0.line, .0.what)]
    Mismatch(Box<Repro>),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Script { .. } => 1,
            Failure::Mismatch(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

fn classify_error(e: Error, line: usize) -> Failure {
    match e {
        Error::OutOfRange { .. } | Error::BadRange { .. } | Error::SymbolTooLarge(_) | Error::EmptyPattern => {
            Failure::Script { line, message: e.to_string() }
        }
        other => Failure::Internal(other.to_string()),
    }
}

fn phrase_json(p: &Phrase) -> Value {
    serde_json::to_value(p).unwrap_or(Value::Null)
}

fn answer<I: StringIndex>(e: &mut Engine<I>, q: Query) -> dynlz::error::Result<Value> {
    Ok(match q {
        Query::LzLength { i } => json!(e.lz_length(i.unwrap_or(e.len()))?),
        Query::Select { k } => phrase_json(&e.select_phrase(k)?),
        Query::Contain { i } => phrase_json(&e.containing_phrase(i)?),
        Query::Recompute => Value::Array(e.recompute_factorization()?.iter().map(phrase_json).collect()),
    })
}

/// The oracle's answer, reduced to the fields the engine must match.
fn shape(v: &Value) -> Value {
    match v {
        Value::Object(m) => json!({ "start": m["start"], "end": m["end"], "kind": m["kind"] }),
        Value::Array(a) => Value::Array(a.iter().map(shape).collect()),
        other => other.clone(),
    }
}

fn oracle_answer(s: &[Symbol], q: Query) -> Option<Value> {
    let lz = oracle::lz77_brute(s);
    let covering = |i: usize| lz.iter().position(|p| p.start <= i && i <= p.end);
    Some(match q {
        Query::LzLength { i } => {
            let i = i.unwrap_or(s.len());
            json!(if i == 0 { 0 } else { covering(i)? + 1 })
        }
        Query::Select { k } => phrase_json(lz.get(k.checked_sub(1)?)?),
        Query::Contain { i } => phrase_json(&lz[covering(i)?]),
        Query::Recompute => Value::Array(lz.iter().map(phrase_json).collect()),
    })
}

/// `(what, expected, actual)` for the first disagreement with the oracle.
pub type Mismatch = (String, Value, Value);

/// Compares the tree and every query with the oracle.
pub fn full_check<I: StringIndex>(e: &mut Engine<I>) -> Result<(), Mismatch> {
    let s = e.symbols();
    let want = oracle::lpf_tree_brute(&s);
    match e.parent_positions() {
        Ok(got) if got == want => {}
        Ok(got) => return Err(("parent array".into(), json!(want), json!(got))),
        Err(x) => return Err(("parent array".into(), json!(want), json!(x.to_string()))),
    }
    let lz = oracle::lz77_brute(&s);
    let mut queries = vec![Query::Recompute, Query::LzLength { i: Some(0) }];
    queries.extend((1..=lz.len()).map(|k| Query::Select { k }));
    queries.extend((1..=s.len()).flat_map(|i| [Query::Contain { i }, Query::LzLength { i: Some(i) }]));
    for q in queries {
        let want = oracle_answer(&s, q).map(|v| shape(&v));
        let got = answer(e, q).map(|v| shape(&v));
        match (want, got) {
            (Some(w), Ok(g)) if w == g => {}
            (w, g) => {
                let g = g.unwrap_or_else(|x| json!(x.to_string()));
                return Err((format!("{q:?}"), w.unwrap_or(Value::Null), g));
            }
        }
    }
    Ok(())
}

/// Replays `edits` on a fresh engine, checking after each one. Invalid edit
/// sequences count as passing so the minimizer never keeps them.
pub fn replay_fails<I: StringIndex>(cfg: &RunConfig, initial: &[Symbol], edits: &[EditOp]) -> bool {
    let Ok(mut e) = Engine::<I>::preprocess(initial, cfg.engine_config()) else {
        return true;
    };
    if full_check(&mut e).is_err() {
        return true;
    }
    for op in edits {
        if op.validate(e.len()).is_err() {
            return false;
        }
        if e.update(op).is_err() || full_check(&mut e).is_err() {
            return true;
        }
    }
    false
}

/// Greedy shrinking until nothing more can go while `fails` still holds:
/// fold leading edits into the initial string, drop edits, then drop initial
/// symbols. At most `budget` calls to `fails`.
pub fn minimize(
    initial: &[Symbol],
    edits: &[EditOp],
    budget: usize,
    mut fails: impl FnMut(&[Symbol], &[EditOp]) -> bool,
) -> (Vec<Symbol>, Vec<EditOp>) {
    let (mut s, mut ops) = (initial.to_vec(), edits.to_vec());
    let mut calls = 0;
    let mut progress = true;
    while progress && calls < budget {
        progress = false;
        while let Some(first) = ops.first().copied() {
            if calls >= budget || first.validate(s.len()).is_err() {
                break;
            }
            let mut folded = s.clone();
            first.apply_to_vec(&mut folded);
            calls += 1;
            if !fails(&folded, &ops[1..]) {
                break;
            }
            s = folded;
            ops.remove(0);
            progress = true;
        }
        let mut k = ops.len();
        while k > 0 && calls < budget {
            k -= 1;
            let mut cand = ops.clone();
            cand.remove(k);
            calls += 1;
            if fails(&s, &cand) {
                ops = cand;
                progress = true;
            }
        }
        // Chunks first, then single symbols.
        let mut chunk = (s.len() / 2).max(1);
        loop {
            let mut at = 0;
            while at < s.len() && calls < budget {
                let mut cand = s.clone();
                cand.drain(at..(at + chunk).min(s.len()));
                calls += 1;
                if fails(&cand, &ops) {
                    s = cand;
                    progress = true;
                } else {
                    at += chunk;
                }
            }
            if chunk == 1 || calls >= budget {
                break;
            }
            chunk /= 2;
        }
    }
    (s, ops)
}

fn step_counts(after: &IndexStats, before: &IndexStats) -> (CallCounts, BTreeMap<String, u64>) {
    let d = after.since(before);
    ((&d.total()).into(), phase_breakdown(&d))
}

/// Runs the script. The report covers every step that completed, even when
/// the run fails partway.
pub fn run<I: StringIndex>(script: &EditScript, cfg: &RunConfig) -> (RunReport, Option<Failure>) {
    let mut report = RunReport {
        config: cfg.clone(),
        m_policy: "max(1, ceil(n^(1/3))) of the post-edit length".into(),
        initial_len: script.initial.len(),
        build: CallCounts::default(),
        steps: Vec::new(),
        error: None,
        wall: WallTimes::default(),
    };
    let t = Instant::now();
    let mut e = match Engine::<I>::preprocess(&script.initial, cfg.engine_config()) {
        Ok(e) => e,
        Err(x) => {
            let f = classify_error(x, 0);
            report.error = Some(f.to_string());
            return (report, Some(f));
        }
    };
    report.wall.build_ns = t.elapsed().as_nanos() as u64;
    report.build = (&e.stats().total()).into();
    let mut edits: Vec<EditOp> = Vec::new();
    let fail = |mut report: RunReport, f: Failure| {
        report.error = Some(f.to_string());
        (report, Some(f))
    };

    if cfg.check_oracle {
        if let Err((what, expected, actual)) = full_check(&mut e) {
            let repro = repro::<I>(cfg, script, &edits, 0, 0, what, expected, actual);
            return fail(report, Failure::Mismatch(Box::new(repro)));
        }
    }

    for (k, l) in script.commands.iter().enumerate() {
        let step = k + 1;
        let before = e.stats();
        let t = Instant::now();
        let ans = match l.command {
            Command::Edit(op) => {
                if let Err(x) = op.validate(e.len()) {
                    return fail(report, classify_error(x, l.line));
                }
                if let Err(x) = e.update(&op) {
                    return fail(report, classify_error(x, l.line));
                }
                edits.push(op);
                Value::Null
            }
            Command::Query(q) => match answer(&mut e, q) {
                Ok(v) => v,
                Err(x) => return fail(report, classify_error(x, l.line)),
            },
        };
        report.wall.step_ns.push(t.elapsed().as_nanos() as u64);
        let (calls, phases) = step_counts(&e.stats(), &before);
        report.steps.push(StepRecord { step, line: l.line, op: l.command.to_string(), n: e.len(), answer: ans.clone(), calls, phases });

        if cfg.check_oracle {
            let s = e.symbols();
            let mismatch = match l.command {
                Command::Query(q) => {
                    let want = oracle_answer(&s, q).map(|v| shape(&v)).unwrap_or(Value::Null);
                    (want != shape(&ans)).then(|| (format!("{q:?}"), want, ans))
                }
                Command::Edit(_) => full_check(&mut e).err(),
            };
            if let Some((what, expected, actual)) = mismatch {
                let repro = repro::<I>(cfg, script, &edits, step, l.line, what, expected, actual);
                return fail(report, Failure::Mismatch(Box::new(repro)));
            }
        }
    }
    (report, None)
}

#[allow(clippy::too_many_arguments)]
fn repro<I: StringIndex>(
    cfg: &RunConfig,
    script: &EditScript,
    edits: &[EditOp],
    step: usize,
    line: usize,
    what: String,
    expected: Value,
    actual: Value,
) -> Repro {
    let (initial, ops) = if replay_fails::<I>(cfg, &script.initial, edits) {
        minimize(&script.initial, edits, 4000, |s, o| replay_fails::<I>(cfg, s, o))
    } else {
        (script.initial.clone(), edits.to_vec())
    };
    let lines: Vec<String> = ops.iter().map(|&o| Command::Edit(o).to_string()).collect();
    let mut text = format_init(&initial);
    text.push('\n');
    for l in &lines {
        text.push_str(l);
        text.push('\n');
    }
    Repro { step, line, what, expected, actual, initial, edits: lines, script: text }
}
