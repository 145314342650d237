//! JSON, CSV and plain-text renderings.

use clap::ValueEnum;
use dynlz::index::Phase;
use serde::{Deserialize, Serialize};

use crate::ov::OvOutput;
use crate::run::RunReport;
use crate::scaling::ScalingReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

type CsvResult = Result<String, csv::Error>;

fn finish(w: csv::Writer<Vec<u8>>) -> CsvResult {
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

fn phase_names() -> impl Iterator<Item = &'static str> {
    Phase::ALL.iter().map(|p| p.name())
}

pub fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

const CALL_COLUMNS: [&str; 9] = [
    "calls_lcp",
    "calls_lcs",
    "calls_ipm",
    "calls_exists",
    "calls_firstocc",
    "calls_lastocc",
    "calls_clusters",
    "calls_period",
    "calls_total",
];

/// One row per step. `answer` is compact JSON; `wall_ns` is the last column.
pub fn run_csv(r: &RunReport) -> CsvResult {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = ["step", "line", "op", "n", "answer"].map(String::from).to_vec();
    header.extend(CALL_COLUMNS.map(String::from));
    header.extend(phase_names().map(|p| format!("phase_{p}")));
    header.push("wall_ns".into());
    w.write_record(&header)?;
    for (k, s) in r.steps.iter().enumerate() {
        let c = &s.calls;
        let mut row = vec![
            s.step.to_string(),
            s.line.to_string(),
            s.op.clone(),
            s.n.to_string(),
            if s.answer.is_null() { String::new() } else { s.answer.to_string() },
        ];
        row.extend(
            [
                c.calls_lcp,
                c.calls_lcs,
                c.calls_ipm,
                c.calls_exists,
                c.calls_firstocc,
                c.calls_lastocc,
                c.calls_clusters,
                c.calls_period,
                c.calls_total,
            ]
            .map(|x| x.to_string()),
        );
        row.extend(phase_names().map(|p| s.phases.get(p).copied().unwrap_or(0).to_string()));
        row.push(r.wall.step_ns.get(k).copied().unwrap_or(0).to_string());
        w.write_record(&row)?;
    }
    finish(w)
}

pub fn scaling_csv(r: &ScalingReport) -> CsvResult {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = ["n", "m", "steps", "mean_calls", "p95_calls", "max_calls"].map(String::from).to_vec();
    header.extend(phase_names().map(|p| format!("phase_{p}")));
    header.push("wall_ns".into());
    w.write_record(&header)?;
    for row in &r.rows {
        let mut rec = vec![
            row.n.to_string(),
            row.m.to_string(),
            row.steps.to_string(),
            row.mean_calls.to_string(),
            row.p95_calls.to_string(),
            row.max_calls.to_string(),
        ];
        rec.extend(phase_names().map(|p| row.phases.get(p).copied().unwrap_or(0.0).to_string()));
        rec.push(row.wall_ns.to_string());
        w.write_record(&rec)?;
    }
    finish(w)
}

pub fn scaling_text(r: &ScalingReport) -> String {
    let mut out = format!("{:>8} {:>4} {:>12} {:>10} {:>10} {:>14}\n", "n", "m", "mean calls", "p95", "max", "ns/update");
    for row in &r.rows {
        out.push_str(&format!(
            "{:>8} {:>4} {:>12.1} {:>10} {:>10} {:>14}\n",
            row.n, row.m, row.mean_calls, row.p95_calls, row.max_calls, row.wall_ns
        ));
    }
    match r.exponent {
        Some(e) => out.push_str(&format!("log-log exponent: {e:.3}\n")),
        None => out.push_str("log-log exponent: n/a (need two sizes)\n"),
    }
    out
}

pub fn ov_csv(o: &OvOutput) -> CsvResult {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["u", "difference", "orthogonal", "counts"])?;
    for r in &o.rows {
        let counts: Vec<String> = r.counts.iter().map(|c| c.to_string()).collect();
        w.write_record([r.u.clone(), r.difference.to_string(), r.orthogonal.to_string(), counts.join(" ")])?;
    }
    finish(w)
}

pub fn ov_text(o: &OvOutput) -> String {
    let mut out = format!("n={} d={} |S|={} |S'|={} updates={}\n", o.n, o.d, o.len_s, o.len_s_prime, o.updates);
    for r in &o.rows {
        let mark = if r.orthogonal { "  orthogonal" } else { "" };
        out.push_str(&format!("{} difference={} counts={:?}{mark}\n", r.u, r.difference, r.counts));
    }
    out.push_str(if o.has_orthogonal { "verdict: orthogonal pair found\n" } else { "verdict: no orthogonal pair\n" });
    if let Some(b) = o.brute_force {
        out.push_str(&format!("brute force: {}\n", if b { "orthogonal pair found" } else { "no orthogonal pair" }));
    }
    out
}
