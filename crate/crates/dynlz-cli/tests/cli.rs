use std::path::Path;
use std::process::{Command, Output};

fn dynlz(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynlz")).args(args).current_dir(dir).env_clear().output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn run_reports_and_exit_codes() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "ok.txt", "init abab\nS 4 c\nQ lzlength\n");
    write(d.path(), "bad.txt", "init abab\nQ lzlength\nS 9 c\n");
    write(d.path(), "syntax.txt", "init abab\nfrobnicate\n");

    let o = dynlz(&["run", "ok.txt", "--check-oracle"], d.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["steps"][1]["answer"], 4);
    assert_eq!(v["config"]["backend"], "fast");

    let o = dynlz(&["run", "bad.txt", "--report", "csv"], d.path());
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let o = dynlz(&["run", "syntax.txt"], d.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    assert_eq!(dynlz(&["run", "missing.txt"], d.path()).status.code(), Some(1));
    assert_eq!(dynlz(&["--backend", "quantum", "run", "ok.txt"], d.path()).status.code(), Some(1));
    assert_eq!(dynlz(&["--help"], d.path()).status.code(), Some(0));
}

#[test]
fn environment_fallbacks_and_out_file() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "ok.txt", "init aaaa\nD 1\nQ lzlength\n");
    let o = Command::new(env!("CARGO_BIN_EXE_dynlz"))
        .args(["run", "ok.txt"])
        .current_dir(d.path())
        .env_clear()
        .env("DYNLZ_BACKEND", "naive")
        .env("DYNLZ_SEED", "5")
        .env("DYNLZ_REPORT", "json")
        .env("DYNLZ_OUT", "r.json")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(v["config"]["backend"], "naive");
    assert_eq!(v["config"]["seed"], 5);
    assert_eq!(v["steps"][1]["answer"], 2);
}

#[test]
fn generated_workload_runs_clean() {
    let d = tempfile::tempdir().unwrap();
    let o = dynlz(&["gen-workload", "periodic", "-n", "40", "--steps", "50", "--seed", "8", "--out", "w.txt"], d.path());
    assert_eq!(o.status.code(), Some(0));
    let again = dynlz(&["gen-workload", "periodic", "-n", "40", "--steps", "50", "--seed", "8"], d.path());
    assert_eq!(std::fs::read(d.path().join("w.txt")).unwrap(), again.stdout);
    let o = dynlz(&["run", "w.txt", "--check-oracle", "--backend", "snapshot", "--debug-checks"], d.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn ov_verdicts() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "a.txt", "# A\n0101\n1100\n1111\n0011\n");
    write(d.path(), "b.txt", "1 0 1 0\n1111\n0110\n1011\n");
    write(d.path(), "ones.txt", "11\n11\n11\n11\n");
    let o = dynlz(&["ov", "--a", "a.txt", "--b", "b.txt", "--check-oracle", "--backend", "snapshot", "--report", "json"], d.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["has_orthogonal"], true);
    assert_eq!(v["brute_force"], true);
    assert_eq!(v["rows"][0]["counts"], serde_json::json!([5, 6, 6, 6]));
    let o = dynlz(&["ov", "--a", "ones.txt", "--b", "ones.txt", "--backend", "naive"], d.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("no orthogonal pair"));
    write(d.path(), "bad.txt", "012\n");
    assert_eq!(dynlz(&["ov", "--a", "bad.txt", "--b", "ones.txt"], d.path()).status.code(), Some(1));
    assert_eq!(dynlz(&["ov", "--a", "a.txt", "--b", "ones.txt"], d.path()).status.code(), Some(1));
}

#[test]
fn scaling_report_formats() {
    let d = tempfile::tempdir().unwrap();
    let o = dynlz(&["scaling-report", "--sizes", "64,128", "--steps", "5", "--backend", "snapshot", "--report", "csv"], d.path());
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout).into_owned();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("n,m,steps,mean_calls"));
    let o = dynlz(&["scaling-report", "--sizes", "64,128", "--steps", "5", "--backend", "snapshot"], d.path());
    assert!(String::from_utf8_lossy(&o.stdout).contains("log-log exponent"));
}
