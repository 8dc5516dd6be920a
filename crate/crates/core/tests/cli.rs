use std::path::Path;
use std::process::{Command, Output};

use dilate_lab::cli::RunConfig;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dilate-lab"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn stderr_line(o: &Output) -> String {
    let s = String::from_utf8_lossy(&o.stderr).into_owned();
    assert_eq!(s.lines().count(), 1, "stderr: {s}");
    s
}

#[test]
fn arith_table_has_ten_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        dir.path(),
        &["arith", "--kind", "sigma", "--s", "-1", "--range", "10"],
    );
    assert!(o.status.success());
    let out = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,value");
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[6], "6,2.0000000000000000e0");
}

#[test]
fn malformed_model_is_a_parse_error_without_output() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.spec"), "model = finite{(1, 0.5),\n").unwrap();
    let target = dir.path().join("report.json");
    let o = run_in(
        dir.path(),
        &[
            "--out",
            target.to_str().unwrap(),
            "weyl",
            "--model",
            "bad.spec",
            "--N",
            "8",
        ],
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
    assert!(stderr_line(&o).starts_with("error[code=3 kind=parse]"));
    assert!(!target.exists());
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["arith", "--range", "10", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr_line(&o).starts_with("error[code=2 kind=usage]"));
    let o = run_in(
        dir.path(),
        &[
            "counterexample",
            "--s",
            "3",
            "--d",
            "2",
            "--Tmax",
            "40",
            "--mc",
            "10",
        ],
    );
    assert_eq!(o.status.code(), Some(2), "stochastic run without --seed");
    assert!(o.stdout.is_empty());
}

#[test]
fn capacity_and_certification_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("f.spec"), "model = finite{(1,1),(7,0.5)}\n").unwrap();
    let o = run_in(
        dir.path(),
        &[
            "--freq-cap",
            "64",
            "trajectory",
            "--model",
            "f.spec",
            "--checkpoints",
            "2^4..2^6",
        ],
    );
    assert_eq!(o.status.code(), Some(4));
    stderr_line(&o);
    std::fs::write(
        dir.path().join("log.spec"),
        "model = cor3{gamma=1, form=log}\n",
    )
    .unwrap();
    let o = run_in(dir.path(), &["weyl", "--model", "log.spec", "--N", "4"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stderr_line(&o).contains("kind=certification"));
}

#[test]
fn json_report_round_trips_its_config() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("m.spec"),
        "model = powerlaw{s=1}\ncoeffs = rule{p=1, q=2}\n",
    )
    .unwrap();
    let o = run_in(
        dir.path(),
        &["--format", "json", "weyl", "--model", "m.spec", "--N", "16"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let cfg: RunConfig = serde_json::from_value(v["config"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&cfg).unwrap(), v["config"]);
    assert!(cfg.model_spec.is_some());
    assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["result"]["rows"].as_array().unwrap().len(), 16);
}

#[test]
fn out_path_is_the_only_write() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("m.spec"), "model = finite{(1,1),(2,0.5)}\n").unwrap();
    let o = run_in(
        dir.path(),
        &[
            "--out", "res.json", "--seed", "5", "lemma", "--model", "m.spec", "--r", "3",
            "--coeffs", "random",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["m.spec", "res.json"]);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("res.json")).unwrap())
            .unwrap();
    assert_eq!(v["result"]["verdict"], "holds");
}

#[test]
fn smooth_lists_members_then_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["smooth", "--s", "2", "--T", "3"]);
    let out = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(&lines[..3], ["8", "9", "12"]);
    let summary: serde_json::Value = serde_json::from_str(lines[3]).unwrap();
    assert_eq!(summary["count"], 3);
}

#[test]
fn trajectory_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("m.spec"),
        "model = finite{(1,0.5),(3,0.25)}\n",
    )
    .unwrap();
    let o = run_in(
        dir.path(),
        &[
            "trajectory",
            "--model",
            "m.spec",
            "--mode",
            "avg",
            "--checkpoints",
            "2^4..2^8",
            "--grid",
            "2^12",
            "--out",
            "csv",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = String::from_utf8(o.stdout).unwrap();
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("N,grid_sup,argmax_t,normalized"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn check_criteria_emit_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("m.spec"), "model = powerlaw{s=1}\n").unwrap();
    for args in [
        vec![
            "check",
            "--criterion",
            "koksma",
            "--model",
            "m.spec",
            "--K",
            "64",
        ],
        vec![
            "check",
            "--criterion",
            "thm2",
            "--model",
            "m.spec",
            "--K",
            "64",
        ],
        vec![
            "check",
            "--criterion",
            "cor1a",
            "--model",
            "m.spec",
            "--range",
            "256",
        ],
        vec![
            "check",
            "--criterion",
            "cor1b",
            "--model",
            "m.spec",
            "--gamma",
            "0.5",
            "--range",
            "256",
        ],
        vec![
            "check",
            "--criterion",
            "cor1c",
            "--model",
            "m.spec",
            "--range",
            "256",
        ],
        vec![
            "check",
            "--criterion",
            "cor3",
            "--gamma",
            "1.5",
            "--range",
            "64",
        ],
        vec![
            "check",
            "--criterion",
            "necessity",
            "--K",
            "500",
            "--delta",
            "0.5",
        ],
        vec![
            "check",
            "--criterion",
            "reduction",
            "--model",
            "m.spec",
            "--K",
            "64",
            "--delta",
            "0.5",
        ],
        vec![
            "check",
            "--criterion",
            "chain",
            "--model",
            "m.spec",
            "--R",
            "5",
        ],
    ] {
        let o = run_in(dir.path(), &args);
        assert!(
            o.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(v["result"].is_object(), "{args:?}");
    }
}
