use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};

use rhs_lab::harness::coverage::REQUIRED_ANCHORS;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rhs-lab")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn triples_json(text: &str) -> BTreeSet<(String, String, bool)> {
    let v: serde_json::Value = serde_json::from_str(text).unwrap();
    v.as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["suite"].as_str().unwrap().to_string(),
                r["case"].as_str().unwrap().to_string(),
                r["pass"].as_bool().unwrap(),
            )
        })
        .collect()
}

fn triples_csv(text: &str) -> BTreeSet<(String, String, bool)> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    rd.records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].to_string(), r[1].to_string(), r[6].parse().unwrap())
        })
        .collect()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn lie_core_with_seed_passes() {
    let o = lab(&["run", "--suite", "lie-core", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(triples_json(&String::from_utf8(o.stdout).unwrap()).iter().all(|t| t.2));
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = lab(&["run", "--suite", "nilpotent-l2", "--trunc", "10", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn json_and_csv_agree() {
    let dir = tempfile::tempdir().unwrap();
    let j = dir.path().join("r.json");
    let c = dir.path().join("r.csv");
    lab(&["run", "--suite", "lie-core", "--out", j.to_str().unwrap()]);
    lab(&["run", "--suite", "lie-core", "--format", "csv", "--out", c.to_str().unwrap()]);
    let (tj, tc) = (triples_json(&read(&j)), triples_csv(&read(&c)));
    assert!(!tj.is_empty());
    assert_eq!(tj, tc);
    let csv = read(&c);
    assert!(csv.starts_with("suite,case,anchor,measured,bound,tolerance,pass,seconds\n"));
    assert!(!csv.contains('\r'));
}

#[test]
fn growth_table_reports_block_count() {
    let o = lab(&["run", "--suite", "nilpotent-l2", "--trunc", "50"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let growth = v.as_array().unwrap().iter().find(|r| r["case"] == "growth.x1-norm").unwrap();
    let row = growth["details"]["table"].as_array().unwrap().iter().find(|r| r["M"] == 50).unwrap();
    assert!((row["value"].as_f64().unwrap() - 50.0).abs() < 1e-9);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"suite": "nilpotent-l2", "seed": 3, "tol": {"algebra": 1e-30}}"#).unwrap();
    let p = cfg.to_str().unwrap();

    // The file alone selects the suite and a tolerance too tight to meet.
    let strict = lab(&["run", "--config", p, "--suite", "lie-core"]);
    assert_eq!(code(&strict), 1);
    let t = triples_json(&String::from_utf8(strict.stdout).unwrap());
    assert!(t.iter().all(|x| x.0 == "lie-core"));

    let relaxed = lab(&["run", "--config", p, "--suite", "lie-core", "--tol", "algebra=1e-12"]);
    assert_eq!(code(&relaxed), 0);
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"suit": "lie-core"}"#).unwrap();
    for args in [
        vec!["run", "--suite", "nonexistent"],
        vec!["run", "--suite", "lie-core", "--tol", "nonsense=1"],
        vec!["run", "--suite", "lie-core", "--tol", "algebra"],
        vec!["run", "--suite", "heisenberg-hermite", "--trunc", "16", "--nmax", "9"],
        vec!["run", "--suite", "lie-core", "--lambda", "20,10"],
        vec!["run", "--suite", "lie-core", "--format", "xml"],
        vec!["run", "--config", bad.to_str().unwrap()],
        vec!["run", "--config", "/nonexistent/config.json"],
        vec!["run", "--suite", "lie-core", "--out", "/nonexistent/dir/out.json"],
    ] {
        let o = lab(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn guard_band_message_names_safe_depth() {
    let o = lab(&["run", "--suite", "heisenberg-hermite", "--trunc", "16", "--nmax", "9"]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("maximal safe depth is"), "{err}");
}

#[test]
fn list_suites_and_coverage() {
    let o = lab(&["list-suites"]);
    assert_eq!(code(&o), 0);
    let names: Vec<String> = String::from_utf8(o.stdout).unwrap().lines().map(String::from).collect();
    assert_eq!(names, ["heisenberg-hermite", "hille-yosida", "integrator", "lie-core", "nilpotent-l2"]);

    let o = lab(&["coverage"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let listed: BTreeSet<&str> = text
        .lines()
        .skip(1)
        .flat_map(|l| l.split('\t').nth(2).unwrap().split(", "))
        .collect();
    for a in REQUIRED_ANCHORS {
        assert!(listed.contains(a), "{a}");
    }
}
