use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmc"))
        .args(args)
        .output()
        .expect("qmc runs")
}

fn qmc_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmc"))
        .args(args)
        .env(key, value)
        .output()
        .expect("qmc runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn check_all_on_generated_sausage_is_all_equality() {
    let dir = tempfile::tempdir().unwrap();
    for dim in ["2", "3", "4"] {
        let body = dir.path().join(format!("s{dim}.json"));
        let body = body.to_str().unwrap();
        let out = qmc(&["gen", "--dim", dim, "--family", "sausage", "--seed", "11", "-o", body]);
        assert_eq!(out.status.code(), Some(0));
        let out = qmc(&["check", body, "--all"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let reports = lines(&out);
        assert!(reports.len() > 5);
        for r in &reports {
            assert_eq!(r["verdict"], "equality", "{r}");
        }
    }
}

#[test]
fn symbolic_suite_passes() {
    let out = qmc(&["symbolic", "--n-max", "32"]);
    assert_eq!(out.status.code(), Some(0));
    let checks = lines(&out);
    assert!(checks.iter().all(|c| c["passed"] == true));
    assert!(checks.iter().any(|c| c["name"] == "generating_identity n=32"));
    assert!(!checks.iter().any(|c| c["name"] == "generating_identity n=33"));
}

#[test]
fn quermass_of_unit_square_core() {
    let dir = tempfile::tempdir().unwrap();
    let body = write(
        dir.path(),
        "sq.json",
        r#"{"dim":2,"kind":"core_ball","core_vertices":[[0,0],[1,0],[1,1],[0,1]],"radius":1}"#,
    );
    let out = qmc(&["quermass", &body, "--method", "exact"]);
    assert_eq!(out.status.code(), Some(0));
    let w = &lines(&out)[0];
    assert_eq!(w["method"], "exact_face");
    let pi = std::f64::consts::PI;
    let want = [5.0 + pi, 2.0 + pi, pi];
    for (v, e) in w["values"].as_array().unwrap().iter().zip(want) {
        assert!((v.as_f64().unwrap() - e).abs() < 1e-12);
    }

    let out = qmc(&["check", &body, "--triple", "0,1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &lines(&out)[0];
    assert!((r["lhs"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(r["verdict"], "holds");
}

#[test]
fn monte_carlo_quermass_respects_thread_setting() {
    let dir = tempfile::tempdir().unwrap();
    let body = write(dir.path(), "b.json", r#"{"dim":3,"kind":"ball","center":[0,0,0],"radius":1}"#);
    let args = ["quermass", &body, "--method", "mc", "--samples", "50000", "--seed", "3"];
    let one = qmc_env(&args, "QMC_THREADS", "1");
    let four = qmc_env(&args, "QMC_THREADS", "4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(lines(&one)[0]["method"], "mc_steiner");
    assert_eq!(qmc_env(&args, "QMC_THREADS", "zero").status.code(), Some(2));
}

#[test]
fn kubota_on_ball() {
    let dir = tempfile::tempdir().unwrap();
    let body = write(dir.path(), "b.json", r#"{"dim":3,"kind":"ball","center":[1,2,3],"radius":1}"#);
    let out = qmc(&["kubota", &body, "--k", "1", "--j", "0", "--rotations", "20", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &lines(&out)[0];
    assert!((r["lhs"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-12);
    assert_eq!(r["pass"], true);
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(qmc(&[]).status.code(), Some(2));
    assert_eq!(qmc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qmc(&["check", "/nonexistent.json", "--all"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let body = write(dir.path(), "b.json", r#"{"dim":2,"kind":"ball","center":[0,0],"radius":1}"#);
    assert_eq!(qmc(&["check", &body]).status.code(), Some(2));
    assert_eq!(qmc(&["check", &body, "--triple", "0,1"]).status.code(), Some(2));
    assert_eq!(qmc(&["check", &body, "--triple", "0,1,5"]).status.code(), Some(2));
    assert_eq!(qmc(&["check", &body, "--all", "--lambda", "2"]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.json", r#"{"dim":2,"kind":"ball","center":[0],"radius":1}"#);
    let out = qmc(&["quermass", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("center"));
    assert_eq!(qmc(&["quermass", &body, "--method", "mc", "--samples", "10"]).status.code(), Some(2));
}

#[test]
fn violated_report_exits_1() {
    // A hand-made quermass vector with a negative consecutive deficit.
    let dir = tempfile::tempdir().unwrap();
    let body = write(dir.path(), "b.json", r#"{"dim":2,"kind":"ball","center":[0,0],"radius":1}"#);
    let w = write(
        dir.path(),
        "w.json",
        r#"{"dim":2,"method":"exact_face","values":[1.0,3.0,3.141592653589793],"stderr":[0,0,0]}"#,
    );
    let out = qmc(&["check", &body, "--quermass", &w, "--triple", "0,1,2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(lines(&out)[0]["verdict"], "violated");
}

#[test]
fn campaign_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_string_lossy();
    let config = format!(
        r#"{{
            "dims": [2, 3, 4],
            "bodies_per_dim": 34,
            "families": [{{"family": "random_core"}}, {{"family": "sausage"}}, {{"family": {{"flat_core": {{"core_dim": 1}}}}}}],
            "mc_samples": 20000,
            "rotations": 20,
            "base_seed": 5,
            "outputs": {{"reports": "{d}/r.jsonl", "summary": "{d}/s.csv", "plot": "{d}/p.csv", "kubota": "{d}/k.csv"}}
        }}"#
    );
    let cfg = write(dir.path(), "c.json", &config);
    let out = qmc(&["campaign", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let reports = std::fs::read_to_string(dir.path().join("r.jsonl")).unwrap();
    let mut keys = Vec::new();
    for l in reports.lines() {
        let v: Value = serde_json::from_str(l).unwrap();
        assert_ne!(v["verdict"], "violated", "{v}");
        keys.push((v["dim"].as_u64().unwrap(), v["body_id"].as_u64().unwrap()));
    }
    assert!(keys.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(keys.iter().map(|k| k.1).max(), Some(101));

    let plot = std::fs::read_to_string(dir.path().join("p.csv")).unwrap();
    assert!(plot.starts_with("body_id,t,volume,volume_stderr,fitted"));
    assert!(plot.lines().count() > 1);
    let summary = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert_eq!(summary.lines().count(), reports.lines().count() + 1);

    let again = qmc_env(&["campaign", &cfg], "QMC_THREADS", "2");
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(dir.path().join("r.jsonl")).unwrap(), reports);
}

#[test]
fn malformed_campaign_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"dims":[2],"bodies_per_dim":0,"families":[{"family":"ball"}],"mc_samples":100000,
            "outputs":{"reports":"r.jsonl","summary":"s.csv"}}"#,
    );
    let out = qmc(&["campaign", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bodies_per_dim"));

    let cfg = write(
        dir.path(),
        "c2.json",
        r#"{"dims":[2],"bodies_per_dim":1,"families":[{"family":"ball"}],"mc_samples":100000,
            "outputs":{"reports":"/nonexistent/r.jsonl","summary":"s.csv"}}"#,
    );
    let out = qmc(&["campaign", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("outputs.reports"));
}
