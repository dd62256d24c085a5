use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ewl_core::{InstanceFile, RunReport};

fn ewl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ewl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn builtin_instance_runs_tight() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("thm6.json");
    let p = path.to_str().unwrap();
    let o = ewl(&["gen", "--builtin", "thm6", "--out", p]);
    assert!(o.status.success(), "{o:?}");
    let file = InstanceFile::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file.jobs.len(), 5);

    let o = ewl(&["run", "--instance", p, "--policy", "alg3"]);
    assert_eq!(o.status.code(), Some(0));
    let report = RunReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(report.c_alg.to_string(), "5/3");
    assert_eq!(report.c_opt.to_string(), "2");
    assert!(report.ratio_decimal.starts_with("1.2000"));
    assert!(report.bound_holds);
    // parse(format(report)) = report
    assert_eq!(RunReport::from_json(&report.to_json()).unwrap(), report);
}

#[test]
fn empty_instance() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "empty.json", r#"{"d": "1", "jobs": []}"#);
    let o = ewl(&["run", "--instance", &p, "--policy", "alg1"]);
    assert_eq!(o.status.code(), Some(0));
    let r = RunReport::from_json(&stdout(&o)).unwrap();
    assert!(r.c_alg.is_zero() && r.c_opt.is_zero() && r.bound_holds);

    let o = ewl(&["gen", "--n", "0"]);
    let file = InstanceFile::from_json(&stdout(&o)).unwrap();
    assert!(file.jobs.is_empty());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let wrong_total = write(
        dir.path(),
        "t.json",
        r#"{"d": "1", "hint": {"kind": "total", "value": "3"}, "jobs": [{"p": "1/2", "g": 2}]}"#,
    );
    assert_eq!(
        ewl(&["run", "--instance", &wrong_total, "--policy", "alg2"])
            .status
            .code(),
        Some(3)
    );
    // alg2 needs a total hint
    let no_hint = write(dir.path(), "n.json", r#"{"d": "1", "jobs": [{"p": "1/2", "g": 2}]}"#);
    assert_eq!(
        ewl(&["run", "--instance", &no_hint, "--policy", "alg2"]).status.code(),
        Some(3)
    );
    let too_long = write(dir.path(), "l.json", r#"{"d": "1", "jobs": [{"p": "3/2", "g": 1}]}"#);
    assert_eq!(ewl(&["oracle", "--instance", &too_long]).status.code(), Some(3));

    let garbage = write(dir.path(), "g.json", "{ not json");
    assert_eq!(
        ewl(&["run", "--instance", &garbage, "--policy", "alg1"]).status.code(),
        Some(2)
    );
    let zero_den = write(dir.path(), "z.json", r#"{"d": "1", "jobs": [{"p": "1/0", "g": 1}]}"#);
    assert_eq!(ewl(&["oracle", "--instance", &zero_den]).status.code(), Some(2));
    assert_eq!(
        ewl(&["run", "--policy", "alg9", "--instance", &no_hint]).status.code(),
        Some(2)
    );
    assert_eq!(
        ewl(&["stress", "--policy", "alg1", "--trials", "0"]).status.code(),
        Some(2)
    );

    let missing = dir.path().join("missing.json");
    assert_eq!(
        ewl(&["oracle", "--instance", missing.to_str().unwrap()]).status.code(),
        Some(1)
    );
}

#[test]
fn oracle_output_shape() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "s.json",
        r#"{"d": "1", "jobs": [{"p": "1", "g": 1}, {"p": {"a": "-1", "b": "1"}, "g": 2}]}"#,
    );
    let o = ewl(&["oracle", "--instance", &p]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["witness"], serde_json::json!([1]));
    assert_eq!(v["c_opt"], serde_json::json!({"b": "1"}));
    // irrational instances are outside the DP
    assert_eq!(
        ewl(&["oracle", "--instance", &p, "--method", "dp"]).status.code(),
        Some(1)
    );
}

#[test]
fn adversary_reports() {
    for (kind, policy) in [("thm2", "alg1"), ("thm4", "greedy2"), ("thm8", "random:3")] {
        let o = ewl(&["adversary", "--kind", kind, "--policy", policy]);
        assert!(o.status.success(), "{kind} {policy}");
        let r = RunReport::from_json(&stdout(&o)).unwrap();
        assert_eq!(r.adversary.as_deref(), Some(kind));
        assert!(r.bound_holds);
    }
    let o = ewl(&["adversary", "--kind", "thm2", "--policy", "alg1", "--format", "pretty"]);
    assert!(stdout(&o).contains("c_opt        √2"));
}

#[test]
fn stress_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = ewl(&[
            "stress",
            "--policy",
            "alg4",
            "--seed",
            "9",
            "--trials",
            "200",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        assert!(String::from_utf8_lossy(&o.stderr).contains("0 violations"));
    }
    let (a, b) = (fs::read(a).unwrap(), fs::read(b).unwrap());
    assert_eq!(a, b);
    assert!(a.starts_with(b"seed,n,c_alg,c_opt,ratio,bound_holds\n9,"));

    let o = ewl(&[
        "stress", "--policy", "alg2", "--trials", "1", "--seed", "5", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["max_ratio_seed"], 5);
    assert_eq!(v["violations"], serde_json::json!([]));
}

#[test]
fn gen_round_trips_with_valid_hint() {
    for hint in ["none", "total", "pmax", "pmax1", "pmax2"] {
        let o = ewl(&["gen", "--n", "10", "--seed", "1", "--hint", hint]);
        let file = InstanceFile::from_json(&stdout(&o)).unwrap();
        let (inst, h) = file.clone().split();
        assert!(ewl_core::validate(&inst, &h).is_empty(), "{hint}");
        assert_eq!(InstanceFile::from_json(&file.to_json()).unwrap(), file);
    }
}

#[test]
fn precision_env_is_respected() {
    let run = |bits: &str| {
        Command::new(env!("CARGO_BIN_EXE_ewl"))
            .args(["adversary", "--kind", "thm8", "--policy", "alg4"])
            .env("EWL_PRECISION_BITS", bits)
            .output()
            .unwrap()
    };
    let low = run("2");
    assert!(low.status.success());
    assert_eq!(stdout(&low), stdout(&run("256")));
    assert_eq!(run("zero").status.code(), Some(2));
}
