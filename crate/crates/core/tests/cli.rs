use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coupling-lab")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn coupling_subcommand_reports_pair() {
    let out = run(&["coupling", "--models", "2x3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["summary"]["fail_count"], 0);
    let checks = report["checks"].as_array().unwrap();
    let pair = checks.iter().find(|c| c["id"] == "coupling/z2xz3/mvn-pair").unwrap();
    assert_eq!(pair["observed"], "{2/3, 3/2}");
}

#[test]
fn torus_subcommand_single_pair() {
    let out = run(&["torus", "--p", "3", "--q", "5", "--n", "12", "--p-step", "5"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    let ids: Vec<&str> = report["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"torus/p3q5/dyn-coupling"));
    assert!(ids.contains(&"torus/clock-shift-12-5"));
}

#[test]
fn csv_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = run(&["regular", "--orders", "5", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("config_hash,seed,id,anchor"));
    assert!(text.contains("regular/z5/domain-bicyclic"));
}

#[test]
fn verify_reads_system_files() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write(
        dir.path(),
        "z2xz2.toml",
        r#"
points = ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]
weights = ["1", "1", "1", "1"]
group_g = { table = [[0, 1], [1, 0]] }
group_h = { table = [[0, 1], [1, 0]] }
left_action = [[0, 1, 2, 3], [2, 3, 0, 1]]
right_action = [[0, 1, 2, 3], [1, 0, 3, 2]]
"#,
    );
    let out = run(&["verify", "--system", &sys]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["suites"], serde_json::json!(["axioms", "coupling"]));
}

#[test]
fn same_seed_gives_identical_reports() {
    let a = run(&["symmetric", "--weights", "1/2,1/2", "--r", "1", "--seed", "7", "--samples", "20000"]);
    let b = run(&["symmetric", "--weights", "1/2,1/2", "--r", "1", "--seed", "7", "--samples", "20000"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["header"]["seed"], 7);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.toml", "suites = []\n");
    assert_eq!(code(&run(&["--config", &empty])), 2);
    let unknown = write(dir.path(), "unknown.toml", "suites = [\"nope\"]\n");
    assert_eq!(code(&run(&["--config", &unknown])), 2);
    let bad = write(dir.path(), "bad.toml", "suites = [\"torus\"]\nnot_a_field = 1\n");
    assert_eq!(code(&run(&["--config", &bad])), 3);
    assert_eq!(code(&run(&["coupling", "--models", "2y3"])), 3);
    assert_eq!(code(&run(&["coupling", "--models", "20x20", "--max-dim", "100"])), 4);
    let missing = dir.path().join("missing/dir/report.json");
    assert_eq!(code(&run(&["regular", "--orders", "5", "--out", missing.to_str().unwrap()])), 5);
}
