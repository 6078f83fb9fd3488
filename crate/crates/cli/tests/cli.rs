//! End-to-end runs of the `thetastab` binary on the fixture lattices.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thetastab")).args(args).output().expect("binary runs")
}

fn run_on(cmd: &str, lattice: &str, extra: &[&str]) -> Output {
    let path = fixture(lattice);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn structured(cmd: &str, lattice: &str, extra: &[&str]) -> Value {
    let mut args = extra.to_vec();
    args.extend_from_slice(&["--format", "structured"]);
    let o = run_on(cmd, lattice, &args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn check_reports_semistable_and_unstable() {
    let o = run_on("check", "trivial.lattice", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("semistable"));

    let o = run_on("check", "o2_o.lattice", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("witness O(2)"));
}

#[test]
fn canonical_of_two_lines_text() {
    let o = run_on("canonical", "o2_o.lattice", &[]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("F > O(2)  weights (-1, 1)"));
    assert!(text.contains("L = 2, b = 2"));
}

#[test]
fn canonical_of_three_lines() {
    let v = structured("canonical", "example_nonconvex.lattice", &[]);
    assert_eq!(v["weights"], serde_json::json!([-2, -1, 3]));
    assert_eq!(v["nu"]["numerator"], "14");
    assert_eq!(v["nu"]["norm_sq"], "14");
}

#[test]
fn pair_canonical_reproduces_nonconvex_example() {
    let v = structured("pair-canonical", "example_nonconvex.lattice", &["--delta", "0"]);
    assert_eq!(v["chain"], serde_json::json!(["F", "O(5)+O", "O(5)"]));
    assert_eq!(v["weights"], serde_json::json!([-1, 0, 3]));
    assert_eq!(v["method"], "ClosedForm");
    let pieces: Vec<(String, i64)> = v["graded_pieces"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| (g["hilbert"].as_str().unwrap().to_string(), g["weight"].as_i64().unwrap()))
        .collect();
    let expect = [("n + 6", 3), ("n + 1", 0), ("n + 2", -1)];
    assert_eq!(pieces, expect.map(|(p, w)| (p.to_string(), w)));
    assert_eq!(v["nu"]["numerator"], "10");
    assert_eq!(v["nu"]["norm_sq"], "10");
}

#[test]
fn nu_of_explicit_chain() {
    let v = structured("nu", "o2_o.lattice", &["--chain", "F,O(2)", "--weights", "-1,1"]);
    assert_eq!(v["weight"], "2");
    assert_eq!(v["b"], "2");
}

#[test]
fn sweep_marks_walls() {
    let o = run_on("sweep", "o_o1_pair.lattice", &["--sweep-deltas", "1/2,1,2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].contains("unstable") && lines[0].contains("O(1)"));
    assert!(lines[1].starts_with("delta = 1: semistable") && lines[1].contains("wall"));
    assert!(lines[2].contains("witness O ") && lines[2].contains("wall"));
}

#[test]
fn pair_check_zero_map_and_negative_delta() {
    let o = run_on("pair-check", "zero_map_pair.lattice", &["--delta", "n"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("unstable"));

    let o = run_on("pair-check", "o_o1_pair.lattice", &["--delta", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("unstable"));
}

#[test]
fn oracle_writes_csv() {
    let dir = std::env::temp_dir().join(format!("thetastab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("rows.csv");
    let o = run_on("oracle", "o2_o.lattice", &["--bound", "2", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let body = std::fs::read_to_string(&csv).unwrap();
    assert!(body.lines().count() > 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn structured_output_is_deterministic() {
    for (cmd, lat, extra) in [
        ("hn", "o2_o1_o.lattice", vec![]),
        ("canonical", "p2_o1_o.lattice", vec![]),
        ("pair-canonical", "example_nonconvex.lattice", vec!["--delta", "0"]),
        ("polytope", "example_nonconvex.lattice", vec!["--chain", "F,O(5)+O(1),O(5)"]),
    ] {
        let a = structured(cmd, lat, &extra);
        let b = structured(cmd, lat, &extra);
        assert_eq!(a, b, "{cmd} on {lat}");
    }
}

#[test]
fn domain_errors_exit_one() {
    let o = run_on("hn", "ambiguous.lattice", &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error[AmbiguousHN]"));

    let o = run_on("check", "cycle.lattice", &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error[CycleInRelation]"));

    let o = run_on("canonical", "trivial.lattice", &[]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn input_errors_exit_two() {
    let o = run_on("check", "malformed.lattice", &[]);
    assert_eq!(o.status.code(), Some(2));

    let o = run_on("check", "does_not_exist.lattice", &[]);
    assert_eq!(o.status.code(), Some(2));

    let o = run_on("pair-check", "o_o1_pair.lattice", &["--delta", "n^^2"]);
    assert_eq!(o.status.code(), Some(2));
}
