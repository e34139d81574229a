//! End to end tests driving the compiled binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_burnside"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

/// Parses histogram.csv rows; words here never contain commas (n <= 9).
fn histogram_counts(path: &Path) -> Vec<(String, u64)> {
    let text = fs::read_to_string(path).expect("histogram readable");
    text.lines()
        .skip(1)
        .map(|line| {
            let (word, count) = line.split_once(',').expect("two columns");
            (word.to_string(), count.parse().expect("count parses"))
        })
        .collect()
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).expect("file readable")).expect("valid json")
}

#[test]
fn histogram_reproducible_from_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let out = run(&[
        "simulate",
        "--n",
        "3",
        "--q",
        "2",
        "--steps",
        "1000",
        "--seed",
        "42",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    let manifest = read_json(&a.join("manifest.json"));
    let out2 = run(&[
        "simulate",
        "--n",
        &manifest["n"].to_string(),
        "--q",
        &manifest["q"].to_string(),
        "--seed",
        &manifest["seed"].to_string(),
        "--steps",
        &manifest["steps"].to_string(),
        "--start",
        manifest["start"].as_str().unwrap(),
        "--chains",
        &manifest["chains"].to_string(),
        "--format",
        manifest["format"].as_str().unwrap(),
        "--out",
        b.to_str().unwrap(),
    ]);
    assert!(out2.status.success(), "{}", stderr(&out2));
    assert_eq!(
        fs::read(a.join("histogram.csv")).unwrap(),
        fs::read(b.join("histogram.csv")).unwrap()
    );

    let rows = histogram_counts(&a.join("histogram.csv"));
    assert_eq!(rows.len(), 6);
    assert_eq!(rows.iter().map(|(_, c)| *c).sum::<u64>(), 1001);
}

#[test]
fn large_q_run_stays_in_its_p_class() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "simulate",
        "--n",
        "4",
        "--q",
        "1997",
        "--steps",
        "1000",
        "--start",
        "3214",
        "--seed",
        "5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = histogram_counts(&dir.path().join("histogram.csv"));
    assert_eq!(rows.len(), 24);
    assert_eq!(rows.iter().map(|(_, c)| *c).sum::<u64>(), 1001);
    let visited: Vec<&str> = rows
        .iter()
        .filter(|(_, c)| *c > 0)
        .map(|(w, _)| w.as_str())
        .collect();
    assert_eq!(visited, ["3214", "3241", "3421"]);
}

#[test]
fn composite_field_order_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "simulate",
        "--n",
        "3",
        "--q",
        "4",
        "--steps",
        "10",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("prime"), "{}", stderr(&out));
}

#[test]
fn zero_steps_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "simulate",
        "--n",
        "3",
        "--q",
        "2",
        "--steps",
        "0",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("steps"), "{}", stderr(&out));
}

#[test]
fn oversized_state_space_is_a_capacity_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "exact",
        "--n",
        "4",
        "--q",
        "11",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    assert!(
        stderr(&out).contains("enumeration limit"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn exact_check_passes_against_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "exact",
        "--n",
        "3",
        "--q",
        "2",
        "--check",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("PASS"), "{}", stdout(&out));
}

#[test]
fn exact_writes_rational_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "exact",
        "--n",
        "2",
        "--q",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    let lumped = read_json(&dir.path().join("lumped.json"));
    assert_eq!(lumped["labels"], serde_json::json!(["12", "21"]));
    assert_eq!(
        lumped["entries"],
        serde_json::json!([["2/3", "1/3"], ["1/3", "2/3"]])
    );

    // three flags over F_2: the fixed line, then the q = 2 points of the big cell
    let kernel = read_json(&dir.path().join("kernel.json"));
    let labels = kernel["labels"].as_array().unwrap();
    assert_eq!(labels.len(), 3);
    for row in kernel["entries"].as_array().unwrap() {
        assert_eq!(row.as_array().unwrap().len(), 3);
    }
}

#[test]
fn spectrum_reports_exact_gap() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "exact",
        "--n",
        "3",
        "--q",
        "2",
        "--spectrum",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(
        stdout(&out).contains("gap eigenvalue 2/5"),
        "{}",
        stdout(&out)
    );
    let report = read_json(&dir.path().join("spectrum.json"));
    assert_eq!(report["exact_checks_pass"], serde_json::json!(true));
    assert_eq!(report["gap_eigenvalue"], serde_json::json!("2/5"));
}

#[test]
fn green_prints_polynomials_in_q() {
    let out = run(&["green", "2,1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "2*q + 1");

    let out = run(&["green", "1,1,1"]);
    assert_eq!(stdout(&out).trim(), "q^3 + 2*q^2 + 2*q + 1");
}

#[test]
fn rsk_prints_both_tableaux() {
    let out = run(&["rsk", "213"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("P: [[1,3],[2]]"), "{text}");
    assert!(text.contains("Q: [[1,3],[2]]"), "{text}");
    assert!(text.contains("shape: 2,1"), "{text}");

    let out = run(&["rsk", "123"]);
    assert!(stdout(&out).contains("P: [[1,2,3]]"), "{}", stdout(&out));
}

#[test]
fn estimate_cell_recovers_singleton_cell() {
    let out = run(&["estimate-cell", "123", "--q", "1997", "--samples", "200"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(
        stdout(&out).contains("estimated cell size 1.0"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn trajectories_and_json_histogram_for_multiple_chains() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "simulate",
        "--n",
        "3",
        "--q",
        "5",
        "--steps",
        "6",
        "--chains",
        "2",
        "--retain-flags",
        "--format",
        "json",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    let rows = read_json(&dir.path().join("histogram.json"));
    let total: u64 = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["count"].as_u64().unwrap())
        .sum();
    assert_eq!(total, 14); // two chains, seven visits each

    for name in ["trajectory-000.csv", "trajectory-001.csv"] {
        let text = fs::read_to_string(dir.path().join(name)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 8); // header plus steps + 1 rows
        assert_eq!(lines[0], "step,word,move_type,flag");
        assert!(lines[1].starts_with("0,321,,"), "{}", lines[1]);
    }
    assert_ne!(
        fs::read(dir.path().join("trajectory-000.csv")).unwrap(),
        fs::read(dir.path().join("trajectory-001.csv")).unwrap(),
        "chains must be independently seeded"
    );
}

#[test]
fn verify_reports_every_criterion() {
    let out = run(&["verify"]);
    let text = stdout(&out);
    let criterion_lines: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("criterion"))
        .collect();
    assert_eq!(criterion_lines.len(), 11, "{text}");
    let passed = criterion_lines
        .iter()
        .filter(|l| l.contains(" PASS ("))
        .count();
    let failed = criterion_lines
        .iter()
        .filter(|l| l.contains(" FAIL ("))
        .count();
    assert_eq!(passed + failed, 11, "{text}");
    assert!(
        text.lines().last().unwrap().contains("criteria passed"),
        "{text}"
    );
    let expected = if failed == 0 { Some(0) } else { Some(1) };
    assert_eq!(out.status.code(), expected, "{text}");
}
