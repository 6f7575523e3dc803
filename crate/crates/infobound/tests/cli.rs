//! Integration tests for the command-line surface: argument handling,
//! output formats, and exit codes (0 holds, 1 ordering/soundness failure,
//! 2 parse/validation error).

use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infobound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_instance(json: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(json.as_bytes()).unwrap();
    f.flush().unwrap();
    f
}

const INDEPENDENT_2X2: &str =
    r#"{"nx": 2, "ny": 2, "pmf": [0.25, 0.25, 0.25, 0.25], "event": [1, 0, 0, 1]}"#;

fn identity_coupling_4() -> String {
    let mut pmf = vec![0.0; 16];
    let mut event = vec![0; 16];
    for i in 0..4 {
        pmf[i * 4 + i] = 0.25;
        event[i * 4 + i] = 1;
    }
    format!(
        r#"{{"nx": 4, "ny": 4, "pmf": {pmf:?}, "event": {event:?}}}"#
    )
}

/// Value in the second column of a `label  value` line.
fn field(out: &str, label: &str) -> f64 {
    for line in out.lines() {
        if let Some(rest) = line.strip_prefix(label) {
            let token = rest.split_whitespace().next().unwrap();
            return match token {
                "inf" => f64::INFINITY,
                t => t.parse().unwrap(),
            };
        }
    }
    panic!("missing field {label} in:\n{out}");
}

#[test]
fn measures_of_independent_instance_are_zero() {
    let f = write_instance(INDEPENDENT_2X2);
    let out = run(&["measures", f.path().to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(field(&text, "mutual_information").abs() < 1e-12);
    assert!(field(&text, "lautum_information").abs() < 1e-12);
    assert!(field(&text, "max_leakage").abs() < 1e-12);
    assert!(field(&text, "j_infinity").abs() < 1e-12);
}

#[test]
fn measures_of_identity_coupling() {
    let f = write_instance(&identity_coupling_4());
    let out = run(&["measures", f.path().to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    let ln4 = 4.0f64.ln();
    // Printed at 9 significant digits, so compare at that resolution.
    assert!((field(&text, "mutual_information") - ln4).abs() < 1e-8);
    assert_eq!(field(&text, "lautum_information"), f64::INFINITY);
    assert!((field(&text, "max_leakage") - ln4).abs() < 1e-8);
    assert!((field(&text, "j_infinity") - 2.0).abs() < 1e-12);
}

#[test]
fn measures_of_malformed_json_exits_2() {
    let f = write_instance("{not json");
    let out = run(&["measures", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bound_prints_saturated_leakage_row() {
    let f = write_instance(&identity_coupling_4());
    let out = run(&["bound", f.path().to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    let leak = text
        .lines()
        .find(|l| l.starts_with("leakage"))
        .expect("leakage row");
    let cols: Vec<&str> = leak.split_whitespace().collect();
    assert_eq!(cols[2].parse::<f64>().unwrap(), 1.0);
    assert_eq!(cols[3], "yes");
}

#[test]
fn bound_without_event_exits_2() {
    let f = write_instance(r#"{"nx": 2, "ny": 2, "pmf": [0.25, 0.25, 0.25, 0.25]}"#);
    let out = run(&["bound", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bound_single_method_on_independent_instance() {
    let f = write_instance(INDEPENDENT_2X2);
    let out = run(&[
        "bound",
        f.path().to_str().unwrap(),
        "--method",
        "prop1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("prop1"))
        .collect();
    assert_eq!(rows.len(), 1);
    // Zero divergence: the bound equals the exact reference probability.
    let value: f64 = rows[0].split_whitespace().nth(2).unwrap().parse().unwrap();
    assert_eq!(value, 0.5);
    assert!(!text.lines().any(|l| l.starts_with("cor1")));
}

#[test]
fn bound_beta_override_changes_the_variational_rows() {
    let f = write_instance(INDEPENDENT_2X2);
    let row = |args: &[&str]| -> f64 {
        let out = run(args);
        assert!(out.status.success());
        stdout(&out)
            .lines()
            .find(|l| l.starts_with("eq9"))
            .unwrap()
            .split_whitespace()
            .nth(1)
            .unwrap()
            .parse()
            .unwrap()
    };
    let path = f.path().to_str().unwrap();
    let default = row(&["bound", path, "--method", "eq9"]);
    let overridden = row(&["bound", path, "--method", "eq9", "--beta", "5.0"]);
    assert_ne!(default, overridden);
    let out = run(&["bound", path, "--beta", "-1.0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bound_rejects_unknown_method_and_small_alpha() {
    let f = write_instance(&identity_coupling_4());
    let out = run(&[
        "bound",
        f.path().to_str().unwrap(),
        "--method",
        "nonsense",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["bound", f.path().to_str().unwrap(), "--alpha", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_small_suite_is_sound_and_reproducible() {
    let args = ["verify", "--count", "1000", "--seed", "42"];
    let a = run(&args);
    assert!(a.status.success(), "{}", stdout(&a));
    let b = run(&args);
    assert_eq!(stdout(&a), stdout(&b));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(summary["violations_total"], 0);
    assert_eq!(summary["methods"].as_array().unwrap().len(), 10);
}

#[test]
fn verify_rejects_zero_count() {
    let out = run(&["verify", "--count", "0", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_rejects_bad_density() {
    let out = run(&[
        "verify", "--count", "10", "--seed", "1", "--density", "1.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fig1_emits_the_requested_grid() {
    let out = run(&["fig1", "--k", "2", "--steps", "40"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,d,prop1,cor1,eq7,eq9_default_beta,eq11"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 40);
    for row in &rows {
        let (q, d, prop1, cor1) = (row[0], row[1], row[2], row[3]);
        // Columns carry 9 significant digits.
        assert!((d - (-2.0 * (1.0 - q).ln())).abs() < 1e-7);
        assert!(prop1 <= cor1 + 1e-9, "dominance must hold on every row");
        for &v in &row[2..] {
            assert!((0.0..=1.0).contains(&v), "columns are clamped");
        }
    }
    // Small q: d is about 2q and every divergence bound stays small.
    let first = &rows[0];
    assert!((first[1] - 2.0 * first[0]).abs() < 1e-6);
    assert!(first[2] < 0.01);
}

#[test]
fn fig1_rejects_bad_parameters() {
    assert_eq!(run(&["fig1", "--k", "5"]).status.code(), Some(2));
    assert_eq!(
        run(&["fig1", "--k", "2", "--qmin", "0.4", "--qmax", "0.2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn ratio_emits_one_row_per_q() {
    let out = run(&["ratio", "--q", "0.01"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2);
    assert!(text.ends_with('\n'));
}

#[test]
fn ratio_rejects_out_of_range_q() {
    let out = run(&["ratio", "--q", "0.6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn remark1_ordering_holds_for_small_q() {
    for q in ["1e-3", "1e-6"] {
        let out = run(&["remark1", "--q", q]);
        assert!(out.status.success(), "q={q}");
        let text = stdout(&out);
        assert!(field(&text, "eq11 raw") > 1.0);
        assert!(field(&text, "eq7") < 1.0);
        assert!(field(&text, "cor1") < 1.0);
        assert!(text.contains("ordering            holds"));
    }
}

#[test]
fn remark1_rejects_large_q() {
    let out = run(&["remark1", "--q", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}
