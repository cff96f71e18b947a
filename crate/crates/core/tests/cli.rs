use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;

use schottky::cli::{parse_cloud_csv, run, Outcome, EXIT_INPUT, EXIT_PASS, EXIT_VIOLATION};

fn schottky(args: &[&str]) -> Outcome {
    run(std::iter::once("schottky").chain(args.iter().copied()))
}

fn write(dir: &TempDir, name: &str, value: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn report(o: &Outcome) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", o.stdout))
}

fn reference_file(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("reference.json");
    let o = schottky(&["example", "classical-rank-g", "--g", "2", "--spacing", "4", "--out", p(&path)]);
    assert_eq!(o.code, EXIT_PASS, "{}", o.stderr);
    path
}

fn circle(id: &str, re: f64, r: f64) -> Value {
    json!({ "id": id, "center": [re, 0.0], "radius": r })
}

#[test]
fn reference_example_is_the_reference_group() {
    let dir = TempDir::new().unwrap();
    let path = reference_file(&dir);
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let centers: Vec<f64> = file["circles"].as_array().unwrap().iter().map(|c| c["center"][0].as_f64().unwrap()).collect();
    assert_eq!(centers, vec![-6.0, -2.0, 6.0, 2.0]);
    assert!(file["pairings"].as_array().unwrap().iter().all(|p| p["map"] == "auto-reflection"));

    let o = schottky(&["validate", p(&path)]);
    assert_eq!(o.code, EXIT_PASS, "{}", o.stderr);
    let r = report(&o);
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["params"]["epsilon"].as_f64(), Some(1e-3));
    assert!(o.stdout.contains("e-3"), "floats use 17-digit exponent form");
}

#[test]
fn schedule_examples_round_trip_through_validate() {
    let dir = TempDir::new().unwrap();
    for args in [
        vec!["unit-circle-counterexample", "--levels", "16"],
        vec!["accumulating-point", "--re", "0", "--im", "0", "--levels", "8"],
        vec!["classical-rank-g", "--g", "3"],
    ] {
        let path = dir.path().join(format!("{}.json", args[0]));
        let mut full = vec!["example"];
        full.extend(&args);
        full.extend(["--out", p(&path)]);
        assert_eq!(schottky(&full).code, EXIT_PASS);
        let o = schottky(&["validate", p(&path)]);
        assert_eq!(o.code, EXIT_PASS, "{args:?}: {}", o.stderr);
    }
}

#[test]
fn example_rejects_unknown_names_and_flags() {
    let o = schottky(&["example", "no-such-family"]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("unknown family"));
    assert_eq!(schottky(&["example", "unit-circle-counterexample", "--g", "2"]).code, EXIT_INPUT);
    assert_eq!(schottky(&["example", "classical-rank-g", "--spacing", "3"]).code, EXIT_INPUT);
    assert_eq!(schottky(&["example", "accumulating-point", "--levels", "0"]).code, EXIT_INPUT);
}

#[test]
fn concentric_circles_fail_s2() {
    let dir = TempDir::new().unwrap();
    let file = json!({
        "kind": "finite",
        "circles": [
            { "id": "a", "center": [0.0, 0.0], "radius": 1.0 },
            { "id": "b", "center": [0.0, 0.0], "radius": 2.0 },
            { "id": "c", "center": [0.0, 0.0], "radius": 3.0 },
            { "id": "d", "center": [0.0, 0.0], "radius": 4.0 }
        ],
        "pairings": [
            { "from": "a", "to": "b", "map": "auto-general" },
            { "from": "c", "to": "d", "map": "auto-general" }
        ]
    });
    let path = write(&dir, "concentric.json", &file);
    let o = schottky(&["validate", p(&path)]);
    assert_eq!(o.code, EXIT_VIOLATION, "{}", o.stderr);
    let r = report(&o);
    assert_eq!(r["verdict"], "fail");
    assert_eq!(r["orientation_failure"]["kind"], "s2");
}

#[test]
fn uncertified_matrix_is_an_input_error_with_certificate() {
    let dir = TempDir::new().unwrap();
    let file = json!({
        "kind": "finite",
        "circles": [circle("C1", -3.0, 1.0), circle("C1'", 3.0, 1.0)],
        "pairings": [{ "from": "C1", "to": "C1'", "map": { "matrix": [[2.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.5, 0.0]] } }]
    });
    let path = write(&dir, "bad.json", &file);
    let o = schottky(&["validate", p(&path)]);
    assert_eq!(o.code, EXIT_INPUT);
    let r = report(&o);
    assert_eq!(r["error"]["detail"]["valid"], false);
    assert!(r["error"]["detail"]["boundary_error"].as_f64().unwrap() > 0.1);

    // check loads it anyway and reports the broken group
    let o = schottky(&["check", p(&path), "--word-len", "3", "--samples", "50"]);
    assert_eq!(o.code, EXIT_VIOLATION, "{}", o.stderr);
    let r = report(&o);
    assert_eq!(r["validation"]["pairings"], "fail");
    assert!(r["invariance"]["violations_total"].as_u64().unwrap() > 0);
}

#[test]
fn the_correct_matrix_loads() {
    let dir = TempDir::new().unwrap();
    // (3z + 8)/(z + 3) pairs |z + 3| = 1 with |z - 3| = 1
    let file = json!({
        "kind": "finite",
        "circles": [circle("C1", -3.0, 1.0), circle("C1'", 3.0, 1.0)],
        "pairings": [{ "from": "C1", "to": "C1'", "map": { "matrix": [[3.0, 0.0], [8.0, 0.0], [1.0, 0.0], [3.0, 0.0]] } }]
    });
    let path = write(&dir, "good.json", &file);
    assert_eq!(schottky(&["validate", p(&path)]).code, EXIT_PASS);
}

#[test]
fn parse_errors_name_the_json_path() {
    let dir = TempDir::new().unwrap();
    let file = json!({
        "kind": "finite",
        "circles": [circle("C1", -3.0, 1.0), { "id": "C1'", "center": [3.0, "x"], "radius": 1.0 }],
        "pairings": []
    });
    let path = write(&dir, "typo.json", &file);
    let o = schottky(&["validate", p(&path)]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("circles[1].center"), "{}", o.stderr);

    let unknown = write(&dir, "unknown.json", &json!({
        "kind": "finite",
        "circles": [circle("C1", -3.0, 1.0), circle("C1'", 3.0, 1.0)],
        "pairings": [{ "from": "C1", "to": "C2", "map": "auto-reflection" }]
    }));
    let o = schottky(&["validate", p(&unknown)]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("pairings[0].to"), "{}", o.stderr);

    let params = write(&dir, "params.json", &json!({
        "kind": "schedule",
        "schedule": { "family": "accumulating-point", "params": { "re": 0.0, "bogus": 1 }, "levels": 4 }
    }));
    let o = schottky(&["validate", p(&params)]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("schedule.params"), "{}", o.stderr);

    let missing = dir.path().join("missing.json");
    assert_eq!(schottky(&["validate", p(&missing)]).code, EXIT_INPUT);
    assert_eq!(schottky(&["validate"]).code, EXIT_INPUT);
}

#[test]
fn limitset_is_deterministic_across_threads() {
    let dir = TempDir::new().unwrap();
    let path = reference_file(&dir);
    let one = schottky(&["limitset", p(&path), "--eps", "1e-2", "--threads", "1"]);
    let eight = schottky(&["limitset", p(&path), "--eps", "1e-2", "--threads", "8"]);
    assert_eq!(one.code, EXIT_PASS, "{}", one.stderr);
    assert_eq!(one.stdout, eight.stdout);

    let rows = parse_cloud_csv(&one.stdout).unwrap();
    assert!(!rows.truncated);
    let mut sorted = rows.entries.clone();
    sorted.sort_by(|a, b| a.word.cmp(&b.word));
    assert_eq!(sorted, rows.entries);
    assert!(one.stdout.starts_with("re,im,word,depth,disk_diameter\n"));
}

#[test]
fn limitset_rank_one_and_budget() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("rank1.json");
    schottky(&["example", "classical-rank-g", "--g", "1", "--out", p(&path)]);
    // two first-level disks, each its own leaf at a coarse epsilon
    let o = schottky(&["limitset", p(&path), "--eps", "1.5"]);
    let rows = parse_cloud_csv(&o.stdout).unwrap();
    assert_eq!(rows.entries.len(), 2);
    let words: Vec<String> = rows.entries.iter().map(|e| e.word.to_string()).collect();
    assert_eq!(words, vec!["1", "-1"]);

    // rank one has two words per length, so the budget needs rank two
    let o = schottky(&["limitset", p(&path), "--eps", "1e-9"]);
    assert_eq!(parse_cloud_csv(&o.stdout).unwrap().entries.len(), 2);
    let path = reference_file(&dir);
    let o = schottky(&["limitset", p(&path), "--eps", "1e-9", "--max-points", "5"]);
    assert_eq!(o.code, EXIT_PASS);
    assert!(o.stdout.ends_with("# truncated=true\n"));
    assert!(o.stderr.contains("budget exceeded"));
    let rows = parse_cloud_csv(&o.stdout).unwrap();
    assert!(rows.truncated);
    assert!(rows.entries.len() <= 5);
}

#[test]
fn check_reference_group_passes() {
    let dir = TempDir::new().unwrap();
    let path = reference_file(&dir);
    let o = schottky(&["check", p(&path), "--suite", "all", "--word-len", "6", "--samples", "100", "--seed", "7"]);
    assert_eq!(o.code, EXIT_PASS, "{}", o.stderr);
    let r = report(&o);
    assert_eq!(r["free"]["violations_total"], 0);
    assert_eq!(r["invariance"]["violations_total"], 0);
    assert_eq!(r["fundamental"]["successes"], 100);
    assert_eq!(r["params"]["seed"], 7);

    // same flags, same bytes
    let again = schottky(&["check", p(&path), "--suite", "all", "--word-len", "6", "--samples", "100", "--seed", "7"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn check_counterexample_probe_reports_crossing() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("ce.json");
    schottky(&["example", "unit-circle-counterexample", "--levels", "16", "--out", p(&path)]);
    let o = schottky(&["check", p(&path), "--suite", "probe", "--level", "16"]);
    assert_eq!(o.code, EXIT_PASS, "{}", o.stderr);
    let r = report(&o);
    assert_eq!(r["probe"]["crossing"]["word"], "1");
    assert!(o.stderr.contains("probe: word 1"));
}

#[test]
fn help_and_version_exit_zero() {
    let o = schottky(&["--help"]);
    assert_eq!(o.code, EXIT_PASS);
    assert!(o.stdout.contains("limitset"));
    assert_eq!(schottky(&["--version"]).code, EXIT_PASS);
    assert_eq!(schottky(&["frobnicate"]).code, EXIT_INPUT);
}

#[test]
fn binary_forwards_exit_codes() {
    let dir = TempDir::new().unwrap();
    let path = reference_file(&dir);
    let bin = env!("CARGO_BIN_EXE_schottky");
    let out = Command::new(bin).args(["validate", p(&path)]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    let out = Command::new(bin).args(["validate", "/nonexistent.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
}
