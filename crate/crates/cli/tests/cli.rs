use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clustercat")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).expect("utf8")
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).expect("valid JSON")
}

#[test]
fn roots_g2_json_lists_twelve_roots() {
    let v = json(&["roots", "--type", "G2", "--format", "json"]);
    assert_eq!(v["roots"].as_array().unwrap().len(), 12);
    let pos: Vec<Vec<i64>> = serde_json::from_value(v["positive_roots"].clone()).unwrap();
    assert_eq!(pos, [[1, 0], [0, 1], [1, 1], [2, 1], [3, 1], [3, 2]]);
    assert_eq!(v["h"], 6);
}

#[test]
fn roots_text_and_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b3.json");
    std::fs::write(&path, "[[2,-1,0],[-1,2,-2],[0,-1,2]]").unwrap();
    let text = stdout(&["roots", "--matrix-file", path.to_str().unwrap(), "--format", "text"]);
    assert!(text.contains("positive roots 9"), "{text}");
    assert!(text.contains("group order 48"), "{text}");
}

#[test]
fn group_json_and_dot() {
    let v = json(&["group", "--type", "A3"]);
    assert_eq!(v["order"], 24);
    assert_eq!(v["reduced_words_of_w0"], "16");
    let dot = stdout(&["group", "--type", "A2", "--format", "dot"]);
    assert!(dot.starts_with("digraph weak_order"));
    assert_eq!(dot.matches("->").count(), 6);
}

#[test]
fn mutate_detects_types_and_respects_budget() {
    let v = json(&["mutate", "--type", "D4", "--format", "json"]);
    assert_eq!((v["type"].as_str(), v["seeds"].as_u64()), (Some("D4"), Some(50)));
    assert_eq!(v["variables"].as_array().unwrap().len(), 16);
    let dot = stdout(&["mutate", "--type", "A2", "--format", "dot"]);
    assert_eq!(dot.matches(" -- ").count(), 5);
    assert_eq!(run(&["mutate", "--type", "A3", "--budget-seeds", "3"]).status.code(), Some(3));
}

#[test]
fn mutate_reads_exchange_matrices_and_seed_files() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("b.json");
    std::fs::write(&b, "[[0,1],[-1,0]]").unwrap();
    let text = stdout(&["mutate", "--matrix-file", b.to_str().unwrap(), "--format", "text"]);
    assert!(text.contains("type A2") && text.contains("seeds 5"), "{text}");
    let seed = dir.path().join("seed.json");
    std::fs::write(&seed, r#"{"m":3,"n":2,"btilde":[[0,1],[-1,0],[1,0]],"cluster":["x","y"],"frozen":["q"]}"#).unwrap();
    let v: Value = serde_json::from_str(&stdout(&["mutate", "--matrix-file", seed.to_str().unwrap()])).unwrap();
    assert_eq!(v["seeds"], 5);
    let affine = dir.path().join("affine.json");
    std::fs::write(&affine, "[[0,2],[-2,0]]").unwrap();
    assert_eq!(run(&["mutate", "--matrix-file", affine.to_str().unwrap(), "--budget-seeds", "40"]).status.code(), Some(3));
}

#[test]
fn assoc_off_json_text() {
    let off = stdout(&["assoc", "--type", "A3", "--format", "off"]);
    let mut lines = off.lines();
    assert_eq!(lines.next(), Some("OFF"));
    assert_eq!(lines.next(), Some("14 9 21"));
    let v = json(&["assoc", "--type", "B2", "--rng-seed", "7"]);
    assert_eq!(v["polytope"]["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(v["checks"]["uncovered"], 0);
    let text = stdout(&["assoc", "--type", "C3", "--format", "text"]);
    assert!(text.contains("vertices 20") && text.contains("h-vector [1, 9, 9, 1]"), "{text}");
}

#[test]
fn catalan_formats() {
    let csv = stdout(&["catalan", "--type", "B3"]);
    assert!(csv.starts_with("type,interpretation,k,observed,expected,match\n"));
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")), "{csv}");
    assert!(csv.contains("B3,shi,total,20,20,true"));
    let v = json(&["catalan", "--type", "G2", "--format", "json"]);
    assert_eq!(v["type"], "G2");
    assert!(stdout(&["catalan", "--type", "A3", "--format", "text"]).contains("torus: 14 (expected 14)"));
}

#[test]
fn wiring_reports() {
    let text = stdout(&["wiring"]);
    assert!(text.contains("34 isotopy classes"), "{text}");
    assert!(text.contains("18 classes of degree 4") && text.contains("16 classes of degree 3"));
    assert!(text.contains("16 cluster variables, 50 clusters, type D4"));
    let v = json(&["wiring", "--type", "A2", "--format", "json"]);
    assert_eq!(v["gl3"]["seeds"], 50);
    let dot = stdout(&["wiring", "--type", "A1", "--format", "dot"]);
    assert!(dot.starts_with("graph wiring"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["roots"][..],
        &["roots", "--type", "Q3"],
        &["roots", "--type", "A2", "--format", "off"],
        &["assoc", "--type", "A2", "--format", "off"],
        &["assoc", "--type", "A1xA1"],
        &["wiring", "--type", "D4"],
        &["mutate", "--type", "A2", "--budget-seeds", "0"],
        &["verify", "--quick", "--extended"],
        &["frobnicate"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn verify_quick_is_deterministic_and_writes_out() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    for p in [&a, &b] {
        let out = run(&["verify", "--quick", "--rng-seed", "11", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("criterion")).count(), 13);
    assert!(text.ends_with("13/13 criteria passed\n"));
}

#[test]
fn verify_json_and_budget() {
    let v = json(&["verify", "--format", "json"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 13);
    assert_eq!(run(&["verify", "--budget-seeds", "3"]).status.code(), Some(3));
}

#[test]
fn verify_extended_includes_e6() {
    let text = stdout(&["verify", "--extended"]);
    assert!(text.contains("E6: 833 unimodular facets"), "{text}");
}

#[test]
fn same_seed_same_bytes() {
    for args in [&["assoc", "--type", "A3", "--rng-seed", "5"][..], &["wiring", "--format", "json", "--rng-seed", "5"], &["mutate", "--type", "B3"]] {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
}
