use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn endoq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_endoq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn private_game_of_example_two() {
    let p = fixture("example2.json");
    let o = endoq(&["game", "--problem", p.to_str().unwrap(), "--family", "private", "--variant", "swaps"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["kind"], "value");
    assert_eq!(v["worth"]["2,4,5"], "38");
    let o = endoq(&["game", "--problem", p.to_str().unwrap(), "--family", "private", "--variant", "no-swaps"]);
    assert_eq!(json(&o)["worth"]["2,4,5"], "36");
}

#[test]
fn public_game_of_example_three() {
    let p = fixture("example3.json");
    let o = endoq(&["game", "--problem", p.to_str().unwrap(), "--family", "public"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["worth"]["1,2,3,4"], "37");
}

#[test]
fn singleton_queueing_game() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "one.json", r#"{"weights": ["7/2"], "machine_cost": 3}"#);
    let o = endoq(&["game", "--problem", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["worth"], serde_json::json!({"1": "13/2"}));
    let text = stdout(&endoq(&["game", "--problem", p.to_str().unwrap(), "--format", "text"]));
    assert!(text.contains("{1}\t13/2"), "{text}");
}

#[test]
fn other_families_build() {
    let p = fixture("example2.json");
    for family in ["queueing", "reduced", "relaxed"] {
        let o = endoq(&["game", "--problem", p.to_str().unwrap(), "--family", family]);
        assert_eq!(o.status.code(), Some(0), "{family}");
        assert_eq!(json(&o)["worth"].as_object().unwrap().len(), 31);
    }
}

#[test]
fn core_exit_codes() {
    let p2 = fixture("example2.json");
    let o = endoq(&["core", "--problem", p2.to_str().unwrap(), "--family", "private"]);
    assert_eq!(o.status.code(), Some(10));
    assert_eq!(json(&o)["verdict"], "empty");

    let p3 = fixture("example3.json");
    let o = endoq(&["core", "--problem", p3.to_str().unwrap(), "--family", "public", "--format", "text"]);
    assert_eq!(o.status.code(), Some(10));
    assert!(stdout(&o).starts_with("core empty"));

    let dir = tempfile::tempdir().unwrap();
    let p1 = write(dir.path(), "e1.json", r#"{"weights": [20, 15, 10, 5], "machine_cost": 50}"#);
    let o = endoq(&["core", "--problem", p1.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "nonempty");
    assert_eq!(v["allocation"].as_array().unwrap().len(), 4);
}

#[test]
fn malformed_input_exits_two_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("bad.json", "{ not json"),
        ("neg.json", r#"{"weights": [1, -2], "machine_cost": 1}"#),
        ("extra.json", r#"{"weights": [1], "machine_cost": 1, "colour": "red"}"#),
    ];
    for (name, text) in cases {
        let p = write(dir.path(), name, text);
        let o = endoq(&["game", "--problem", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{name}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
    let missing = dir.path().join("missing.json");
    assert_eq!(endoq(&["core", "--problem", missing.to_str().unwrap()]).status.code(), Some(2));

    let p = write(dir.path(), "plain.json", r#"{"weights": [3, 2], "machine_cost": 1}"#);
    let o = endoq(&["game", "--problem", p.to_str().unwrap(), "--family", "private"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("initial"));
}

#[test]
fn cap_exceeded_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "nine.json",
        r#"{"weights": [9, 8, 7, 6, 5, 4, 3, 2, 1], "machine_cost": 4,
            "initial": {"machines": 1, "order": [1, 2, 3, 4, 5, 6, 7, 8, 9]}}"#,
    );
    let o = endoq(&["game", "--problem", p.to_str().unwrap(), "--family", "private"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
    let o = endoq(&["regimes", "--problem", p.to_str().unwrap(), "--max-n", "4"]);
    assert_eq!(o.status.code(), Some(3));
    let o = endoq(&["oracle-check", "--max-n", "40"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn regimes_of_small_problems() {
    let dir = tempfile::tempdir().unwrap();
    let one = write(dir.path(), "one.json", r#"{"weights": [4], "machine_cost": 0}"#);
    let v = json(&endoq(&["regimes", "--problem", one.to_str().unwrap()]));
    assert_eq!(v["regimes"].as_array().unwrap().len(), 1);

    let two = write(dir.path(), "two.json", r#"{"weights": [2, 1], "machine_cost": 0}"#);
    let o = endoq(&["regimes", "--problem", two.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["breakpoints"].as_array().unwrap().contains(&serde_json::json!("1")));
    for r in v["regimes"].as_array().unwrap() {
        assert_eq!(r["verdict"], "nonempty");
    }
}

#[test]
fn regimes_text_of_example_one() {
    let p = fixture("example1.json");
    let o = endoq(&["regimes", "--problem", p.to_str().unwrap(), "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("weights: (20, 15, 10, 5)"));
    assert!(text.contains("b in [35, 50)"), "{text}");
    assert!(text.contains("[50, inf)"), "{text}");
}

#[test]
fn verify_paper_passes_on_bundled_fixtures() {
    let o = endoq(&["verify-paper", "--format", "text", "--instances", "10", "--max-n", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains(" 0 fail"));
}

#[test]
fn verify_paper_localizes_a_perturbed_weight() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["example1.json", "example2.json", "example3.json"] {
        std::fs::copy(fixture(name), dir.path().join(name)).unwrap();
    }
    let e2 = std::fs::read_to_string(dir.path().join("example2.json")).unwrap();
    std::fs::write(dir.path().join("example2.json"), e2.replacen("13, 5]", "13, 6]", 1)).unwrap();
    let o = endoq(&[
        "verify-paper",
        "--fixtures",
        dir.path().to_str().unwrap(),
        "--instances",
        "5",
        "--max-n",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let failed: Vec<&serde_json::Value> =
        v["claims"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().any(|c| c["id"] == "e2-swaps-values"));
    assert!(failed.iter().all(|c| c["id"].as_str().unwrap().starts_with("e2-") || c["location"] == "Public games"));
}

#[test]
fn oracle_check_passes_and_is_deterministic() {
    let args = ["oracle-check", "--seed", "1", "--max-n", "5", "--instances", "100"];
    let a = endoq(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let b = endoq(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["mismatches"] == 0));
}

#[test]
fn oracle_check_single_agents() {
    let o = endoq(&["oracle-check", "--max-n", "1", "--instances", "20", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn output_file_is_written_whole() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("table.json");
    let p = fixture("example3.json");
    let o = endoq(&["game", "--problem", p.to_str().unwrap(), "--family", "public", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["worth"]["1,4"], "36");
    let leftovers: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(leftovers.len(), 1);
}
