use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_delpezzo3")).args(args).env_remove("DELPEZZO3_CATALOG").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn catalog_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

#[test]
fn count_matches_family_sizes() {
    let o = run(&["count"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "median: 77, tet-big: 45, tet-nonbig: 115, tet-trivial: 63\n");
}

#[test]
fn verify_single_type() {
    let o = run(&["verify", "--type", "[4]_0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS [4]_0"));
}

#[test]
fn ascii_alias_resolves() {
    let a = run(&["show", "--type", "2_1K", "--stage", "M", "--format", "dot"]);
    let b = run(&["show", "--type", "[2]_{1K}", "--stage", "M", "--format", "dot"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn show_dot_on_minimal_resolution() {
    let o = run(&["show", "--type", "[2]_{1K}", "--stage", "M", "--format", "dot"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let vertices = out.lines().filter(|l| l.contains("[label=")).count();
    assert_eq!(vertices, 4);
}

#[test]
fn stage_is_case_insensitive() {
    let upper = run(&["show", "--type", "[2]_{1K}", "--stage", "Z", "--format", "json"]);
    let lower = run(&["show", "--type", "[2]_{1K}", "--stage", "z", "--format", "json"]);
    assert!(upper.status.success());
    assert_eq!(stdout(&upper), stdout(&lower));
}

#[test]
fn unknown_type_is_usage_error() {
    let o = run(&["verify", "--type", "[99]_{ZZ}"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tet_trivial_runs_distinctness() {
    let o = run(&["verify", "--family", "tet-trivial"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS distinct-ez"));
}

#[test]
fn json_output_parses() {
    let o = run(&["verify", "--type", "[4]_0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = v["reports"][0]["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    let o = run(&["show", "--type", "[2]_{1K}", "--stage", "M", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["verify", "--format", "json"]);
    let b = run(&["verify", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn corrupted_catalog_fails() {
    let dir = std::env::temp_dir().join(format!("delpezzo3-corrupt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for family in ["median", "tet-big", "tet-nonbig", "tet-trivial"] {
        let src = catalog_dir().join(format!("{family}.json"));
        let mut text = std::fs::read_to_string(src).unwrap();
        if family == "median" {
            // [4]_0 is a conic of coefficient 2
            text = text.replacen("\"coeff\": 2", "\"coeff\": 1", 1);
        }
        std::fs::write(dir.join(format!("{family}.json")), text).unwrap();
    }
    let o = Command::new(env!("CARGO_BIN_EXE_delpezzo3"))
        .args(["verify", "--type", "[4]_0"])
        .env("DELPEZZO3_CATALOG", &dir)
        .output()
        .unwrap();
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL [4]_0"));
}
