use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn cofib(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cofib"))
        .args(args)
        .current_dir(fixtures())
        .env_remove("COFIB_CORPUS")
        .output()
        .expect("spawn cofib")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn machine(args: &[&str]) -> (i32, serde_json::Value) {
    let mut all = vec!["--format", "machine"];
    all.extend_from_slice(args);
    let o = cofib(&all);
    let v = serde_json::from_slice(&o.stdout).expect("machine report is JSON");
    (code(&o), v)
}

#[test]
fn lattice_is_a_cofibration_category() {
    let o = cofib(&["cofcat", "check", "lattice_ab.json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn chain_localizations_agree() {
    let (c, v) = machine(&["ho", "compare", "chain_w12.json", "--oracle-bound", "20"]);
    assert_eq!(c, 0, "{}", v);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert_eq!(v["parameters"]["oracle_bound"], 20);
}

#[test]
fn bad_horn_has_no_filler_at_level_one() {
    let o = cofib(&["nf", "fill", "bad_horn.json", "--level", "1", "--budget", "1"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("NoFillerAtBudget"), "{}", stdout(&o));
}

#[test]
fn core_acceptance_suite_passes() {
    let (c, v) = machine(&["acceptance", "core"]);
    assert_eq!(c, 0, "{}", v);
    assert!(!v["checks"].as_array().unwrap().is_empty());
}

#[test]
fn unknown_suite_is_a_usage_error() {
    assert_eq!(code(&cofib(&["acceptance", "nonsense"])), 2);
}

#[test]
fn missing_input_is_an_input_error() {
    let o = cofib(&["cat", "check", "does_not_exist.json"]);
    assert_eq!(code(&o), 2);
    assert!(o.stdout.is_empty());
}

#[test]
fn malformed_input_is_an_input_error() {
    let dir = std::env::temp_dir().join(format!("cofib-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("bad.json");
    std::fs::write(&f, "{ not json").unwrap();
    assert_eq!(code(&cofib(&["cat", "check", f.to_str().unwrap()])), 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn machine_reports_are_deterministic() {
    let args = ["--format", "machine", "cofcat", "check", "lattice_ab.json"];
    let a = cofib(&args);
    let b = cofib(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["inputs"].as_object().unwrap().len(), 1);
    assert!(!stdout(&a).contains("wall"));
}

#[test]
fn human_report_lists_checks_and_wall_time() {
    let o = cofib(&["cat", "check", "lattice_ab.json"]);
    let s = stdout(&o);
    assert_eq!(code(&o), 0);
    assert!(s.contains("PASS"));
    assert!(s.contains("wall time"));
    assert!(s.contains("sha256"));
}

#[test]
fn simplicial_sets_check_and_join() {
    assert_eq!(code(&cofib(&["sset", "check", "delta1.json"])), 0);
    assert_eq!(code(&cofib(&["sset", "check", "point.json"])), 0);
    let (c, v) = machine(&["sset", "join", "delta1.json", "point.json", "--cap", "3"]);
    assert_eq!(c, 0, "{}", v);
}

#[test]
fn standard_simplex_is_a_quasicategory() {
    assert_eq!(code(&cofib(&["qc", "check", "delta1.json", "--cap", "3"])), 0);
}

#[test]
fn corpus_export_matches_fixture() {
    let dir = std::env::temp_dir().join(format!("cofib-cli-export-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("lab.json");
    let o = cofib(&["corpus", "export", "lab_all", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let exported = std::fs::read_to_string(&out).unwrap();
    let fixture = std::fs::read_to_string(fixtures().join("lattice_ab.json")).unwrap();
    let a: serde_json::Value = serde_json::from_str(&exported).unwrap();
    let b: serde_json::Value = serde_json::from_str(&fixture).unwrap();
    assert_eq!(a, b);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn corpus_names_resolve_directly() {
    assert_eq!(code(&cofib(&["cofcat", "check", "corpus:lab_all"])), 0);
    assert_eq!(code(&cofib(&["cat", "check", "corpus:nope"])), 2);
}

#[test]
fn seed_corpus_directory_is_searched() {
    let o = Command::new(env!("CARGO_BIN_EXE_cofib"))
        .args(["cat", "check", "lattice_ab.json"])
        .current_dir(std::env::temp_dir())
        .env("COFIB_CORPUS", fixtures())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn vertex_frame_is_initial() {
    let (c, v) = machine(&["nf", "init", "vertex_la_all.json"]);
    assert_eq!(c, 0, "{}", v);
}

#[test]
fn emitted_horn_problem_replays_as_failure() {
    let dir = std::env::temp_dir().join(format!("cofib-cli-emit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("horn.json");
    let (c, v) = machine(&["nf", "horns", "corpus:nolub_all", "--m", "2", "--i", "1", "--emit", out.to_str().unwrap()]);
    assert_eq!(c, 1, "{}", v);
    assert!(out.exists());
    let o = cofib(&["nf", "fill", out.to_str().unwrap(), "--level", "1", "--budget", "1"]);
    assert_eq!(code(&o), 1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn filtration_sets_are_reported() {
    let (c, v) = machine(&["filt", "bset", "--k", "1", "--m", "2"]);
    assert_eq!(c, 0, "{}", v);
    let (c, v) = machine(&["filt", "aset", "--k", "1", "--m", "2"]);
    assert_eq!(c, 0, "{}", v);
}
