use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpora").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riesz-audit")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn default_audit_matches_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let c = corpus("default.json");
    let o = run(&["audit", c.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let written = std::fs::read(&out).unwrap();
    assert_eq!(written, std::fs::read(corpus("default.expected.json")).unwrap());
}

#[test]
fn json_output_is_byte_stable() {
    let c = corpus("semantics-divergence.json");
    let a = run(&["audit", c.to_str().unwrap()]);
    let b = run(&["audit", c.to_str().unwrap(), "--sequential"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn text_report_has_the_same_verdicts() {
    let c = corpus("semantics-divergence.json");
    let o = run(&["audit", c.to_str().unwrap(), "--report", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let prop3 = text.lines().find(|l| l.starts_with("PROP3") && l.contains("zero")).unwrap();
    assert!(prop3.contains("counterexample"), "{prop3}");
    assert!(text.contains("corpus sha256"));
}

#[test]
fn other_seed_is_a_manifest_mismatch() {
    let c = corpus("semantics-divergence.json");
    let o = run(&["audit", c.to_str().unwrap(), "--seed", "12345"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("seed differs"), "{}", stderr(&o));
}

#[test]
fn single_mode_audit_compares_its_entries() {
    let c = corpus("semantics-divergence.json");
    let o = run(&["audit", c.to_str().unwrap(), "--semantics", "zero"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(!stdout(&o).contains("\"translated\""));
}

#[test]
fn broken_filter_base_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(
        &path,
        r#"{
  "version": 1,
  "spaces": {"line": {"dim": 1, "pseudonorms": [{"kind": "coord", "j": 0}]}},
  "carriers": {"w": {"space": "line", "points": [["0"], ["1"], ["2"]]}},
  "filters": {"bad": {"generated": {"carrier": "w", "elements": [[0, 1], [1, 2]]}}}
}"#,
    )
    .unwrap();
    let o = run(&["audit", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("intersection-dominated"), "{}", stderr(&o));
}

#[test]
fn malformed_corpus_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"version\": 1,\n  \"carriers\": [\n}").unwrap();
    let o = run(&["audit", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3 column 14"), "{}", stderr(&o));
}

#[test]
fn converge_answers_with_witnesses() {
    let c = corpus("default.json");
    let c = c.to_str().unwrap();

    let o = run(&["converge", c, "--filter", "up-zero", "--point", "[0]"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("true\n"));
    assert!(stdout(&o).contains("qualifying neighborhood sets: 2"));

    let o = run(&["converge", c, "--filter", "up-minus-one", "--point", "[0]", "--semantics", "zero"]);
    let text = stdout(&o);
    assert!(text.starts_with("false\n"), "{text}");
    assert!(text.contains(r#""points":[["0"]]"#), "{text}");

    let o = run(&["converge", c, "--filter", "tail-approach", "--point", "[1]", "--semantics", "translated"]);
    assert_eq!(stdout(&o), "true\n");

    let o = run(&["converge", c, "--filter", "no-such-filter", "--point", "[0]"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn axioms_pass_on_shipped_objects() {
    let c = corpus("default.json");
    let o = run(&["axioms", c.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().any(|l| l.starts_with("pseudonorm")));
}

#[test]
fn axioms_report_a_non_directed_net() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.json");
    std::fs::write(
        &path,
        r#"{
  "version": 1,
  "spaces": {"line": {"dim": 1, "pseudonorms": [{"kind": "coord", "j": 0}]}},
  "carriers": {"w": {"space": "line", "points": [["0"], ["1"]]}},
  "nets": {"split": {"carrier": "w", "size": 2, "values": [0, 1]}}
}"#,
    )
    .unwrap();
    let o = run(&["axioms", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("0 and 1 have no common upper bound"), "{}", stdout(&o));
    let o = run(&["audit", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zero_weight_pseudonorm_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.json");
    std::fs::write(
        &path,
        r#"{
  "version": 1,
  "spaces": {"line": {"dim": 1, "pseudonorms": [{"kind": "sup", "w": ["0"]}]}},
  "carriers": {"w": {"space": "line", "points": [["0"]]}}
}"#,
    )
    .unwrap();
    let o = run(&["axioms", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
