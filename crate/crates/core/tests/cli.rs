//! End-to-end checks of the command-line interface: documents in,
//! verdict out, with the documented exit-code convention.

use std::io::Write;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kbweights"))
}

fn write_temp(name: &str, text: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("kbw-cli-{}-{}", std::process::id(), name));
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(text.as_bytes()).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const TORSION: &str = r#"{"coefficients":"Z","degrees":{"0":1,"1":1},"differentials":{"0":[[2]]}}"#;
const ZERO_MAP: &str = r#"{"source":{"coefficients":"Z","degrees":{"0":1}},
  "target":{"coefficients":"Z","degrees":{"0":1}},"components":{}}"#;

#[test]
fn homology_reports_torsion() {
    let path = write_temp("t1", TORSION);
    let out = bin().arg("homology").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("H^1 = Z/2"), "{}", text);
    assert!(text.contains(r#"RESULT {"homology""#), "{}", text);
}

#[test]
fn kills_zero_map_all_methods() {
    let path = write_temp("t2", ZERO_MAP);
    let out = bin()
        .args(["kills", "--m", "0", "--n", "0", "--method", "all"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains(r#""verdict":true"#));
}

#[test]
fn negative_verdict_exits_one() {
    let path = write_temp("t3", TORSION);
    let out = bin().args(["without", "--m", "0", "--n", "0"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
}

#[test]
fn malformed_input_exits_two() {
    let path = write_temp(
        "t4",
        r#"{"coefficients":"Z","degrees":{"0":1,"1":1,"2":1},"differentials":{"0":[[1]],"1":[[1]]}}"#,
    );
    let out = bin().arg("homology").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degree"));
}

#[test]
fn stdin_dash_is_accepted() {
    use std::process::Stdio;
    let mut child = bin()
        .args(["detect-weights", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.as_mut().unwrap().write_all(TORSION.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("[-1,0]"));
}

#[test]
fn fuzz_reports_are_reproducible() {
    let run = || {
        let out = bin().args(["fuzz", "--seed", "5", "--trials", "4"]).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        stdout(&out)
    };
    assert_eq!(run(), run());
}

#[test]
fn paper_examples_verify() {
    let out = bin().arg("paper-examples").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("even-dimensional example"));
    assert!(text.contains("weight-degenerate triple"));
}
