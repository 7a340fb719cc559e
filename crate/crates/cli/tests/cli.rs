//! Exit codes and reproducible output of the binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn spec(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name).to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regsynth")).args(args).env_remove("REGSYNTH_SEED").output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn check_sat_codes() {
    assert_eq!(code(&["check-sat", &spec("decreasing.rsc"), "--domain", "rat"]), 0);
    assert_eq!(code(&["check-sat", &spec("decreasing.rsc"), "--domain", "nat"]), 1);
    assert_eq!(code(&["check-sat", &spec("fig1.rsa")]), 2);
    assert_eq!(code(&["check-sat", "/no/such/file"]), 2);
    let text = String::from_utf8(run(&["check-sat", &spec("decreasing.rsc")]).stdout).unwrap();
    assert!(text.contains("has_inf_decreasing_1w: true"), "{text}");
}

#[test]
fn synth_and_solve_codes() {
    let out: PathBuf = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-synth");
    let o = out.to_str().unwrap();
    for dom in ["nat", "rat"] {
        assert_eq!(code(&["synth", &spec("echo.ido"), "--domain", dom, "--out", o]), 0);
    }
    assert!(out.join("echo.rat.transducer").exists());
    assert_eq!(code(&["synth", &spec("climb.rsa"), "--out", o]), 1);
    assert!(out.join("climb.nat.adam.txt").exists());
    assert_eq!(code(&["solve", &spec("fig1.rsa")]), 0);
    assert_eq!(code(&["solve", &spec("fig1.rsa"), "--domain", "rat"]), 1);
    assert_eq!(code(&["synth", &spec("decreasing.rsc")]), 2);
    let dump = out.join("echo.nat.transducer");
    let dot = run(&["export-dot", dump.to_str().unwrap(), "--what", "transducer"]);
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("digraph"));
    assert_eq!(code(&["simulate", &spec("echo.ido"), "--transducer", dump.to_str().unwrap(), "--steps", "5"]), 0);
}

#[test]
fn oracle_is_reproducible() {
    let a = run(&["--seed", "11", "oracle", "--sizes", "25"]);
    let b = run(&["--seed", "11", "oracle", "--sizes", "25"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_regsynth"))
        .args(["oracle", "--sizes", "25"])
        .env("REGSYNTH_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
    assert_eq!(code(&["oracle", "--sizes", "0"]), 0);
    assert_eq!(code(&["oracle", "--sizes", "30", "--mutate", "games"]), 1);
}

#[test]
fn play_quits_cleanly() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_regsynth"))
        .args(["play", &spec("fig1.rsa")])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"5\n6\nquit\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("state 7 reached: Eve wins"));
}
