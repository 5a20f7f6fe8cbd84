use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn ocltl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ocltl")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn types_listing() {
    for (structure, k, lines) in [("eq", "3", 5), ("dlo", "2", 3), ("aba", "1", 3)] {
        let o = ocltl(&["types", structure, k]);
        assert_eq!(code(&o), 0);
        let out = stdout(&o);
        let rows: Vec<&str> = out.lines().collect();
        assert_eq!(rows.len(), lines + 1, "{out}");
        assert_eq!(rows[lines], format!("{lines} types"));
    }
    let o = ocltl(&["types", "aba", "3", "--max-types", "10"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn translate_counts() {
    let dir = TempDir::new().unwrap();
    let echo = file(dir.path(), "echo.spec", "structure eq; spec G { y = x }");
    let w = file(dir.path(), "w.spec", "structure eq; lookback 1; spec G { y = x }");
    let out = dir.path().join("p.txt");
    let o = ocltl(&["translate", s(&echo), "-o", s(&out)]);
    assert_eq!(stdout(&o).trim(), "1 input, 2 output propositions");
    assert!(fs::read_to_string(&out).unwrap().contains("P_1"));
    let o = ocltl(&["translate", s(&w), "--mode", "binary", "-o", s(&out)]);
    assert_eq!(stdout(&o).trim(), "1+3 bits");
    let o = ocltl(&["translate", s(&w), "--mode", "minterm", "-o", s(&out)]);
    assert_eq!(stdout(&o).trim(), "2 P, 1 R, 1 D");
    let lag = file(dir.path(), "lag.spec", "structure eq; lookback 1; spec X G { y != y[-1] }");
    let o = ocltl(&["translate", s(&lag), "--guard", "counter", "-o", s(&out)]);
    assert_eq!(stdout(&o).trim(), "2 input, 5 output propositions, 2 counters");
}

#[test]
fn synth_exit_codes_and_simulation() {
    let dir = TempDir::new().unwrap();
    let echo = file(dir.path(), "echo.spec", "structure eq; spec G { y = x }");
    let dev = file(dir.path(), "dev.spec", "structure eq; lookback 1; spec G (YTRUE -> { x = y[-1] })");
    let below = file(dir.path(), "below.spec", "structure dlo; spec G { y < x }");
    let inputs = file(dir.path(), "in.txt", "3\n9\n3\n");
    let machine = dir.path().join("echo.json");

    let o = ocltl(&["synth", s(&echo), "--mode", "binary", "-o", s(&machine)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "REALIZABLE (1 state)");
    let o = ocltl(&["synth", s(&dev), "-o", s(&dir.path().join("dev.json"))]);
    assert_eq!(code(&o), 1);
    assert!(dir.path().join("dev.json").exists());
    assert_eq!(code(&ocltl(&["synth", s(&below), "--cap", "1"])), 2);
    assert_eq!(code(&ocltl(&["synth", s(&dir.path().join("missing.spec"))])), 3);

    let o = ocltl(&["simulate", s(&machine), s(&echo), s(&inputs), "--loop"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let outputs: Vec<&str> = out.lines().filter_map(|l| l.split('\t').next_back()).take(3).collect();
    assert_eq!(outputs, ["3", "9", "3"]);
    assert_eq!(out.lines().last(), Some("TRACE SAT"));

    let one = file(dir.path(), "one.txt", "4\n");
    let o = ocltl(&["simulate", s(&machine), s(&echo), s(&one), "--loop", "--steps", "3"]);
    assert_eq!(stdout(&o).lines().last(), Some("TRACE SAT"));

    let o = ocltl(&["simulate", s(&machine), s(&echo), s(&inputs)]);
    assert_eq!(stdout(&o).lines().last(), Some("PREFIX OK"));
    assert_eq!(code(&ocltl(&["simulate", s(&machine), s(&echo), s(&inputs), "--steps", "4"])), 3);
    // Machine for eq, spec over dlo.
    assert_eq!(code(&ocltl(&["simulate", s(&machine), s(&below), s(&inputs)])), 3);
}

#[test]
fn satisfiability() {
    let dir = TempDir::new().unwrap();
    for (text, want, verdict) in [
        ("structure eq; spec G { y = x }", 0, "SAT"),
        ("structure eq; spec { x != x }", 1, "UNSAT"),
        ("structure dlo; lookback 1; spec G ({ y < x } & (YTRUE -> { x < y[-1] }))", 0, "SAT"),
    ] {
        let spec = file(dir.path(), "s.spec", text);
        let o = ocltl(&["check", "--sat", s(&spec)]);
        assert_eq!(code(&o), want, "{text}");
        assert_eq!(stdout(&o).lines().next(), Some(verdict));
        if want == 0 {
            assert!(stdout(&o).contains("period 0:"));
        }
    }
}

#[test]
fn elimfix() {
    let o = ocltl(&["elimfix", "pfp R(x). !R(x) @ (x)", "--structure", "eq"]);
    assert_eq!(stdout(&o).trim(), "FALSE");
    let o = ocltl(&["elimfix", "exists z. x < z"]);
    assert_eq!(stdout(&o).trim(), "(exists z. x < z)");
    let o = ocltl(&[
        "elimfix",
        "lfp R(x). (x = a | x = b | exists u. exists v. (R(u) & R(v) & u < x & x < v)) @ (x)",
        "--constant",
        "a=0",
        "--constant",
        "b=1",
    ]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("a < x & x < b") && !out.contains("lfp"), "{out}");
}

#[test]
fn tlsf_export() {
    let dir = TempDir::new().unwrap();
    let echo = file(dir.path(), "echo.spec", "structure eq; spec G { y = x }");
    let o = ocltl(&["export-tlsf", s(&echo)]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("INFO {\n  TITLE:       \"echo\""), "{out}");
    assert!(out.contains("GUARANTEES {"));
    let lag = file(dir.path(), "lag.spec", "structure eq; lookback 1; spec G { x != y[-1] }");
    assert_eq!(code(&ocltl(&["export-tlsf", s(&lag), "--guard", "past"])), 3);
    assert_eq!(code(&ocltl(&["export-tlsf", s(&lag)])), 0);
}
