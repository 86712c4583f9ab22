use std::path::Path;

use metafib::cli::{run, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("metafib").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn values(text: &str) -> Vec<String> {
    text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("seq")).map(String::from).collect()
}

#[test]
fn generators() {
    let (code, out, _) = call(&["gen", "f", "--max", "20"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("# F(0) = 0"));
    assert!(out.contains("seq F 0 20\n"));
    assert_eq!(values(&out).join(","), "0,4,1,1,1,2,2,1,2,2,1,3,2,1,2,2,1,3,2,1,2");

    let (_, out, _) = call(&["gen", "v", "--max", "12", "--from", "9"]);
    assert_eq!(values(&out), ["5", "6", "6", "7"]);

    let (_, out, _) = call(&["gen", "vdiff", "--max", "6"]);
    assert!(out.contains("seq dV 1 6\n"));
    assert_eq!(values(&out).join(","), "0,0,0,1,1,1");
}

#[test]
fn family_members() {
    let (code, out, _) = call(&["qrs", "--r", "1", "--s", "2", "--max", "12"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("# seed Q(1..=2) = 1"));
    assert_eq!(values(&out).join(","), "1,1,2,3,3,4,5,5,6,6,6,8");

    let (code, _, err) = call(&["qrs", "--r", "2", "--s", "5", "--max", "100"]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    assert!(err.contains("n = 38"), "{err}");

    assert_eq!(call(&["qrs", "--r", "3", "--s", "2", "--max", "10"]).0, EXIT_USAGE);
}

#[test]
fn rule_commands() {
    let (code, out, _) = call(&["rules", "derive", "--max", "5000"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("g 1112 -> "));
    let (code, out, _) = call(&["rules", "verify", "--derive-to", "20000", "--max", "100000"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("violations 0"));
}

#[test]
fn usage_errors() {
    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(call(&["gen", "f", "--max", "many"]).0, EXIT_USAGE);
    assert_eq!(call(&["gen", "f", "--max", "0"]).0, EXIT_USAGE);
    assert_eq!(call(&["eval", "--automaton", "/nonexistent/a.txt", "--n", "3"]).0, EXIT_USAGE);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("synthesize"));
}

#[test]
fn synthesize_then_use_the_automaton() {
    let dir = tempfile::tempdir().unwrap();
    let (b, a, dot) = (path(dir.path(), "b.txt"), path(dir.path(), "a.txt"), path(dir.path(), "b.dot"));
    let (code, out, err) = call(&[
        "synthesize",
        "--target",
        "f",
        "--horizon",
        "12",
        "--validate",
        "100000",
        "--depth",
        "10",
        "--out",
        &b,
        "--dot",
        &dot,
        "--windowed",
        &a,
        "--jobs",
        "2",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("window automaton: 33 states"));
    assert!(out.contains("single-output automaton: 20 states"));
    assert!(out.contains("# horizon 12, validation 0..=100000, certification depth 10"));
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));

    let (code, out, _) = call(&["eval", "--automaton", &a, "--n", "463"]);
    assert_eq!((code, values(&out)), (EXIT_OK, vec!["2133".to_string()]));
    let (_, out, _) = call(&["eval", "--automaton", &b, "--n", "111001111", "--binary"]);
    assert_eq!(values(&out), ["3"]);
    let ten_500 = format!("1{}", "0".repeat(500));
    let (_, out, _) = call(&["eval", "--automaton", &b, "--n", &ten_500]);
    assert_eq!(values(&out), ["3"]);
    assert_eq!(call(&["eval", "--automaton", &b, "--n", "12", "--binary"]).0, EXIT_USAGE);

    let (code, out, _) = call(&["dot", "--automaton", &b]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, std::fs::read_to_string(&dot).unwrap());

    let (code, out, _) = call(&["certify", "--automaton", &a, "--depth", "8", "--validate", "50000"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().filter(|l| l.starts_with("OK ")).count(), 66);
    assert!(out.contains("OK 100 -1-> 110\n"));
    assert!(out.ends_with("CERTIFIED\n"));

    // send 100 -1-> to the state of 111 instead of 110
    let text = std::fs::read_to_string(&b).unwrap();
    let id = |name: &str| {
        text.lines().find(|l| l.split(' ').nth(2) == Some(name)).unwrap().split(' ').nth(1).unwrap().to_string()
    };
    let from = format!("trans {} 1 {}", id("100"), id("110"));
    let to = format!("trans {} 1 {}", id("100"), id("111"));
    assert!(text.contains(&from));
    let bad = path(dir.path(), "bad.txt");
    std::fs::write(&bad, text.replace(&from, &to)).unwrap();
    let (code, out, _) = call(&["certify", "--automaton", &bad, "--depth", "8", "--validate", "50000"]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    let fail = out.lines().find(|l| l.starts_with("FAIL 100 -1-> 111")).unwrap();
    assert!(fail.contains("witness=1001"), "{fail}");
    assert!(out.ends_with("NOT CERTIFIED\n"));
}

#[test]
fn table_check() {
    let (code, out, _) = call(&["tables", "check"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("typo candidate: rename 10111 to 11101"));
    assert!(out.contains("typo candidate: add row 110 1100 1101 2"));
}

#[test]
fn probes() {
    let (code, out, _) = call(&["probe", "--sequence", "f", "--base", "2", "--depth", "6", "--prefix", "256"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("6 64 62 125\n"), "{out}");
    let (code, out, _) = call(&["probe", "--sequence", "vdiff", "--depth", "4", "--prefix", "64"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("# d(n) = V(n+1) - V(n)"));
    assert_eq!(call(&["probe", "--sequence", "f", "--base", "1"]).0, EXIT_USAGE);
}
