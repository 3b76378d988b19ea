use std::path::Path;
use std::process::{Command, Output};

fn goodstein(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_goodstein"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn run_to(path: &Path, args: &[&str]) -> Output {
    let mut all = vec!["run"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", path.to_str().unwrap()]);
    goodstein(&all)
}

#[test]
fn run_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("three.jsonl");
    let o = run_to(&path, &["--hierarchy", "classic", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "terminated at step 5");
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 8);
    let v = goodstein(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&v), 0, "{}", String::from_utf8_lossy(&v.stderr));
    assert_eq!(stdout(&v).trim(), "ok: 6 steps checked");
}

#[test]
fn trace_to_stdout_is_deterministic() {
    let args = [
        "run",
        "--hierarchy",
        "classic",
        "--seed",
        "6",
        "--max-steps",
        "2",
        "--certify",
        "both",
    ];
    let a = goodstein(&args);
    let b = goodstein(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<String> = stdout(&a).lines().map(String::from).collect();
    assert!(
        lines[2].contains(r#""i":"1","value":"29","chosen_base":"3""#),
        "{}",
        lines[2]
    );
}

#[test]
fn tampered_trace_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("six.jsonl");
    run_to(
        &path,
        &["--hierarchy", "classic", "--seed", "6", "--max-steps", "4"],
    );
    let text = std::fs::read_to_string(&path).unwrap();
    let bad = text.replacen(r#""value":"29""#, r#""value":"30""#, 1);
    assert_ne!(bad, text);
    std::fs::write(&path, bad).unwrap();
    let v = goodstein(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&v), 1);
    assert!(String::from_utf8_lossy(&v.stderr).contains("rejected at step 1"));
    std::fs::write(&path, "not json\n").unwrap();
    assert_eq!(code(&goodstein(&["verify", path.to_str().unwrap()])), 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("budget.jsonl");
    let o = run_to(
        &path,
        &[
            "--hierarchy",
            "classic",
            "--seed",
            "16",
            "--bit-budget",
            "40",
        ],
    );
    assert_eq!(code(&o), 2);
    assert_eq!(code(&goodstein(&["verify", path.to_str().unwrap()])), 0);
    assert_eq!(
        code(&goodstein(&["run", "--hierarchy", "spiral", "--seed", "3"])),
        3
    );
    assert_eq!(
        code(&goodstein(&[
            "run",
            "--hierarchy",
            "classic",
            "--seed",
            "x"
        ])),
        3
    );
    assert_eq!(
        code(&goodstein(&[
            "run",
            "--hierarchy",
            "classic",
            "--seed",
            "3",
            "--certify",
            "all"
        ])),
        3
    );
    assert_eq!(code(&goodstein(&["frobnicate"])), 3);
    assert_eq!(code(&goodstein(&["verify", "/nonexistent/trace.jsonl"])), 3);
    assert_eq!(code(&goodstein(&["ordinal", "eval", "W^"])), 3);
    assert_eq!(code(&goodstein(&["--help"])), 0);
}

#[test]
fn ordinal_commands() {
    let e = goodstein(&["ordinal", "eval", "W^W^1*1*1+v(W^W^1*1*1)"]);
    assert_eq!(
        stdout(&e).trim(),
        r#"{"cofinality":"omega","pretty":"Ω^Ω + ϑ(Ω^Ω)","term":"W^W^1*1*1+v(W^W^1*1*1)"}"#
    );
    assert_eq!(stdout(&goodstein(&["ordinal", "fs", "w", "7"])).trim(), "7");
    assert_eq!(
        stdout(&goodstein(&["ordinal", "fs", "p(W^1*1)", "3"])).trim(),
        "3"
    );
    let s = goodstein(&["ordinal", "stepdown", "p(W^1*1)"]);
    assert_eq!(stdout(&s), "w\n1\n0\n");
    assert_eq!(
        stdout(&goodstein(&[
            "ordinal",
            "compare",
            "p(W^W^1*1*1)",
            "p(W^1*1)"
        ]))
        .trim(),
        ">"
    );
    let bad = goodstein(&["ordinal", "fs", "w", "W^1*1"]);
    assert_eq!(code(&bad), 1);
}

#[test]
fn hierarchy_stage() {
    let s = goodstein(&[
        "hierarchy",
        "stage",
        "--base",
        "finite: 2",
        "--i",
        "2",
        "--n",
        "4",
    ]);
    let bases: Vec<String> = serde_json::from_str(&stdout(&s)).unwrap();
    assert_eq!(
        bases,
        ["3", "27", "443426488243037769948249630619149892803"]
    );
    let s = goodstein(&[
        "hierarchy",
        "stage",
        "--base",
        "2,6",
        "--i",
        "0",
        "--n",
        "6",
    ]);
    assert_eq!(stdout(&s).trim(), r#"["3","30"]"#);
    assert_eq!(
        code(&goodstein(&[
            "hierarchy",
            "stage",
            "--base",
            "classic",
            "--i",
            "0",
            "--n",
            "6"
        ])),
        3
    );
}

#[test]
fn interpretations() {
    let o = goodstein(&["interp", "o", "--hierarchy", "finite: 2,6", "--n", "6"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["O"], "W^W^1*1*1+v(W^W^1*1*1)");
    assert_eq!(v["o_star"], "0");
    let u = goodstein(&["interp", "u", "--hierarchy", "2,6", "--n", "4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&u)).unwrap();
    assert_eq!(v["u"], "p(W^W^1*1*1)");
    assert_eq!(v["u_normal_form"], true);
}

#[test]
fn witness_chain() {
    let c = goodstein(&["chain", "--k", "1"]);
    assert_eq!(code(&c), 0);
    let lines: Vec<serde_json::Value> = stdout(&c)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(
        (&lines[1]["m"], &lines[1]["n"]),
        (&"26".into(), &"1".into())
    );
    assert_eq!(lines[3]["stop"], "zero");
}
