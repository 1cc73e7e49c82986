//! End-to-end checks of the binary: file-format round trips, exit codes,
//! and seed-fixed reproducibility.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_orientavoid")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "orientavoid-cli-test-{}-{:?}",
        std::process::id(),
        std::thread::current().id()
    ));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(path: &Path, content: &str) {
    fs::write(path, content).unwrap();
}

#[test]
fn solve_exit_codes_follow_the_verdict() {
    let dir = tempdir();
    let k5 = dir.join("k5.txt");
    assert!(run(&["gen", "complete", "5", "-o", k5.to_str().unwrap()])
        .status
        .success());
    let blocked = dir.join("blocked.json");
    write(
        &blocked,
        r#"{"mode":"outdeg","sets":[[2,3],[2,3],[2,3],[2,3],[2,3]]}"#,
    );
    let out = run(&["solve", k5.to_str().unwrap(), blocked.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "UNSAT");

    let single = dir.join("single.json");
    write(&single, r#"{"mode":"outdeg","sets":[[2],[2],[2],[2],[2]]}"#);
    let out = run(&["solve", k5.to_str().unwrap(), single.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"arcs\""));

    // 28 edges exceeds the search guard: exit code 2.
    let k8 = dir.join("k8.txt");
    run(&["gen", "complete", "8", "-o", k8.to_str().unwrap()]);
    let f8 = dir.join("f8.json");
    write(
        &f8,
        &format!(
            r#"{{"mode":"outdeg","sets":[{}]}}"#,
            ["[0]"; 8].join(",")
        ),
    );
    let out = run(&["solve", k8.to_str().unwrap(), f8.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn construct_then_certify_round_trips() {
    let dir = tempdir();
    let k7 = dir.join("k7.txt");
    run(&["gen", "complete", "7", "-o", k7.to_str().unwrap()]);
    let f = dir.join("f.json");
    write(
        &f,
        &format!(
            r#"{{"mode":"outdeg","sets":[{}]}}"#,
            ["[1]"; 7].join(",")
        ),
    );
    let cert = dir.join("cert.json");
    let out = run(&[
        "construct",
        k7.to_str().unwrap(),
        "--bound",
        "third",
        "--forbidden",
        f.to_str().unwrap(),
        "-o",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "certify",
        k7.to_str().unwrap(),
        f.to_str().unwrap(),
        cert.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"valid\":true"));
}

#[test]
fn seeds_fix_generation_and_experiments() {
    let dir = tempdir();
    let a = dir.join("a.txt");
    let b = dir.join("b.txt");
    run(&[
        "gen",
        "random-gnp",
        "8",
        "0.5",
        "--seed",
        "7",
        "-o",
        a.to_str().unwrap(),
    ]);
    run(&[
        "gen",
        "random-gnp",
        "8",
        "0.5",
        "--seed",
        "7",
        "-o",
        b.to_str().unwrap(),
    ]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let e1 = dir.join("e1.jsonl");
    let e2 = dir.join("e2.jsonl");
    for out in [&e1, &e2] {
        let st = run(&[
            "experiment",
            "--bound",
            "third",
            "--trials",
            "8",
            "--seed",
            "3",
            "-o",
            out.to_str().unwrap(),
        ]);
        assert!(st.status.success());
    }
    assert_eq!(fs::read(&e1).unwrap(), fs::read(&e2).unwrap());
    let last = fs::read_to_string(&e1).unwrap();
    let aggregate = last.lines().last().unwrap();
    assert!(aggregate.contains("\"aggregate\":true"));
    assert!(aggregate.contains("\"cert_valid\":8"));
}

#[test]
fn at_number_and_duality_check() {
    let dir = tempdir();
    let c4 = dir.join("c4.txt");
    run(&[
        "gen",
        "complete-minus-matching",
        "4",
        "-o",
        c4.to_str().unwrap(),
    ]);
    let out = run(&["at-number", c4.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"at_number\":2"));

    let out = run(&["duality-check", "--trials", "50", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"failures\":0"));
}

#[test]
fn zp_cert_verdicts() {
    let dir = tempdir();
    let wheel = dir.join("wheel.txt");
    write(&wheel, "5 8\n0 1\n0 2\n0 3\n0 4\n1 2\n2 3\n3 4\n4 1\n");
    // A verified certificate for the 4-wheel (hub 0).
    let good = dir.join("good.json");
    write(
        &good,
        r#"{"u":0,"arcs":[[1,0],[2,0],[3,0],[4,0],[2,1],[3,2],[4,3],[1,4]]}"#,
    );
    let out = run(&[
        "zp-cert",
        wheel.to_str().unwrap(),
        "3",
        good.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"accepted\":true"));

    // Wrong arc count is rejected (exit 1), not an error.
    let bad = dir.join("bad.json");
    write(&bad, r#"{"u":0,"arcs":[[1,0],[2,0]]}"#);
    let out = run(&[
        "zp-cert",
        wheel.to_str().unwrap(),
        "3",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}
