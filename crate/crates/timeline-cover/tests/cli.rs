//! Exit-status and output contract of the command-line interface.

use std::path::Path;
use std::process::{Command, Output};

const FIG1: &str = "\
p tgc 4 6
v v
v u
v z
v w
e v u 2
e v w 2
e u w 2
e z w 2
e v u 3
e v z 3
e u w 3
e z w 3
e v u 4
e u z 4
e v z 4
e u w 4
e v w 5
";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_timeline-cover"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).expect("fixture written");
    path.to_string_lossy().into_owned()
}

#[test]
fn solve_found_and_unsat() {
    let dir = tempfile::tempdir().unwrap();
    let fig1 = write(dir.path(), "fig1.tg", FIG1);

    let found = run(&["solve", "--k", "3", &fig1]);
    assert_eq!(found.status.code(), Some(0));
    let text = String::from_utf8(found.stdout).unwrap();
    assert!(text.starts_with("span "));

    let unsat = run(&["solve", "--k", "2", &fig1]);
    assert_eq!(unsat.status.code(), Some(1));
    assert_eq!(String::from_utf8(unsat.stdout).unwrap().trim(), "UNSAT k=2");
}

#[test]
fn solve_modes_agree_and_verify_accepts_both() {
    let dir = tempfile::tempdir().unwrap();
    let fig1 = write(dir.path(), "fig1.tg", FIG1);
    for mode in ["fpt", "brute"] {
        let out = run(&["solve", "--k", "3", "--mode", mode, &fig1]);
        assert_eq!(out.status.code(), Some(0), "mode {mode}");
        let cover = write(dir.path(), &format!("cover-{mode}.txt"), &String::from_utf8(out.stdout).unwrap());
        let verify = run(&["verify", &fig1, &cover]);
        assert_eq!(verify.status.code(), Some(0), "mode {mode}");
        let line = String::from_utf8(verify.stdout).unwrap();
        assert!(line.starts_with("valid span="), "{line}");
    }
}

#[test]
fn solve_respects_jobs_flag() {
    let dir = tempfile::tempdir().unwrap();
    let fig1 = write(dir.path(), "fig1.tg", FIG1);
    let serial = run(&["solve", "--k", "3", "--jobs", "1", &fig1]);
    let parallel = run(&["solve", "--k", "3", "--jobs", "4", &fig1]);
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(parallel.status.code(), Some(0));
    // deterministic: the same cover regardless of worker count
    assert_eq!(serial.stdout, parallel.stdout);
    let env = bin()
        .args(["solve", "--k", "3", &fig1])
        .env("TIMELINE_COVER_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(0));
    assert_eq!(env.stdout, serial.stdout);
}

#[test]
fn verify_rejects_bad_covers() {
    let dir = tempfile::tempdir().unwrap();
    let fig1 = write(dir.path(), "fig1.tg", FIG1);
    // w parked at t=6 leaves (v, w, 2) uncovered
    let bad = write(
        dir.path(),
        "bad.txt",
        "span 3\ninterval v 5 5\ninterval u 2 4\ninterval z 3 4\ninterval w 6 6\n",
    );
    let out = run(&["verify", &fig1, &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("invalid:"));

    let wrong_span = write(
        dir.path(),
        "wrong_span.txt",
        "span 2\ninterval v 5 5\ninterval u 2 4\ninterval z 3 4\ninterval w 2 2\n",
    );
    let out = run(&["verify", &fig1, &wrong_span]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn parse_and_usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write(dir.path(), "broken.tg", "p tgc 2 2\ne u u 1\n");
    assert_eq!(run(&["solve", "--k", "1", &broken]).status.code(), Some(2));
    assert_eq!(run(&["solve", &broken]).status.code(), Some(2)); // missing --k
    assert_eq!(
        run(&["solve", "--k", "1", "/nonexistent.tg"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn zero_span_command() {
    let dir = tempfile::tempdir().unwrap();
    let fig1 = write(dir.path(), "fig1.tg", FIG1);
    let out = run(&["zero-span", &fig1]);
    assert_eq!(out.status.code(), Some(1));

    let single = write(dir.path(), "single.tg", "p tgc 2 3\nv u\nv v\ne u v 2\n");
    let out = run(&["zero-span", &single]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("span 0\n"));
}

#[test]
fn gen_round_trips_through_solve() {
    let dir = tempfile::tempdir().unwrap();
    let gen = run(&["gen", "--n", "4", "--T", "3", "--p", "0.4", "--seed", "11"]);
    assert_eq!(gen.status.code(), Some(0));
    let text = String::from_utf8(gen.stdout).unwrap();
    let again = run(&["gen", "--n", "4", "--T", "3", "--p", "0.4", "--seed", "11"]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);

    let inst = write(dir.path(), "gen.tg", &text);
    let solve = run(&["solve", "--k", "8", &inst]);
    assert_eq!(solve.status.code(), Some(0));

    assert_eq!(
        run(&["gen", "--n", "2", "--T", "2", "--p", "1.5"]).status.code(),
        Some(2)
    );
}

#[test]
fn paircut_command_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let vdpc = write(
        dir.path(),
        "star.vdpc",
        "vdpc 4 3 2 1\ns s\na s x1\na s x2\na s x3\np x1 x2\np x2 x3\n",
    );
    let out = run(&["paircut", &vdpc]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "cut 1\ndel x2\n");

    let cdpc = write(
        dir.path(),
        "arc.cdpc",
        "cdpc 3 2 1 0\ns s\nd s a\na s b\np a b\n",
    );
    let out = run(&["paircut", &cdpc]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "UNSAT k=0");
}
