use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures");
    dir.join(name).to_string_lossy().into_owned()
}

fn locality(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locality"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn classify_reports_flags() {
    let o = locality(&["classify", &fixture("ex3_8.magma")]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("locality=yes"), "{out}");
    assert!(out.contains("partial=no"), "{out}");
    assert!(out.contains("WITNESS partial partial-equivalence (1,0),(0,1)"), "{out}");
}

#[test]
fn check_exit_status_follows_the_verdict() {
    let m = fixture("ex3_6.magma");
    assert_eq!(code(&locality(&["check", &m, "--class", "partial"])), 0);
    let o = locality(&["check", &m, "--class", "strong"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("strong=no witness=strong-left (1,0),(0,1)"));
}

#[test]
fn completion_failure_exits_one() {
    let o = locality(&["complete", &fixture("ex4_3.magma")]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("(a*b)*a = a but a*(b*a) = 0"));
}

#[test]
fn completion_with_a_named_zero() {
    let o = locality(&["complete", &fixture("ex3_6.magma"), "--zero", "z"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("zero: z"));
    assert!(out.contains("op: 1 1 -> z"));
}

#[test]
fn quiver_paths_lists_six() {
    let o = locality(&["quiver", "paths", &fixture("ex2_17_quiver.quiver"), "--max-len", "2"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PATH ")).count(), 6);
    assert!(out.contains("PATH alpha.beta length=2 source=x target=z"));
}

#[test]
fn free_extension_into_z3() {
    let o = locality(&[
        "quiver",
        "free-ext",
        &fixture("cyclic_loop.quiver"),
        "--target",
        &fixture("z3.magma"),
        "--map",
        "gamma=1",
        "--max-len",
        "4",
    ]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("IMAGE gamma.gamma.gamma.gamma -> 1"), "{out}");
    assert!(out.contains("free-property=yes"));
}

#[test]
fn free_extension_precondition_exits_one() {
    let o = locality(&[
        "quiver",
        "free-ext",
        &fixture("ex2_17_quiver.quiver"),
        "--target",
        &fixture("ex4_3.magma"),
        "--map",
        "alpha=a,beta=a",
        "--max-len",
        "2",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("not a refined locality semigroup"));
}

#[test]
fn polar_and_generate() {
    let m = fixture("ex3_8.magma");
    let o = locality(&["polar", &m, "--left", "--set", "1"]);
    assert_eq!(stdout(&o).trim(), "POLAR left U={1} = {0}");
    let o = locality(&["polar", &m, "--right", "--set", ""]);
    assert_eq!(stdout(&o).trim(), "POLAR right U={} = {0,1}");
    let o = locality(&["generate", &fixture("ex3_psg_not_lsg.magma"), "--set", "b"]);
    assert_eq!(stdout(&o).trim(), "GENERATED {b} = {a,b}");
}

#[test]
fn ideal_reports_every_side() {
    let o = locality(&["ideal", &fixture("ex3_6.magma"), "--set", "0", "--side", "left"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("sub=yes"));
    assert!(out.contains("left-ideal=no witness="));
    let o = locality(&["ideal", &fixture("ex3_6.magma"), "--set", "0", "--side", "sub"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn adjoin_identity_and_zero() {
    let m = fixture("ex4_3.magma");
    let o = locality(&["adjoin", &m, "--identity", "e"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("op: e b -> b"));
    let o = locality(&["adjoin", &m, "--zero", "z"]);
    assert!(stdout(&o).contains("zero: z"));
    let o = locality(&["adjoin", &m, "--zero", "a"]);
    assert_eq!(code(&o), 2);
    assert_eq!(code(&locality(&["adjoin", &m])), 2);
}

#[test]
fn census_output_grammar() {
    let o = locality(&["enumerate", "census", "--size", "2", "--jobs", "2"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("size=2 total=81 mode=exhaustive"));
    let total: u64 = out
        .lines()
        .filter_map(|l| l.strip_prefix("pattern="))
        .map(|l| l.split("counts=").nth(1).unwrap().trim().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 81);
    assert_eq!(code(&locality(&["enumerate", "census", "--size", "4"])), 2);
    let o = locality(&["enumerate", "census", "--size", "4", "--seed", "3", "--samples", "50"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("mode=sampled samples=50 seed=3"));
}

#[test]
fn find_reports_missing_patterns() {
    let o = locality(&["enumerate", "find", "--size", "2", "--flags", "locality=yes,partial=no"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("elements: a b"));
    let o = locality(&["enumerate", "find", "--size", "2", "--flags", "refined=yes,locality=no"]);
    assert_eq!(code(&o), 1);
    assert_eq!(
        code(&locality(&["enumerate", "find", "--size", "2", "--flags", "bogus=yes"])),
        2
    );
}

#[test]
fn builtins() {
    let o = locality(&["builtin", "coprime", "--bound", "12", "--check", "strong"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("strong=no[witness: strong-left (2,3),(3,4)]"));
    assert_eq!(
        code(&locality(&[
            "builtin", "coprime", "--bound", "12", "--check", "partial"
        ])),
        0
    );
    let o = locality(&["builtin", "powerset", "--size", "2", "--op", "intersection"]);
    assert!(stdout(&o).contains("ZEROS left={}"));
    assert_eq!(
        code(&locality(&["builtin", "powerset", "--size", "9", "--op", "union"])),
        2
    );
    let o = locality(&["builtin", "totient", "--bound", "30"]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&locality(&["builtin", "totient", "--bound", "1"])), 2);
}

#[test]
fn examples_are_shipped() {
    let o = locality(&["examples"]);
    let names = stdout(&o);
    for n in [
        "ex2_5_powerset",
        "ex2_17_quiver",
        "ex3_6",
        "ex3_8",
        "ex3_psg_not_lsg",
        "ex4_3",
    ] {
        assert!(names.lines().any(|l| l == n), "{n} missing");
    }
    let o = locality(&["examples", "ex3_8"]);
    assert!(stdout(&o).contains("op: 1 0 -> 1"));
    assert_eq!(code(&locality(&["examples", "ex9_9"])), 2);
}

#[test]
fn bad_input_exits_two() {
    let dir = std::env::temp_dir().join(format!("locality-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.magma");
    std::fs::write(&bad, "elements: a\nop: a b -> a\n").unwrap();
    let o = locality(&["classify", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(err.lines().count(), 1);
    assert_eq!(code(&locality(&["frobnicate"])), 2);
    std::fs::remove_dir_all(dir).ok();
}
