use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SUM_LEFT: &str = "relation arity=2 order=3\n- - -\n0 1 2\n0*1 1*2 0*1*2\n";
const SUM_RIGHT: &str = "relation arity=2 order=3\n- 1 0*1*2\n- 0 0*2\n- 0 1*2\n";
const SUM_RESULT: &str = "relation arity=2 order=3\n- - -\n- 1 1*2\n- 1*2 0*1*2\n";
const PLUS: &str = "relation arity=2 order=3\n0 1 2\n1 2 0\n2 0 1\n";

fn relforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relforge"))
        .args(args)
        .env_remove("RELFORGE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn add_reproduces_worked_table() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (write(&dir, "a.rel", SUM_LEFT), write(&dir, "b.rel", SUM_RIGHT));
    let o = relforge(&["add", s(&a), s(&b), "--monoid", "mod"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), SUM_RESULT);
}

#[test]
fn show_canonicalizes_aliases() {
    let dir = TempDir::new().unwrap();
    let r = write(&dir, "r.rel", "relation arity=1 order=3\nphi 2*1 N\n");
    let o = relforge(&["show", s(&r)]);
    assert_eq!(stdout(&o), "relation arity=1 order=3\n- 1*2 -\n");
}

#[test]
fn out_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (write(&dir, "a.rel", SUM_LEFT), write(&dir, "b.rel", SUM_RIGHT));
    let out = dir.path().join("sum.rel");
    let o = relforge(&["add", s(&a), s(&b), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    assert_eq!(fs::read_to_string(out).unwrap(), SUM_RESULT);
}

#[test]
fn decompose_then_tabulate_round_trips() {
    let dir = TempDir::new().unwrap();
    let r = write(&dir, "r.rel", SUM_LEFT);
    let o = relforge(&["decompose", s(&r), "--method", "trivial"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("terms=9"), "{}", stderr(&o));
    let expr = write(&dir, "r.expr", &stdout(&o));
    let back = relforge(&["eval-expr", s(&expr), "--arity", "2"]);
    assert_eq!(stdout(&back), SUM_LEFT);
    let point = relforge(&["eval-expr", s(&expr), "--point", "2,1"]);
    assert_eq!(stdout(&point), "1*2\n");
}

#[test]
fn compact_decomposition_uses_fewer_terms() {
    let dir = TempDir::new().unwrap();
    let r = write(&dir, "plus.rel", PLUS);
    let o = relforge(&["decompose", s(&r), "--method", "compact", "--budget", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("method=compact"));
    let expr = write(&dir, "plus.expr", &stdout(&o));
    assert_eq!(stdout(&relforge(&["eval-expr", s(&expr), "--arity", "2"])), PLUS);
}

#[test]
fn transform_and_extend() {
    let dir = TempDir::new().unwrap();
    let r = write(&dir, "r.rel", SUM_LEFT);
    let t = relforge(&["transform", s(&r), "--spec", "2,1,0"]);
    assert_eq!(stdout(&t), "relation arity=2 order=3\n- 0 0*1\n- 1 1*2\n- 2 0*1*2\n");
    let u = write(&dir, "u.rel", "relation arity=1 order=3\n0 1*2 -\n");
    let e = relforge(&["extend", s(&u), "--arity", "2", "--positions", "2"]);
    assert_eq!(stdout(&e), "relation arity=2 order=3\n0 1*2 -\n0 1*2 -\n0 1*2 -\n");
}

#[test]
fn solve_db_agrees_on_function_branches() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "plus.rel", PLUS);
    let o = relforge(&["solve-db", s(&p), s(&p), s(&p), "--a", "0", "--b", "1", "--c", "2", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    // (x + 0) + (x + 1) = 2 over Z_3 has the single root x = 2.
    assert_eq!(stdout(&o), "pipeline: {2}\nbrute: {2}\nAGREE\n");
}

#[test]
fn solve_db_reports_subset_for_many_valued_branches() {
    let dir = TempDir::new().unwrap();
    let r1 = write(&dir, "r1.rel", "relation arity=2 order=3\n0*1 0*1 0*1\n0*1 0*1 0*1\n0*1 0*1 0*1\n");
    let r2 = write(&dir, "r2.rel", "relation arity=2 order=3\n0 0 0\n0 0 0\n0 0 0\n");
    let r3 = write(&dir, "r3.rel", "relation arity=2 order=3\n1 0 0\n1 0 0\n0 0 0\n");
    let o = relforge(&["solve-db", s(&r1), s(&r2), s(&r3), "--a", "0", "--b", "0", "--c", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "pipeline: {0, 1, 2}\nbrute: {}\nSUBSET\n");
}

#[test]
fn solve_db_formula_has_27_terms() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "plus.rel", PLUS);
    let o = relforge(&["solve-db", s(&p), s(&p), s(&p), "--a", "0", "--b", "0", "--c", "0", "--formula"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("terms=27"), "{}", stderr(&o));
    assert!(stdout(&o).contains("formula: (sum "));
}

#[test]
fn laws_print_six_passes() {
    let o = relforge(&["laws", "--order", "3", "--samples", "200", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines.iter().all(|l| l.starts_with("PASS ")));
    assert!(lines[2].contains("functional beta"));
}

#[test]
fn random_is_seed_reproducible_and_env_overrides() {
    let args = ["random", "--arity", "2", "--order", "4", "--seed", "9"];
    let a = relforge(&args);
    assert_eq!(stdout(&a), stdout(&relforge(&args)));
    let env = Command::new(env!("CARGO_BIN_EXE_relforge"))
        .args(["random", "--arity", "2", "--order", "4", "--seed", "1"])
        .env("RELFORGE_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(stdout(&env), stdout(&a));
    let f = relforge(&["random", "--arity", "2", "--order", "3", "--functional"]);
    assert!(stdout(&f).lines().skip(1).flat_map(|l| l.split(' ')).all(|c| c.len() == 1 && c != "-"));
}

#[test]
fn monoid_file_selector() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "sat.monoid", "monoid order=3\n0 1 2\n1 2 2\n2 2 2\n");
    let a = write(&dir, "a.rel", "relation arity=1 order=3\n1 2 0\n");
    let o = relforge(&["add", s(&a), s(&a), "--monoid", s(&m)]);
    assert_eq!(stdout(&o), "relation arity=1 order=3\n2 2 0\n");
    let bad = write(&dir, "bad.monoid", "monoid order=2\n1 0\n0 1\n");
    assert_eq!(relforge(&["add", s(&a), s(&a), "--monoid", s(&bad)]).status.code(), Some(2));
}

#[test]
fn impossibility_and_derived_system() {
    let o = relforge(&["impossibility", "--max-terms", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("single-term matches: 0"));
    assert!(stdout(&o).contains("not representable within 2 term(s)"));
    let d = relforge(&["derived-system", "--order", "2", "--elements"]);
    assert!(stdout(&d).starts_with("elements: 16\n"));
    assert!(stdout(&d).contains("0: (0,0)\n"));
    let demo = relforge(&["derived-system", "--order", "3", "--operator-demo", "--samples", "10"]);
    assert_eq!(demo.status.code(), Some(0));
    assert!(stdout(&demo).ends_with("MATCH\n"));
}

#[test]
fn errors_exit_with_code_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.rel", "relation arity=1 order=2\n0 7\n");
    let o = relforge(&["show", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2, column 3"));
    assert_eq!(relforge(&["bogus"]).status.code(), Some(2));
    assert_eq!(relforge(&["decompose"]).status.code(), Some(2));
    let r = write(&dir, "r.rel", SUM_LEFT);
    let o = relforge(&["transform", s(&r), "--spec", "1,1,0"]);
    assert_eq!(o.status.code(), Some(2));
    let two = write(&dir, "two.rel", "relation arity=2 order=2\n0 1\n1 0\n");
    let o = relforge(&["decompose", s(&two)]);
    assert_eq!(o.status.code(), Some(2));
}
