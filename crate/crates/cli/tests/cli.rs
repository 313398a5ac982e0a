use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use coxbuild_core::report::parse_machine;

fn inputs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../inputs")
}

fn run(args: &[&str], envs: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_coxbuild"));
    cmd.args(args).env_remove("COXBUILD_CACHE_DIR").env_remove("COXBUILD_MAX_ELEMENTS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn input(name: &str) -> String {
    inputs().join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn classify_summaries() {
    let o = run(&["classify", "--input", &input("pentagon.json")], &[]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("infinite, non-affine, hyperbolic"));
    let o = run(&["classify", "--input", &input("triangle-333.json")], &[]);
    assert!(stdout(&o).contains("affine (~A2), not hyperbolic"));
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"generators":["a","b"],"coxeter_matrix":[[1,3],[4,1]]}"#).unwrap();
    let o = run(&["classify", "--input", bad.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("asymmetric"));
    std::fs::write(&bad, "not json").unwrap();
    let o = run(&["classify", "--input", bad.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("schema error"));
}

#[test]
fn unequal_thickness_on_a_class_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("q.json");
    std::fs::write(
        &f,
        r#"{"generators":["r","s","t"],"coxeter_matrix":[[1,3,3],[3,1,3],[3,3,1]],"thickness":{"r":2,"s":2,"t":3}}"#,
    )
    .unwrap();
    let o = run(&["report", "--input", f.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("class constancy"));
}

#[test]
fn missing_file_names_the_path() {
    let o = run(&["nerve", "--input", "/no/such/input.json"], &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/no/such/input.json"));
}

#[test]
fn exponent_grid_flips_for_the_pentagon() {
    let o = run(&["exponents", "--input", &input("pentagon.json"), "--p-grid", "2.25,5/2", "--format", "machine"], &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = parse_machine(&stdout(&o)).unwrap();
    let grid = &r.exponents.unwrap();
    let rows = &grid.computed().unwrap().grid;
    assert_eq!(format!("{:?}", rows[0].verdict), "Diverges");
    assert_eq!(format!("{:?}", rows[1].verdict), "Converges");
    assert!(r.growth.is_some() && r.confdim.is_none());
}

#[test]
fn machine_report_is_deterministic_and_parses() {
    let args = ["report", "--input", &input("pentagon.json"), "--format", "machine"];
    let a = run(&args, &[]);
    let b = run(&args, &[]);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let c = run(&seq, &[]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let r = parse_machine(&stdout(&a)).unwrap();
    assert_eq!(r.input.generators.len(), 5);
}

#[test]
fn cache_hits_give_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["report", "--input", &input("pentagon.json"), "--format", "machine"];
    let cold = run(&args, &[("COXBUILD_CACHE_DIR", dir.path())]);
    assert!(stderr(&cold).contains("cache: Miss"));
    let warm = run(&args, &[("COXBUILD_CACHE_DIR", dir.path())]);
    assert!(stderr(&warm).contains("cache: Hit"));
    assert_eq!(cold.stdout, warm.stdout);
    let file = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let mut text = std::fs::read_to_string(&file).unwrap();
    text.push_str("{\"truncated\n");
    std::fs::write(&file, text).unwrap();
    let rebuilt = run(&args, &[("COXBUILD_CACHE_DIR", dir.path())]);
    assert!(stderr(&rebuilt).contains("cache: Rebuilt"));
    assert_eq!(cold.stdout, rebuilt.stdout);
}

#[test]
fn oracle_on_a_non_right_angled_system_is_skipped() {
    let o = run(&["verify-oracle", "--input", &input("triangle-333.json")], &[]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("skipped: system is not right-angled"));
}

#[test]
fn oracle_radius_beyond_the_cap_exits_with_three() {
    let o = run(&["verify-oracle", "--input", &input("pentagon.json"), "--radius", "9", "--max-elements", "50000"], &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("--max-elements"));
}

#[test]
fn oracle_passes_on_the_tree() {
    let o = run(&["verify-oracle", "--input", &input("dihedral-tree.json"), "--radius", "6", "--trials", "100"], &[]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("all passed: true"));
}

#[test]
fn finite_group_report_is_annotated() {
    let o = run(&["report", "--input", &input("a2.json")], &[]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("finite Weyl group: all higher invariants trivial"));
    assert!(out.contains("(default)"));
}

#[test]
fn lambda_flag_gives_a_concrete_upper_bound() {
    let o = run(&["confdim", "--input", &input("pentagon.json"), "--lambda", "bourdon", "--apartment-confdim", "1"], &[]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("[BourdonPreset]"), "{out}");
    assert!(out.contains("[UserSupplied]"), "{out}");
}

#[test]
fn bad_p_grid_is_an_input_error() {
    let o = run(&["exponents", "--input", &input("pentagon.json"), "--p-grid", "1,2"], &[]);
    assert_eq!(o.status.code(), Some(2));
}
