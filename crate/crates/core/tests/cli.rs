use std::path::Path;
use std::process::{Command, Output};

use prsfam::construct::read_family_file;
use prsfam::report::parse_json_report;

fn prsfam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prsfam"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &Path, name: &str, extra: &[&str]) -> std::path::PathBuf {
    let out = dir.join(name);
    let mut args = vec!["gen"];
    args.extend_from_slice(extra);
    args.extend_from_slice(&["--out", path_str(&out)]);
    let o = prsfam(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn gen_f2_7_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "fam.txt", &["--construction", "f2", "--p", "7", "--d", "2"]);
    let fam = read_family_file(&path).unwrap();
    assert_eq!(fam.size(), 3);
    assert_eq!(fam.length(), 6);
}

#[test]
fn measure_phi_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "fam.txt", &["--construction", "f2", "--p", "7", "--d", "2"]);
    let o = prsfam(&["measure", "--in", path_str(&path), "--measure", "phi", "--ell", "2", "--mode", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = parse_json_report(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].name, "Phi");
    assert_eq!(rows[0].order, Some(2));
    assert!(rows[0].exact_value().unwrap().is_integer());
    assert!(rows[0].witness.is_some());
    assert_eq!(rows[0].mode, "exact");
}

#[test]
fn sampled_mode_is_labeled() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "fam.txt", &["--construction", "f2", "--p", "11", "--d", "2"]);
    let o = prsfam(&[
        "measure", "--in", path_str(&path), "--measure", "gamma", "--ell", "2", "--mode", "sampled",
        "--samples", "50", "--seed", "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = parse_json_report(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    assert_eq!(rows[0].mode, "sampled-lower-bound");
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = gen(dir.path(), "ok.txt", &["--construction", "f2", "--p", "5", "--d", "3"]);
    let o = prsfam(&["verify", "--in", path_str(&ok), "--c", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let rows = parse_json_report(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    let exact_violations = rows
        .iter()
        .filter(|r| r.satisfied == Some(false) && r.kind.as_deref().is_some_and(|k| k.starts_with("exact")))
        .count();
    assert_eq!(exact_violations, 0);

    let dup = gen(dir.path(), "dup.txt", &["--construction", "f2", "--p", "7", "--d", "3"]);
    let o = prsfam(&["verify", "--in", path_str(&dup), "--format", "text"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stdout).contains("VIOLATED"));
}

#[test]
fn budget_error_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "fam.txt", &["--construction", "f2", "--p", "13", "--d", "2"]);
    let o = prsfam(&["measure", "--in", path_str(&path), "--measure", "Phi", "--ell", "3", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(prsfam(&["gen", "--bogus"]).status.code(), Some(2));
    assert_eq!(prsfam(&[]).status.code(), Some(2));
    let o = prsfam(&["gen", "--construction", "ksym", "--p", "7", "--d", "2", "--k", "4", "--out", "/dev/null"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dual_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "fam.txt", &["--construction", "ksym", "--p", "7", "--d", "2", "--k", "3"]);
    let d1 = dir.path().join("d1.txt");
    let d2 = dir.path().join("d2.txt");
    assert_eq!(prsfam(&["dual", "--in", path_str(&path), "--out", path_str(&d1)]).status.code(), Some(0));
    assert_eq!(prsfam(&["dual", "--in", path_str(&d1), "--out", path_str(&d2)]).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&d2).unwrap());
    let d = read_family_file(&d1).unwrap();
    assert_eq!(d.size(), read_family_file(&path).unwrap().length());
}

#[test]
fn reports_identical_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "fam.txt", &["--construction", "f1", "--p", "11", "--d", "5"]);
    let run = |t: &str| prsfam(&["--threads", t, "measure", "--in", path_str(&path), "--measure", "Phi", "--ell", "2"]).stdout;
    assert_eq!(run("1"), run("8"));
}

#[test]
fn weil_text_report() {
    let o = prsfam(&["weil", "--poly", "1,0,1", "--p", "5", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("measured 1"));
}
