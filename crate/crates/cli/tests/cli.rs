use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use vmcascade::fme_text;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vmcascade"))
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn config(name: &str) -> PathBuf {
    root().join("configs").join(name)
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_config(cmd: &str, cfg: &Path, extra: &[&str]) -> Output {
    let mut c = bin();
    c.arg(cmd).arg("--config").arg(cfg).args(extra);
    c.output().expect("binary runs")
}

fn rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn h(p: &[f64]) -> f64 {
    -p.iter().filter(|&&v| v > 0.0).map(|v| v * v.log2()).sum::<f64>()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn bsc_closed_form_rows_match_the_evaluator() {
    let out = run_config("eval", &config("bsc-example.toml"), &[]);
    assert!(out.status.success());
    let t = rows(&out);
    let (kind, r1, r2, q) = (
        col(&t[0], "kind"),
        col(&t[0], "r1_plus_rb_min"),
        col(&t[0], "r2_plus_rb_min"),
        col(&t[0], "q"),
    );
    let closed: Vec<_> = t[1..].iter().filter(|r| r[kind] == "closed-form").collect();
    let eval: Vec<_> = t[1..].iter().filter(|r| r[kind] == "switching").collect();
    assert_eq!(closed.len(), 5);
    for (a, b) in closed.iter().zip(&eval) {
        assert_eq!((&a[q], &a[r1], &a[r2]), (&b[q], &b[r1], &b[r2]));
    }
    // q = 1/2 balances the two decoders
    let mid = closed.iter().find(|r| r[q] == "0.5").unwrap();
    assert_eq!(mid[r1], mid[r2]);
}

#[test]
fn single_action_cascade_needs_h_x_given_z_on_the_second_link() {
    let out = run_config("eval", &config("cascade-single-action.toml"), &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let t = rows(&out);
    let r2: f64 = t[1][col(&t[0], "r2_min")].parse().unwrap();
    let pxy = [0.4, 0.1, 0.15, 0.35];
    let pz_y = [[0.8, 0.2], [0.3, 0.7]];
    let mut pxz = [0.0; 4];
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                pxz[x * 2 + z] += pxy[x * 2 + y] * pz_y[y][z];
            }
        }
    }
    let pz = [pxz[0] + pxz[2], pxz[1] + pxz[3]];
    let expected = h(&pxz) - h(&pz);
    assert!((r2 - expected).abs() < 1e-8, "{r2} vs {expected}");
}

#[test]
fn revealing_to_both_decoders_equalizes_the_sum_rates() {
    let out = run_config("eval", &config("switching-both.toml"), &[]);
    assert!(out.status.success());
    let t = rows(&out);
    assert_eq!(t[1][col(&t[0], "r1_plus_rb_min")], t[1][col(&t[0], "r2_plus_rb_min")]);
}

#[test]
fn every_row_carries_the_config_hash() {
    for (cmd, cfg) in [("eval", "s-channel-example.toml"), ("optimize", "cr-optimize.toml")] {
        let out = run_config(cmd, &config(cfg), &[]);
        assert!(out.status.success());
        let t = rows(&out);
        assert_eq!(t[0][0], "config_hash");
        let hash = &t[1][0];
        assert_eq!(hash.len(), 16);
        assert!(t[1..].iter().all(|r| &r[0] == hash));
    }
}

#[test]
fn identical_config_and_seed_give_identical_bytes() {
    let a = run_config("optimize", &config("cr-optimize.toml"), &["--seed", "11"]);
    let b = run_config("optimize", &config("cr-optimize.toml"), &["--seed", "11"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = run_config("optimize", &config("cr-optimize.toml"), &["--seed", "12"]);
    assert_ne!(rows(&a)[1][0], rows(&c)[1][0], "the seed is part of the hash");
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let a = run_config("eval", &config("bsc-example.toml"), &["--out", path.to_str().unwrap()]);
    assert!(a.status.success());
    assert!(a.stdout.is_empty());
    let b = run_config("eval", &config("bsc-example.toml"), &[]);
    assert_eq!(std::fs::read(&path).unwrap(), b.stdout);
}

#[test]
fn validation_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        "builtin = \"bsc-example\"\n[model]\npxw = [0.5, 0.5]\n",
        "topology = \"cascade\"\nbogus = 1\n",
        "topology = \"switching\"\n[model]\nnx = 2\nnw = 2\npxw = [0.5, 0.6, 0.0, 0.0]\nlambdas = [0, 1, 1, 1]\n[eval]\nactions = [[0, 1, 0, 0, 0, 1, 0, 0]]\n",
        "builtin = \"bsc-example\"\n",
    ];
    for (i, text) in cases.iter().enumerate() {
        let p = write_temp(&dir, &format!("c{i}.toml"), text);
        let out = run_config("eval", &p, &[]);
        assert_eq!(out.status.code(), Some(2), "case {i}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(run(&["oracle-check", "--max-size", "9"]).status.code(), Some(2));
    assert_eq!(run(&["fme-check", "no-such-problem"]).status.code(), Some(2));
}

#[test]
fn unmeetable_budgets_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(config("cr-optimize.toml"))
        .unwrap()
        .replace("cost = [0.0, 1.0]", "cost = [0.5, 1.0]");
    let p = write_temp(&dir, "cr.toml", &text);
    let out = run_config("optimize", &p, &[]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn fme_check_exit_codes() {
    for p in ["prop2", "prop3"] {
        let out = run(&["fme-check", p, "--trials", "200"]);
        assert!(out.status.success());
        assert!(String::from_utf8_lossy(&out.stdout).ends_with("PASS\n"));
    }
    let out = run(&["fme-check", "prop2-mutated", "--trials", "200"]);
    assert_eq!(out.status.code(), Some(4));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("NOT equivalent") && text.ends_with("FAIL\n"));
}

#[test]
fn fme_fixtures_match_the_bundled_problems() {
    for (file, name) in [("prop2.fme", "prop2"), ("prop3.fme", "prop3"), ("prop2_mutated.fme", "prop2-mutated")] {
        let parsed = fme_text::parse(&std::fs::read_to_string(fixture(file)).unwrap()).unwrap();
        assert_eq!(parsed, fme_text::builtin(name).unwrap(), "{file}");
    }
    let ok = run(&["fme-check", fixture("prop3.fme").to_str().unwrap(), "--trials", "100"]);
    assert!(ok.status.success());
    let bad = run(&["fme-check", fixture("prop2_mutated.fme").to_str().unwrap(), "--trials", "100"]);
    assert_eq!(bad.status.code(), Some(4));
}

#[test]
fn oracle_check_passes_fails_at_zero_tolerance_and_repeats() {
    let a = run(&["oracle-check", "--trials", "20", "--seed", "5"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    let b = run(&["oracle-check", "--trials", "20", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let z = run(&["oracle-check", "--trials", "20", "--seed", "5", "--tolerance", "0"]);
    assert_eq!(z.status.code(), Some(4));
}

#[test]
fn fig6_matches_the_golden_file() {
    let out = run(&["fig6"]);
    assert!(out.status.success());
    let golden = std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/fig6.csv")).unwrap();
    assert_eq!(out.stdout, golden);
}
