//! End-to-end runs of the binary over the shipped fixture files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_proxcalc"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        stdout(&out),
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

fn value_of(text: &str, key: &str) -> f64 {
    let prefix = format!("{key}=");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no `{key}=` line in:\n{text}"))
        .parse()
        .unwrap()
}

#[test]
fn every_fixture_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let trace = |n: &str| dir.path().join(n).to_string_lossy().into_owned();

    // (subcommand, fixture, extra args)
    let runs: Vec<(&str, &str, Vec<String>)> = vec![
        (
            "prox-sum",
            "ex9809.json",
            vec!["--trace".into(), trace("a.csv")],
        ),
        (
            "prox-sum",
            "ex1.json",
            vec!["--trace".into(), trace("b.csv")],
        ),
        (
            "prox-sum",
            "ex2.json",
            vec!["--trace".into(), trace("c.csv")],
        ),
        (
            "prox-sum",
            "ex2bis.json",
            vec!["--trace".into(), trace("d.csv")],
        ),
        ("oracle", "ex3.json", vec![]),
        ("oracle", "ex2.json", vec![]),
        ("dr", "dr.json", vec!["--trace".into(), trace("e.csv")]),
        ("fb", "fb.json", vec!["--trace".into(), trace("f.csv")]),
        (
            "fb",
            "fb_classical.json",
            vec!["--trace".into(), trace("g.csv")],
        ),
        ("sensitivity", "sensitivity.json", vec![]),
        ("falsify", "n4.json", vec![]),
        (
            "figure",
            "ex2.json",
            vec!["--out".into(), trace("band.csv")],
        ),
    ];
    for (cmd, file, extra) in runs {
        let path = fixture(file);
        let mut args: Vec<String> = vec![cmd.into(), path.to_string_lossy().into_owned()];
        args.extend(extra);
        let out = bin().args(&args).output().expect("binary runs");
        assert!(
            out.status.success(),
            "{cmd} {file}: exit {:?}\nstderr: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn prox_sum_quadratic_pair() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.csv");
    let text = run_ok(&[
        "prox-sum",
        fixture("ex9809.json").to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
        "--assert-monotone",
    ]);
    assert!((value_of(&text, "prox") - 1.0).abs() <= 1e-9, "{text}");
    assert!(text.contains("converged=true"), "{text}");
    assert!(text.contains("monotone=true"), "{text}");
    let csv = std::fs::read_to_string(trace).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("iter,residual"));
    assert!(lines.next().unwrap().starts_with("1,"));
}

#[test]
fn prox_sum_box_abs() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.csv");
    let text = run_ok(&[
        "prox-sum",
        fixture("ex1.json").to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(text.contains("prox=1.0\n"), "{text}");
}

#[test]
fn oracle_reports_set_and_resolution() {
    let text = run_ok(&["oracle", fixture("ex2.json").to_str().unwrap()]);
    assert!(text.contains("prox_sum=0.0"), "{text}");
    assert!(
        text.contains("set=[") && text.contains("grid_step="),
        "{text}"
    );

    let text = run_ok(&["oracle", fixture("ex3.json").to_str().unwrap()]);
    assert!(text.contains("set=empty"), "{text}");
}

#[test]
fn unverified_additivity_exits_2_then_3_when_forced() {
    let path = fixture("ex3.json");
    let out = bin()
        .args(["prox-sum", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.csv");
    let out = bin()
        .args([
            "prox-sum",
            path.to_str().unwrap(),
            "--force",
            "--trace",
            trace.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // the non-converged run still reports its state and trace
    assert!(stdout(&out).contains("converged=false"));
    assert!(trace.exists());
}

#[test]
fn figure_band_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("band.csv");
    run_ok(&[
        "figure",
        fixture("ex2.json").to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let csv = std::fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,set_lo,set_hi,prox_g");
    assert_eq!(lines.len(), 1 + 601);
    // x = -3 row: band [-4, -2], prox_g = -2
    let first: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    assert!((first[0] + 3.0).abs() < 1e-12);
    assert!((first[1] + 4.0).abs() < 2e-3);
    assert!((first[2] + 2.0).abs() < 2e-3);
    assert!((first[3] + 2.0).abs() < 1e-12);
}

#[test]
fn sensitivity_output() {
    let text = run_ok(&["sensitivity", fixture("sensitivity.json").to_str().unwrap()]);
    assert!(text.contains("u0=0.0"), "{text}");
    assert!(text.contains("cone=nonpos"), "{text}");
    assert!(text.contains("u_prime=-0.5"), "{text}");
    let fd_gap: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("fd_gap="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(fd_gap <= 1e-3);
}

#[test]
fn falsify_certificate() {
    let text = run_ok(&["falsify", fixture("n4.json").to_str().unwrap()]);
    assert!(text.starts_with("gap 0.0625 at gamma=-0.5"), "{text}");
}

#[test]
fn fb_variants() {
    let dir = tempfile::tempdir().unwrap();
    let text = run_ok(&[
        "fb",
        fixture("fb.json").to_str().unwrap(),
        "--trace",
        dir.path().join("a.csv").to_str().unwrap(),
    ]);
    assert!((value_of(&text, "prox") - 1.0).abs() <= 1e-9, "{text}");

    let text = run_ok(&[
        "fb",
        fixture("fb_classical.json").to_str().unwrap(),
        "--trace",
        dir.path().join("b.csv").to_str().unwrap(),
    ]);
    assert!(value_of(&text, "prox").abs() <= 1e-9, "{text}");
}

#[test]
fn dr_minimizes() {
    let dir = tempfile::tempdir().unwrap();
    let text = run_ok(&[
        "dr",
        fixture("dr.json").to_str().unwrap(),
        "--trace",
        dir.path().join("t.csv").to_str().unwrap(),
    ]);
    assert!(text.contains("prox=0.0\n"), "{text}");
}

#[test]
fn parse_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = bin()
        .args(["prox-sum", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    let missing = dir.path().join("missing.json");
    let out = bin()
        .args(["prox-sum", missing.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // dimension mismatch between declared space and x
    let mismatched = dir.path().join("mismatch.json");
    std::fs::write(
        &mismatched,
        r#"{"space": {"dim": 1}, "f": {"kind": "abs"}, "g": {"kind": "abs"}, "x": [1.0, 2.0]}"#,
    )
    .unwrap();
    let out = bin()
        .args(["prox-sum", mismatched.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
