//! End-to-end tests against the built binary: exit codes, file outputs,
//! manifests, and the documented closed-form values.

use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlevy"))
        .env_remove("TLEVY_CONFIG")
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_env(dir: &Path, env: (&str, &str), args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlevy"))
        .env_remove("TLEVY_CONFIG")
        .env(env.0, env.1)
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("read {name}: {e}"))
}

fn pdf_column(csv: &str) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn mixture_writes_exact_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["mixture", "--degrees", "1,1", "--weights", "1/2,1/2", "--out", "m"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = read(dir.path(), "m.csv");
    assert_eq!(csv, "j,numerator,denominator,float_value\n1,1,4,0.25\n2,3,4,0.75\n");

    let manifest: serde_json::Value =
        serde_json::from_str(&read(dir.path(), "m.manifest.json")).unwrap();
    assert_eq!(manifest["command"], "mixture");
    assert_eq!(manifest["parameters"]["weights"], "1/2,1/2");
    let hash = manifest["config_hash"].as_str().unwrap();
    assert_eq!(hash.len(), 64);
    assert!(hash.chars().all(|c| c.is_ascii_hexdigit()));
    assert!(manifest["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .any(|p| p == "m.json"));

    // single degree, weight 1: the expansion is the law itself
    let out = run(
        dir.path(),
        &["mixture", "--degrees", "2", "--weights", "1", "--out", "one"],
    );
    assert_eq!(code(&out), 0);
    assert!(read(dir.path(), "one.csv").contains("2,1,1,1"));
}

#[test]
fn mixture_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["mixture", "--degrees", "1,1", "--weights", "1/2,1/3"],
    );
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("sum to 1"), "{}", stderr(&out));

    let out = run(dir.path(), &["mixture", "--degrees", "1", "--weights", "x/y"]);
    assert_eq!(code(&out), 1);

    let out = run(dir.path(), &["mixture", "--degrees", "1,2", "--weights", "1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn density_fourier_matches_cauchy_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["density", "--nu", "1/2", "--c", "2", "--x", "0,1,3", "--method", "fourier", "--out", "d"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let vals = pdf_column(&read(dir.path(), "d.csv"));
    for (x, v) in [0.0f64, 1.0, 3.0].iter().zip(&vals) {
        let want = 2.0 / (std::f64::consts::PI * (4.0 + x * x));
        assert!((v - want).abs() < 1e-8, "x={x}: {v} vs {want}");
    }
}

#[test]
fn density_enforces_method_compatibility() {
    let dir = tempfile::tempdir().unwrap();
    let fourier_d2 = run(
        dir.path(),
        &["density", "--nu", "1", "--c", "2", "--d", "2", "--x", "1", "--method", "fourier"],
    );
    assert_eq!(code(&fourier_d2), 1);
    assert!(stderr(&fourier_d2).contains("d = 1"));

    let mixture_full_nu = run(
        dir.path(),
        &["density", "--nu", "1", "--c", "2", "--x", "1", "--method", "mixture"],
    );
    assert_eq!(code(&mixture_full_nu), 1);
    assert!(stderr(&mixture_full_nu).contains("half-integer"));

    let mixture_frac_c = run(
        dir.path(),
        &["density", "--nu", "3/2", "--c", "2.5", "--x", "1", "--method", "mixture"],
    );
    assert_eq!(code(&mixture_frac_c), 1);
    assert!(stderr(&mixture_frac_c).contains("integer c"));
}

#[test]
fn density_mixture_and_fourier_agree() {
    let dir = tempfile::tempdir().unwrap();
    let xs = "0,1,2,5,10,20";
    let a = run(
        dir.path(),
        &["density", "--nu", "3/2", "--c", "2", "--x", xs, "--method", "mixture", "--out", "a"],
    );
    let b = run(
        dir.path(),
        &["density", "--nu", "3/2", "--c", "2", "--x", xs, "--method", "fourier", "--out", "b"],
    );
    assert_eq!(code(&a), 0);
    assert_eq!(code(&b), 0);
    let va = pdf_column(&read(dir.path(), "a.csv"));
    let vb = pdf_column(&read(dir.path(), "b.csv"));
    let max_diff = va
        .iter()
        .zip(&vb)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0f64, f64::max);
    assert!(max_diff < 1e-6, "max diff {max_diff}");
}

#[test]
fn density_subordinated_bivariate_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["density", "--nu", "1", "--c", "1", "--d", "2", "--x", "0,1", "--method", "subordinated", "--out", "d2"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let vals = pdf_column(&read(dir.path(), "d2.csv"));
    // single bivariate density in closed form: (nu/pi) (1+|x|^2)^(-nu-1)
    for (x, v) in [0.0f64, 1.0].iter().zip(&vals) {
        let want = (1.0 / std::f64::consts::PI) * (1.0 + x * x).powi(-2);
        assert!((v - want).abs() < 1e-5, "x={x}: {v} vs {want}");
    }
}

#[test]
fn tailcheck_reports_exact_cauchy_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["tailcheck", "--nu", "1/2", "--c", "3", "--x", "5,10,30,50", "--out", "t"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = read(dir.path(), "t.csv");
    for (i, x) in [5.0f64, 10.0, 30.0, 50.0].iter().enumerate() {
        let ratio: f64 = csv.lines().nth(i + 1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
        let want = x * x / (9.0 + x * x);
        assert!((ratio - want).abs() / want < 1e-6, "x={x}");
    }
    assert!(dir.path().join("t.json").exists());
}

#[test]
fn tailcheck_nonconvergence_is_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("tight.json"), r#"{"tail_band": 1e-9}"#).unwrap();
    let out = run(
        dir.path(),
        &["tailcheck", "--nu", "3/2", "--c", "2", "--x", "10,30,50", "--config", "tight.json", "--out", "t"],
    );
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    // the report is still written for inspection
    assert!(dir.path().join("t.csv").exists());
}

#[test]
fn sample_is_reproducible_and_passes_ks() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "sample", "--spec", "student nu=1/2 d=1", "--n", "20000", "--seed", "42",
        "--oracle", "cauchy", "--out", "s",
    ];
    let out = run(dir.path(), &args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("p-value"));
    let first = read(dir.path(), "s.csv");
    assert_eq!(first.lines().count(), 20001);
    assert_eq!(first.lines().next(), Some("x1"));

    let sidecar: serde_json::Value =
        serde_json::from_str(&read(dir.path(), "s.sidecar.json")).unwrap();
    assert_eq!(sidecar["seed"], 42);
    assert_eq!(sidecar["spec"], "student nu=0.5 d=1 scale=spherical");

    let manifest: serde_json::Value =
        serde_json::from_str(&read(dir.path(), "s.manifest.json")).unwrap();
    assert_eq!(manifest["seed"], 42);

    // bit-identical rerun
    let again = run(dir.path(), &args);
    assert_eq!(code(&again), 0);
    assert_eq!(first, read(dir.path(), "s.csv"));

    // a different seed moves the data
    let other = run(
        dir.path(),
        &["sample", "--spec", "student nu=1/2 d=1", "--n", "20000", "--seed", "43", "--out", "s43"],
    );
    assert_eq!(code(&other), 0);
    assert_ne!(first, read(dir.path(), "s43.csv"));
}

#[test]
fn sample_walk_checks_mixture_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["sample", "--spec", "walk degrees=1,1 weights=1/2,1/2 d=1", "--n", "20000",
          "--seed", "7", "--oracle", "mixture", "--out", "w"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("mixture oracle"));

    // oracle checks are univariate-only
    let multi = run(
        dir.path(),
        &["sample", "--spec", "walk degrees=1,1 weights=1/2,1/2 d=2", "--n", "100",
          "--seed", "7", "--oracle", "mixture"],
    );
    assert_eq!(code(&multi), 1);

    // the mixture oracle is defined by a walk, not a plain student spec
    let not_walk = run(
        dir.path(),
        &["sample", "--spec", "student nu=1/2 d=1", "--n", "100", "--oracle", "mixture"],
    );
    assert_eq!(code(&not_walk), 1);

    let bad_spec = run(
        dir.path(),
        &["sample", "--spec", "walk degrees=1 weights=1/2,1/2", "--n", "100"],
    );
    assert_eq!(code(&bad_spec), 1);
}

#[test]
fn verify_corollary_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["verify", "corollary", "--out", "v"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS"));
    assert!(text.contains("equal-weight minimum coefficient"));
    let results: serde_json::Value =
        serde_json::from_str(&read(dir.path(), "v.results.json")).unwrap();
    assert_eq!(results.as_array().unwrap().len(), 1);
    assert_eq!(results[0]["id"], 2);
    assert_eq!(results[0]["passed"], true);

    let unknown = run(dir.path(), &["verify", "bogus"]);
    assert_eq!(code(&unknown), 1);
    assert!(stderr(&unknown).contains("unknown suite"));
}

#[test]
fn config_env_var_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), r#"{"laplace_order": 99}"#).unwrap();
    std::fs::write(dir.path().join("unk.json"), r#"{"bogus": 1}"#).unwrap();

    // env var supplies the default config path
    let via_env = run_env(
        dir.path(),
        ("TLEVY_CONFIG", "bad.json"),
        &["density", "--nu", "1/2", "--c", "1", "--x", "0", "--method", "subordinated"],
    );
    assert_eq!(code(&via_env), 1);

    // an explicit flag overrides the broken file value
    let repaired = run_env(
        dir.path(),
        ("TLEVY_CONFIG", "bad.json"),
        &["density", "--nu", "1/2", "--c", "1", "--x", "0", "--method", "subordinated",
          "--laplace-order", "16", "--out", "d"],
    );
    assert_eq!(code(&repaired), 0, "{}", stderr(&repaired));
    let vals = pdf_column(&read(dir.path(), "d.csv"));
    assert!((vals[0] - 1.0 / std::f64::consts::PI).abs() < 1e-5);

    // unknown keys are rejected, not ignored
    let unk = run(
        dir.path(),
        &["density", "--nu", "1/2", "--c", "1", "--x", "0", "--method", "subordinated",
          "--config", "unk.json"],
    );
    assert_eq!(code(&unk), 1);
    assert!(stderr(&unk).contains("bogus"));
}

#[test]
fn usage_errors_are_exit_1_and_help_is_exit_0() {
    let dir = tempfile::tempdir().unwrap();
    let help = run(dir.path(), &["--help"]);
    assert_eq!(code(&help), 0);
    assert!(stdout(&help).contains("tlevy"));

    let missing = run(dir.path(), &["density", "--nu", "1/2"]);
    assert_eq!(code(&missing), 1);

    let unknown_cmd = run(dir.path(), &["frobnicate"]);
    assert_eq!(code(&unknown_cmd), 1);
}
