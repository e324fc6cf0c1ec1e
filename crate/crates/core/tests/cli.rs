use std::path::Path;
use std::process::{Command, Output};

use dirichlet_forge::cli::{parse_config, run_with_io, CONFIG_ENV};
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_dirichlet-forge");

fn forge(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove(CONFIG_ENV)
        .output()
        .unwrap()
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn single(out: &Output) -> Value {
    let mut v = json_lines(out);
    assert_eq!(v.len(), 1, "{v:?}");
    v.remove(0)
}

fn re(v: &Value) -> f64 {
    v["re"].as_f64().unwrap()
}

#[test]
fn zeta_at_two() {
    let out = forge(&["zeta", "--sigma", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = single(&out);
    assert_eq!(v["op"], "zeta");
    assert!((re(&v) - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-10);
    assert_eq!(v["rigorous"], true);
    assert_eq!(v["params"]["sigma"], 2.0);
    // Keys are sorted.
    let text = String::from_utf8(out.stdout).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(text.starts_with("{\"error_bound\""));
}

#[test]
fn zeta_at_the_pole_is_an_error() {
    let out = forge(&["zeta", "--sigma", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn l_function_and_series() {
    let v = single(&forge(&["lfunction", "--character", "4:1", "--sigma", "1"]));
    assert!((re(&v) - std::f64::consts::FRAC_PI_4).abs() < 1e-10);
    let v = single(&forge(&[
        "dirichlet",
        "--coeff",
        "unit",
        "--sigma",
        "2",
        "--terms",
        "10000",
    ]));
    assert!((re(&v) - 1.64488).abs() < 1e-4);
    assert!(v["error_bound"].as_f64().unwrap() <= 1e-4);
    let out = forge(&["lfunction", "--character", "4:7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn beurling_examples() {
    let v = single(&forge(&[
        "beurling",
        "--system",
        "quadratic:-1",
        "--sigma",
        "2",
    ]));
    assert!((re(&v) - 1.5067030).abs() < 1e-4);
    let out = forge(&[
        "beurling",
        "--check",
        "divergence",
        "--sigmas",
        "1.5,1.2,1.05",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = single(&out);
    let values: Vec<f64> = v["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]));
    let v = single(&forge(&[
        "beurling",
        "--check",
        "divergence",
        "--sigmas",
        "2",
    ]));
    assert!((v["values"][0].as_f64().unwrap() - 0.4522474).abs() < 1e-4);
}

#[test]
fn failing_checks_exit_with_one() {
    let out = forge(&[
        "monotone",
        "--function",
        "identity",
        "--from",
        "1.5",
        "--to",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = single(&out);
    assert_eq!(v["passed"], false);
    assert_eq!(v["first_failing_order"], 1);
    let out = forge(&[
        "monotone",
        "--function",
        "log-zeta",
        "--from",
        "1.5",
        "--to",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn zerofree_and_pingpong() {
    let v = single(&forge(&[
        "zerofree",
        "--check",
        "inequality",
        "--grid",
        "401",
    ]));
    assert!((v["minimum"].as_f64().unwrap() + 1.125).abs() < 1e-6);
    let v = single(&forge(&["pingpong", "--seed", "B:1", "--disjoint"]));
    assert_eq!(v["resolution"], "contradiction");
    let out = forge(&["pingpong", "--seed", "C:1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_all_small() {
    let out = forge(&["verify-all", "--max-n", "1000"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let lines = json_lines(&out);
    let summary = lines.last().unwrap();
    assert_eq!(summary["op"], "verify-all");
    assert_eq!(summary["failures"], 0);
    assert_eq!(summary["params"]["max_n"], 1000);
    assert!(lines[..lines.len() - 1].iter().all(|l| l["passed"] == true));
    assert_eq!(
        forge(&["verify-all", "--max-n", "10"]).status.code(),
        Some(2)
    );
}

#[test]
fn output_is_deterministic_across_threads() {
    let one = forge(&["--threads", "1", "verify-all", "--max-n", "1000"]);
    let four = forge(&["--threads", "4", "verify-all", "--max-n", "1000"]);
    let again = forge(&["--threads", "4", "verify-all", "--max-n", "1000"]);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(four.stdout, again.stdout);
    let a = forge(&[
        "--threads",
        "3",
        "dirichlet",
        "--coeff",
        "liouville",
        "--terms",
        "5000",
    ]);
    let b = forge(&["dirichlet", "--coeff", "liouville", "--terms", "5000"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_files() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("forge.conf");
    let write = |text: &str| std::fs::write(&config, text).unwrap();
    let c = config.to_str().unwrap();

    write("# defaults\nsigma = 3\n");
    let v = single(&forge(&["--config", c, "zeta"]));
    assert!((re(&v) - 1.2020569032).abs() < 1e-10);
    // The command line wins over the file.
    let v = single(&forge(&["--config", c, "zeta", "--sigma", "4"]));
    assert!((re(&v) - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-10);
    // The environment variable names a fallback file.
    let out = Command::new(BIN)
        .args(["zeta"])
        .env(CONFIG_ENV, &config)
        .output()
        .unwrap();
    assert!((re(&single(&out)) - 1.2020569032).abs() < 1e-10);

    write("");
    let v = single(&forge(&["--config", c, "zeta"]));
    assert!((re(&v) - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-10);

    for bad in [
        "sigma\n",
        "sigma = \n",
        "sigma = 2\nsigma = 3\n",
        "colour = blue\n",
    ] {
        write(bad);
        let out = forge(&["--config", c, "zeta"]);
        assert_eq!(out.status.code(), Some(2), "{bad:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = forge(&[
        "--config",
        dir.path().join("missing.conf").to_str().unwrap(),
        "zeta",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_parser() {
    let pairs = parse_config("a = 1\n# note\n\nmax_n=5\n").unwrap();
    assert_eq!(
        pairs,
        vec![
            ("a".to_string(), "1".to_string()),
            ("max-n".to_string(), "5".to_string())
        ]
    );
    assert!(parse_config("x").is_err());
    assert!(parse_config("x = 1\nx = 2").is_err());
}

#[test]
fn malformed_flags_print_usage() {
    for args in [
        vec!["zeta", "--sigma", "two"],
        vec!["zeta", "--bogus"],
        vec!["monotone", "--function", "cosh"],
        vec!["--format", "xml", "zeta"],
        vec!["--threads", "0", "zeta"],
        vec![],
    ] {
        let out = forge(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("Usage"), "{args:?}: {err}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn output_file_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zeta.json");
    let out = forge(&["--output", path.to_str().unwrap(), "zeta", "--sigma", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let direct = forge(&["zeta", "--sigma", "2"]);
    assert_eq!(text.as_bytes(), direct.stdout.as_slice());

    let out = forge(&["--format", "csv", "zeta", "--sigma", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "error_bound,im,op,params,re,rigorous,terms_used"
    );
    let row = lines.next().unwrap();
    assert!(row.contains("1.64493406685"));
    assert!(lines.next().is_none());
    assert!(
        forge(&["--output", "/nonexistent/dir/out.json", "zeta"])
            .status
            .code()
            == Some(2)
    );
}

#[test]
fn radius_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("series.csv");
    let mut csv = String::new();
    for n in 0..=100 {
        csv += &format!("{n},{}\n", if n == 0 { 0.0 } else { 1.0 / n as f64 });
    }
    std::fs::write(&path, csv).unwrap();
    let v = single(&forge(&["radius", "--input", path.to_str().unwrap()]));
    assert_eq!(v["passed"], true);
    assert!((v["radius_f"].as_f64().unwrap() - 1.0).abs() < 0.15);
}

#[test]
fn library_entry_point() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with_io(
        ["dirichlet-forge", "zeta", "--sigma", "2"]
            .map(String::from)
            .to_vec(),
        None::<&Path>,
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    assert!(String::from_utf8(out).unwrap().contains("1.64493406685"));
}
