use std::process::{Command, Output};

use serde_json::Value;

fn fdrlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdrlab"))
        .args(args)
        .env_remove("FDRLAB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = fdrlab(&all);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

/// Value of a `name  value` line in table output.
fn table_value(out: &str, name: &str) -> String {
    out.lines()
        .find_map(|l| {
            let mut it = l.split_whitespace();
            (it.next() == Some(name)).then(|| it.next().unwrap().to_string())
        })
        .unwrap_or_else(|| panic!("{name} missing from\n{out}"))
}

#[test]
fn screen_reproduces_the_worked_example() {
    let o = fdrlab(&[
        "screen",
        "--prevalence",
        "0.01",
        "--sensitivity",
        "0.8",
        "--specificity",
        "0.95",
        "--population",
        "10000",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(table_value(&out, "false_pos"), "495");
    assert_eq!(table_value(&out, "true_pos"), "80");
    let fdr: f64 = table_value(&out, "fdr").parse().unwrap();
    assert!((fdr - 0.861).abs() < 5e-4);
}

#[test]
fn screen_edge_cases_and_validation() {
    let v = json(&[
        "screen",
        "--prevalence",
        "0.2",
        "--sensitivity",
        "1",
        "--specificity",
        "1",
    ]);
    assert_eq!(num(&v["breakdown"]["fdr"]), 0.0);
    let o = fdrlab(&[
        "screen",
        "--prevalence",
        "1.5",
        "--sensitivity",
        "0.8",
        "--specificity",
        "0.9",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert_eq!(err.trim().lines().count(), 1, "{err}");
    assert!(err.contains("--prevalence"));
}

#[test]
fn fdr_with_odds() {
    let v = json(&[
        "fdr",
        "--prevalence",
        "0.1",
        "--power",
        "0.8",
        "--alpha",
        "0.05",
    ]);
    assert!((num(&v["breakdown"]["fdr"]) - 0.36).abs() < 1e-12);
    assert!((num(&v["odds"]["posterior_odds_h0"]) - 0.5625).abs() < 1e-12);
    let v = json(&["fdr", "--prevalence", "0.5"]);
    assert!((num(&v["breakdown"]["fdr"]) - 0.0588).abs() < 1e-4);
    let v = json(&["fdr", "--prevalence", "0"]);
    assert_eq!(v["odds"]["posterior_odds_h0"], "inf");
    assert_eq!(num(&v["breakdown"]["fdr"]), 1.0);

    let o = fdrlab(&["fdr", "--prevalence", "0.1", "--power", "0"]);
    assert_eq!(o.status.code(), Some(3));
    let o = fdrlab(&[
        "fdr",
        "--prevalence",
        "0.1",
        "--power",
        "0.03",
        "--alpha",
        "0.05",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn berger_modes() {
    let v = json(&["berger", "--p", "0.05"]);
    assert!((num(&v["min_fdr"]) - 0.289).abs() < 5e-4);
    let v = json(&["berger", "--table"]);
    assert_eq!(v.as_array().unwrap().len(), 6);
    let v = json(&["berger", "--target-fdr", "0.05"]);
    assert!((num(&v["p"]) - 0.0034078).abs() < 1e-6);

    let o = fdrlab(&["berger", "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("1/e"));
    assert_eq!(fdrlab(&["berger"]).status.code(), Some(2));
    assert_eq!(
        fdrlab(&["berger", "--p", "0.1", "--table"]).status.code(),
        Some(2)
    );
}

#[test]
fn power_modes() {
    let v = json(&["power", "--n", "16", "--d", "1"]);
    assert!((num(&v["power"]) - 0.78).abs() < 0.005);
    let v = json(&["power", "--solve", "--target", "0.8", "--d", "1"]);
    assert_eq!(v["n_per_group"], 17);
    assert_eq!(fdrlab(&["power", "--n", "1"]).status.code(), Some(2));
    assert_eq!(fdrlab(&["power", "--solve"]).status.code(), Some(2));
    assert_eq!(
        fdrlab(&["power", "--solve", "--target", "0.8", "--d", "0"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn csv_output_is_machine_readable() {
    let o = fdrlab(&["berger", "--table", "--format", "csv"]);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("p,bayes_factor,min_fdr"));
    let first: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(first[0], 0.2);
    assert_eq!(first[2], fdrlab::fdr::berger_min_fdr(0.2).unwrap());
}

#[test]
fn json_numbers_roundtrip() {
    let v = json(&["power", "--n", "7", "--d", "0.9"]);
    let direct =
        fdrlab::power::power_two_sample(&fdrlab::power::PowerQuery::new(7, 0.9, 0.05).unwrap())
            .unwrap();
    assert_eq!(num(&v["power"]), direct);
}

#[test]
fn simulate_single_batch() {
    let args = [
        "simulate",
        "--n-per-group",
        "16",
        "--delta",
        "0",
        "--n-sims",
        "20000",
    ];
    let v = json(&args);
    let f = num(&v["fraction_significant"]);
    assert!((f - 0.05).abs() < 0.005);
    assert_eq!(v["summary"]["config"]["master_seed"], 2014);
    assert_eq!(
        fdrlab(&["simulate", "--n-sims", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(fdrlab(&["simulate", "--sd", "0"]).status.code(), Some(2));
    assert_eq!(
        fdrlab(&["simulate", "--n-sims", "10", "--interval", "0.05,0.045"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn seed_flag_and_environment() {
    let base = ["simulate", "--n-sims", "3000", "--format", "json"];
    let a = fdrlab(&[&base[..], &["--seed", "99"]].concat());
    let b = fdrlab(&[&base[..], &["--seed", "99"]].concat());
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_fdrlab"))
        .args(base)
        .env("FDRLAB_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
    let d = fdrlab(&[&base[..], &["--seed", "100"]].concat());
    assert_ne!(a.stdout, d.stdout);
}

#[test]
fn simulate_mixture_with_interval() {
    let v = json(&[
        "simulate",
        "--n-sims",
        "30000",
        "--prevalence",
        "0.1",
        "--interval",
        "0.045,0.05",
    ]);
    assert!((num(&v["breakdown"]["fdr"]) - 0.36).abs() < 0.03);
    let i = &v["interval"];
    assert!((num(&i["fdr"]) - 0.76).abs() < 0.06);
    assert!(i["null_count"].as_u64().unwrap() > 0);
    assert_ne!(
        v["null_summary"]["config"]["master_seed"],
        v["effect_summary"]["config"]["master_seed"]
    );
}

#[test]
fn histogram_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hist.csv");
    let o = fdrlab(&[
        "simulate",
        "--delta",
        "0",
        "--n-sims",
        "4000",
        "--emit-histogram",
        path.to_str().unwrap(),
        "--bin-width",
        "0.1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("bin_left,count"));
    let rows: Vec<(f64, u64)> = lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 10);
    assert_eq!(rows[3].0, 0.3);
    assert_eq!(rows.iter().map(|r| r.1).sum::<u64>(), 4000);

    let bad = dir.path().join("missing").join("hist.csv");
    let o = fdrlab(&[
        "simulate",
        "--n-sims",
        "10",
        "--emit-histogram",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn inflation_rows_and_dedup() {
    let o = fdrlab(&[
        "inflation",
        "--n-list",
        "4,8,4",
        "--n-sims",
        "20000",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("more than once"));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!((num(&rows[0]["mean_diff_significant"]) - 1.8).abs() < 0.1);
    assert!((num(&rows[0]["power_analytic"]) - 0.2232).abs() < 1e-4);
    assert_eq!(
        fdrlab(&["inflation", "--n-list", "2,4"]).status.code(),
        Some(2)
    );
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(fdrlab(&["--help"]).status.code(), Some(0));
    assert_eq!(fdrlab(&["--version"]).status.code(), Some(0));
    assert_eq!(fdrlab(&["nonsense"]).status.code(), Some(2));
}
