//! Runs the `newswalk` binary and checks its files and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use newswalk_core::io::{ingest_prices, parse_config, read_analysis, read_report};
use newswalk_core::experiment::SeriesStats;
use newswalk_core::{returns_from_prices, simulate};

fn newswalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_newswalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn config_path(name: &str) -> String {
    format!("{}/../../configs/{name}.cfg", env!("CARGO_MANIFEST_DIR"))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let cfg = config_path("fig2_news");
    for out in [&a, &b] {
        let o = newswalk(&["simulate", "--config", &cfg, "--seed", "5", "--steps", "500", "--out", s(out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn scenario_writes_report_and_tables() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = newswalk(&[
            "scenario", "--preset", "fig2", "--realizations", "3", "--steps", "1500",
            "--max-lag", "20", "--out", s(out),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for file in ["report.txt", "acf.csv", "tail_curve.csv", "path.csv"] {
        assert_eq!(fs::read(a.join(file)).unwrap(), fs::read(b.join(file)).unwrap(), "{file}");
    }
    let report = read_report(&fs::read_to_string(a.join("report.txt")).unwrap()).unwrap();
    assert_eq!(report.per_seed.len(), 3);
    assert_eq!(report.steps, 1500);
    let acf_rows = fs::read_to_string(a.join("acf.csv")).unwrap().lines().count();
    assert_eq!(acf_rows, 22);
}

#[test]
fn analyze_matches_in_process_statistics() {
    let dir = tempfile::tempdir().unwrap();
    let series = dir.path().join("series.csv");
    let analysis = dir.path().join("analysis.txt");
    let cfg = config_path("fig2_news");
    let o = newswalk(&["simulate", "--config", &cfg, "--steps", "3000", "--out", s(&series)]);
    assert!(o.status.success());
    let o = newswalk(&[
        "analyze", "--input", s(&series), "--column", "price", "--max-lag", "30", "--out",
        s(&analysis),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = read_analysis(&fs::read_to_string(&analysis).unwrap()).unwrap();

    let mut parsed = parse_config(&fs::read_to_string(&cfg).unwrap()).unwrap().config;
    parsed.steps = 3000;
    let direct = simulate(&parsed, 0).unwrap();
    let expected = SeriesStats::compute(&direct.returns, 100.0, 30, 50);

    assert_eq!(report.rows, 3001);
    assert!((report.returns.std - expected.std).abs() <= 1e-12 * expected.std.max(1.0));
    let k = report.returns.kurtosis.value().unwrap();
    let k0 = expected.kurtosis.value().unwrap();
    assert!((k - k0).abs() <= 1e-12 * k0.abs().max(1.0));
    let acf = &report.returns.acf.value().unwrap().values;
    let acf0 = &expected.acf.value().unwrap().values;
    for (x, y) in acf.iter().zip(acf0) {
        assert!((x - y).abs() <= 1e-12);
    }
    let fit = report.returns.tail_fit.value().unwrap();
    let fit0 = expected.tail_fit.value().unwrap();
    assert_eq!(fit.n_tail, fit0.n_tail);
    assert!((fit.alpha - fit0.alpha).abs() <= 1e-12 * fit0.alpha);
}

#[test]
fn fit_tail_prints_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let series = dir.path().join("series.csv");
    let cfg = config_path("fig2_news");
    assert!(newswalk(&["simulate", "--config", &cfg, "--steps", "3000", "--out", s(&series)])
        .status
        .success());
    let o = newswalk(&["fit-tail", "--input", s(&series), "--column", "price"]);
    assert!(o.status.success());
    let stdout = String::from_utf8(o.stdout).unwrap();
    let alpha: f64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("alpha="))
        .unwrap()
        .parse()
        .unwrap();
    let table = ingest_prices(&fs::read_to_string(&series).unwrap(), "price").unwrap();
    let returns = returns_from_prices(&table.prices).unwrap();
    let abs: Vec<f64> = returns.iter().map(|r| r.abs() * 100.0).collect();
    let fit = newswalk_core::stats::fit_power_law(&abs, 50).unwrap();
    assert!((alpha - fit.alpha).abs() <= 1e-12 * fit.alpha);
}

#[test]
fn errors_exit_nonzero_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad_cfg = dir.path().join("bad.cfg");
    fs::write(&bad_cfg, "regime = news\nbogus = 1\n").unwrap();
    let prices = dir.path().join("p.csv");
    fs::write(&prices, "date,close\n1,10\n2,abc\n").unwrap();
    let out = dir.path().join("o");

    let cases: Vec<Vec<&str>> = vec![
        vec!["simulate", "--config", s(&bad_cfg), "--out", s(&out)],
        vec!["simulate", "--config", "/nonexistent/x.cfg", "--out", s(&out)],
        vec!["analyze", "--input", s(&prices), "--column", "close", "--out", s(&out)],
        vec!["analyze", "--input", s(&prices), "--column", "open", "--out", s(&out)],
        vec!["fit-tail", "--input", s(&prices), "--column", "close"],
    ];
    for args in cases {
        let o = newswalk(&args);
        assert!(!o.status.success(), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("error: "));
    }
    let o = newswalk(&["scenario", "--preset", "nope", "--out", s(&out)]);
    assert!(!o.status.success());
}
