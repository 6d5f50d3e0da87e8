use std::process::{Command, Output};

use pchaos_cli::{run, ExperimentConfig, ExperimentKind, Overrides};

fn pchaos(args: &[&str], out_dir: Option<&std::path::Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_pchaos"));
    c.args(args).env_remove(pchaos_cli::OUT_DIR_ENV);
    if let Some(d) = out_dir {
        c.env(pchaos_cli::OUT_DIR_ENV, d);
    }
    c.output().unwrap()
}

fn config(kind: ExperimentKind, text: &str) -> ExperimentConfig {
    ExperimentConfig::load(kind, Some(text), Overrides::default()).unwrap()
}

fn column(cfg: &ExperimentConfig, name: &str) -> Vec<f64> {
    let art = run(cfg, &mut std::io::sink()).unwrap();
    art.table().unwrap().rows.iter().map(|r| r.get_f64(name).unwrap()).collect()
}

#[test]
fn exit_codes() {
    assert_eq!(pchaos(&["mc-gamma"], None).status.code(), Some(2));
    assert_eq!(pchaos(&["no-such-kind", "--seed", "1"], None).status.code(), Some(2));
    assert_eq!(pchaos(&["oracle-check", "--seed", "1", "--config", "/nonexistent.toml"], None).status.code(), Some(2));
    assert_eq!(pchaos(&["oracle-check", "--seed", "1", "--engine", "nope"], None).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let big = dir.path().join("big.toml");
    std::fs::write(&big, "q = 4\nfamily = \"random\"\nsizes = [70]\n").unwrap();
    let out = pchaos(&["diagnostics-sequence", "--seed", "1", "--config", big.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let ok = pchaos(&["oracle-check", "--seed", "1"], None);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8(ok.stdout).unwrap().starts_with("q,N,sequence"));
}

#[test]
fn randomized_runs_log_streams_and_honour_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = pchaos(&["ustat-gap", "--seed", "3", "--samples", "50", "--format", "json"], Some(dir.path()));
    assert!(out.status.success());
    let log = String::from_utf8(out.stderr).unwrap();
    assert_eq!(log.lines().filter(|l| l.starts_with("stream ustat-gap")).count(), 3, "{log}");
    let text = std::fs::read_to_string(dir.path().join("ustat-gap.json")).unwrap();
    let rows: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 3);
}

#[test]
fn csv_and_json_carry_the_same_fields() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for fmt in ["csv", "json"] {
        let p = dir.path().join(format!("d.{fmt}"));
        let out = pchaos(&["diagnostics-sequence", "--seed", "1", "--format", fmt, "--out", p.to_str().unwrap()], None);
        assert!(out.status.success());
        files.push(std::fs::read_to_string(p).unwrap());
    }
    let header: Vec<&str> = files[0].lines().next().unwrap().split(',').collect();
    let json: serde_json::Value = serde_json::from_str(&files[1]).unwrap();
    let keys: Vec<&str> = json[0].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(header, keys);
    let second_row: Vec<&str> = files[0].lines().nth(2).unwrap().split(',').collect();
    assert_eq!(second_row[2], json[1]["second"].to_string());
}

#[test]
fn diagnostics_middle_deviation_decreases() {
    let cfg = config(ExperimentKind::DiagnosticsSequence, "seed = 1\nsizes = [8, 32, 128]\n");
    let dev = column(&cfg, "middle_dev");
    assert!(dev.windows(2).all(|w| w[1] < w[0]), "{dev:?}");
    let stat = column(&cfg, "gamma_statistic");
    assert_eq!(stat[0], -18.265625);
}

#[test]
fn oracle_check_matches_formulas() {
    let cfg = config(ExperimentKind::OracleCheck, "seed = 1\nsizes = [4]\n");
    assert!(column(&cfg, "max_rel_gap")[0] < 1e-8);
    let random = config(
        ExperimentKind::OracleCheck,
        "seed = 2\nsamples = 5\nfamily = \"random\"\nsizes = [3, 5]\nlambda-range = [0.5, 3.0]\n",
    );
    assert!(column(&random, "max_rel_gap").iter().all(|&g| g < 1e-8));
    let gauss = config(ExperimentKind::OracleCheck, "seed = 3\nsizes = [4]\n[sequence]\nkind = \"gaussian\"\n");
    assert_eq!(column(&gauss, "exact_m3")[0], 3.0);
}

#[test]
fn identities_report_no_violations() {
    let cfg = config(ExperimentKind::Identities, "seed = 4\nsamples = 10\nq = 3\nfamily = \"random\"\nsizes = [2, 3]\n");
    assert!(column(&cfg, "identity_max_rel_gap").iter().all(|&g| g < 1e-10));
    assert!(column(&cfg, "upper_violations").iter().all(|&v| v == 0.0));
    assert!(column(&cfg, "reverse_violations").iter().all(|&v| v == 0.0));
}

#[test]
fn ustat_gamma_second_moment_is_consistent() {
    let cfg = config(ExperimentKind::UstatGamma, "seed = 5\nsamples = 5000\nsizes = [200]\n");
    let art = run(&cfg, &mut std::io::sink()).unwrap();
    let row = &art.table().unwrap().rows[0];
    let (m2, se, exact) = (row.get_f64("m2").unwrap(), row.get_f64("m2_se").unwrap(), row.get_f64("exact_m2").unwrap());
    assert!((m2 - exact).abs() < 5.0 * se, "{m2} ± {se} vs {exact}");
}
