use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nnls_approx::export::ApproximantRecord;
use nnls_approx::{preset, ExperimentConfig, PlantedAtom, PresetName, TargetKind};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nnls-approx"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn small_config(m: usize) -> ExperimentConfig {
    let mut cfg = preset(PresetName::ExpsumStretched, 0.5, m).unwrap();
    cfg.n = 400;
    cfg.l = 60;
    cfg.b = 100.0;
    cfg
}

fn write_config(dir: &Path, cfg: &ExperimentConfig) -> String {
    let path = dir.join("config.toml");
    fs::write(&path, cfg.to_config_string().unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn listed_outputs(dir: &Path) -> Vec<String> {
    manifest(dir)["outputs"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect()
}

fn files_under(root: &Path) -> Vec<String> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push(p.strip_prefix(root).unwrap().to_str().unwrap().to_string());
            }
        }
    }
    out.sort();
    out
}

fn assert_manifest_complete(dir: &Path) {
    let mut listed = listed_outputs(dir);
    listed.sort();
    assert_eq!(listed, files_under(dir));
}

#[test]
fn rational_preset_writes_ten_parameters() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let o = run(&["approximate", "--preset", "rational_power", "--alpha", "0.5", "--m", "10", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let params = fs::read_to_string(out.join("params.csv")).unwrap();
    let lines: Vec<&str> = params.lines().collect();
    assert_eq!(lines[0], "i,u,v");
    assert_eq!(lines.len(), 11);
    let trace = fs::read_to_string(out.join("trace.csv")).unwrap();
    assert!(trace.starts_with("iter,residual_norm,support_size\n"));
    let curve = fs::read_to_string(out.join("error_curve.csv")).unwrap();
    assert_eq!(curve.lines().count(), 5001);
    let rec: ApproximantRecord = serde_json::from_str(&fs::read_to_string(out.join("params.json")).unwrap()).unwrap();
    assert_eq!(rec.terms.len(), 10);
    assert_eq!(rec.pin_value, 1.0);
    assert_manifest_complete(&out);
}

#[test]
fn unattained_term_count_fails_with_diagnostic() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let o = run(&[
        "approximate", "--preset", "expsum_stretched", "--m", "40", "--max-outer", "8", "--n", "500", "--l", "100",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("attained support sizes"), "{stderr}");
    assert!(!out.join("params.csv").exists());
    assert!(manifest(&out)["solver_summary"]["error"].is_string());
    assert_manifest_complete(&out);
}

#[test]
fn planted_atoms_are_recovered_from_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = small_config(3);
    cfg.target = TargetKind::Planted;
    cfg.l = 16;
    cfg.c = 1e-2;
    cfg.d = 1e2;
    cfg.planted = vec![
        PlantedAtom { index: 1, u: 0.25 },
        PlantedAtom { index: 6, u: 1.75 },
        PlantedAtom { index: 13, u: 0.5 },
    ];
    let conf = write_config(tmp.path(), &cfg);
    let out = tmp.path().join("run");
    let o = run(&["approximate", "--config", &conf, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rec: ApproximantRecord = serde_json::from_str(&fs::read_to_string(out.join("params.json")).unwrap()).unwrap();
    let v = |k: usize| 1e-2 * 1e4f64.powf(k as f64 / 15.0);
    assert_eq!(rec.terms.len(), 3);
    for ((u, vv), p) in rec.terms.iter().zip(&cfg.planted) {
        assert!((u - p.u).abs() < 1e-8, "{u} vs {}", p.u);
        assert!((vv - v(p.index)).abs() <= 1e-12 * vv);
    }
    assert!(rec.residual_norm.unwrap() < 1e-8);
}

#[test]
fn flags_override_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let conf = write_config(tmp.path(), &small_config(10));
    let out = tmp.path().join("run");
    let o = run(&["approximate", "--config", &conf, "--m", "4", "--alpha", "0.25", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(&out);
    assert_eq!(m["config"]["m"], 4);
    assert_eq!(m["config"]["alpha"], 0.25);
    assert_eq!(m["config"]["n"], 400);
    assert_eq!(fs::read_to_string(out.join("params.csv")).unwrap().lines().count(), 5);
}

#[test]
fn preset_and_config_are_exclusive() {
    let tmp = tempfile::tempdir().unwrap();
    let conf = write_config(tmp.path(), &small_config(10));
    assert!(!run(&["approximate", "--config", &conf, "--preset", "rational_power"]).status.success());
    assert!(!run(&["approximate"]).status.success());
    assert!(!run(&["approximate", "--preset", "unknown_preset"]).status.success());
}

#[test]
fn reference_table_is_evaluated_on_its_grid() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("ref");
    let o = run(&["reference", "table1_a50", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let params = fs::read_to_string(out.join("params.csv")).unwrap();
    assert_eq!(params.lines().nth(1).unwrap(), "1,1.263660e-04,5.816049e-09");
    let curve = fs::read_to_string(out.join("error_curve.csv")).unwrap();
    let xs: Vec<f64> = curve.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(xs.len(), 5000);
    assert!(xs[0] > 1.0 && xs[xs.len() - 1] < 1e15 && xs[xs.len() - 1] > 1e14);
    let r = manifest(&out)["solver_summary"]["residual_norm"].as_f64().unwrap();
    assert!(r.is_finite() && r > 0.0);
    assert_manifest_complete(&out);

    let out = tmp.path().join("ref2");
    let o = run(&["reference", "table2_a50", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let curve = fs::read_to_string(out.join("error_curve.csv")).unwrap();
    let last: f64 = curve.lines().last().unwrap().split(',').next().unwrap().parse().unwrap();
    assert!(last < 1e3 && last > 9e2);
}

#[test]
fn unknown_reference_table_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["reference", "table3_a50", "--out", tmp.path().join("x").to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("table1_a25"));
}

#[test]
fn single_element_sweep_matches_approximate() {
    let tmp = tempfile::tempdir().unwrap();
    let conf = write_config(tmp.path(), &small_config(6));
    let single = tmp.path().join("single");
    let swept = tmp.path().join("sweep");
    assert!(run(&["approximate", "--config", &conf, "--out", single.to_str().unwrap()]).status.success());
    let o = run(&["sweep", "--config", &conf, "--m-list", "6", "--out", swept.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["params.csv", "error_curve.csv", "params.json"] {
        assert_eq!(fs::read(single.join(f)).unwrap(), fs::read(swept.join("m_6").join(f)).unwrap(), "{f}");
    }
    assert_eq!(fs::read(single.join("trace.csv")).unwrap(), fs::read(swept.join("trace.csv")).unwrap());
    assert_manifest_complete(&swept);
}

#[test]
fn sweep_records_failures_per_row() {
    let tmp = tempfile::tempdir().unwrap();
    let conf = write_config(tmp.path(), &small_config(6));
    let out = tmp.path().join("sweep");
    let o = run(&["sweep", "--config", &conf, "--m-list", "2,4,500", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines[0], "m,selected_iter,residual_norm,max_epsilon,status");
    assert!(lines[1].starts_with("2,") && lines[1].ends_with(",ok"));
    assert!(lines[2].starts_with("4,") && lines[2].ends_with(",ok"));
    assert!(lines[3].starts_with("500,,,,") && lines[3].contains("attained support sizes"));
    assert!(!out.join("m_500").exists());
    assert_manifest_complete(&out);
}

#[test]
fn l_sweep_runs_one_solve_per_size() {
    let tmp = tempfile::tempdir().unwrap();
    let conf = write_config(tmp.path(), &small_config(5));
    let out = tmp.path().join("sweep");
    let o = run(&["sweep", "--config", &conf, "--l-list", "30,60,120", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    let rows: Vec<&str> = summary.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    for (row, l) in rows.iter().zip(["30", "60", "120"]) {
        assert!(row.starts_with(&format!("{l},")) && row.ends_with(",ok"), "{row}");
        assert!(out.join(format!("l_{l}")).join("trace.csv").exists());
    }
    assert_manifest_complete(&out);
    assert!(!run(&["sweep", "--config", &conf, "--out", out.to_str().unwrap()]).status.success());
}

#[test]
fn identical_runs_give_identical_parameters() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for out in [&a, &b] {
        let o = run(&["approximate", "--preset", "expsum_stretched", "--alpha", "0.5", "--out", out.to_str().unwrap()]);
        assert!(o.status.success());
    }
    assert_eq!(fs::read(a.join("params.csv")).unwrap(), fs::read(b.join("params.csv")).unwrap());
}

#[test]
fn design_dump_has_header_and_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let conf = write_config(tmp.path(), &small_config(3));
    let out = tmp.path().join("run");
    let o = run(&["approximate", "--config", &conf, "--dump-design", "--dump-trace-coefficients", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let design = fs::read_to_string(out.join("design.csv")).unwrap();
    let mut lines = design.lines();
    assert!(lines.next().unwrap().starts_with("# n=400 l=60"));
    assert_eq!(lines.count(), 400);
    assert!(out.join("trace_coefficients.csv").exists());
    assert_manifest_complete(&out);
}
