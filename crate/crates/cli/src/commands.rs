use std::path::{Path, PathBuf};
use std::thread;

use anyhow::{Context, Result};
use nnls_approx::export::{
    error_curve_csv, format_sci, params_csv, trace_coefficients_csv, trace_csv, ApproximantRecord,
};
use nnls_approx::{
    build_grid, error_curve, load_reference_params, preset, solve_nnls, Approximant, Experiment,
    ExperimentConfig, Grid, ReferenceTable, Report, SolvedExperiment, Target,
};

use crate::manifest::{OutDir, SolverSummary};

pub struct Extras {
    pub dump_design: bool,
    pub dump_trace_coefficients: bool,
    pub eval_n: Option<usize>,
}

pub enum Sweep {
    M(Vec<usize>),
    L(Vec<usize>),
}

fn eval_grid(cfg: &ExperimentConfig, fit: &Grid, eval_n: Option<usize>) -> Result<Grid> {
    match eval_n {
        None => Ok(fit.clone()),
        Some(n) => build_grid(cfg.a, cfg.b, n, cfg.transform, cfg.weight)
            .context("building the evaluation grid"),
    }
}

/// params.csv, params.json and error_curve.csv under `prefix`.
fn emit_model(
    dir: &mut OutDir,
    prefix: &Path,
    approx: &Approximant,
    target: &Target,
    grid: &Grid,
) -> Result<Report> {
    let report = error_curve(approx, grid, target)?;
    dir.write(prefix.join("params.csv"), params_csv(approx).as_bytes())?;
    dir.write(prefix.join("params.json"), ApproximantRecord::new(approx, target).to_json()?.as_bytes())?;
    dir.write(prefix.join("error_curve.csv"), error_curve_csv(&report).as_bytes())?;
    Ok(report)
}

fn trace_summary(solved: &SolvedExperiment<f64>) -> SolverSummary {
    SolverSummary {
        termination: Some(solved.trace.terminated()),
        outer_iterations: Some(solved.trace.records().len()),
        support_sizes: solved.trace.support_sizes(),
        ..SolverSummary::default()
    }
}

/// Builds, assembles and solves, recording stage times.
fn solve_timed(cfg: &ExperimentConfig, dir: &mut OutDir, dump_design: bool) -> Result<SolvedExperiment<f64>> {
    let experiment = Experiment::<f64>::from_config(cfg)?;
    dir.lap("setup");
    let system = experiment.assemble()?;
    dir.lap("assemble");
    if dump_design {
        let mut buf = Vec::new();
        system.write_csv(&mut buf)?;
        dir.write("design.csv", &buf)?;
        dir.lap("dump_design");
    }
    let trace = solve_nnls(&system, &experiment.solver_options())?;
    dir.lap("solve");
    Ok(SolvedExperiment { experiment, trace })
}

pub fn approximate(cfg: &ExperimentConfig, out: &Path, extras: Extras) -> Result<()> {
    let mut dir = OutDir::create(out)?;
    let solved = solve_timed(cfg, &mut dir, extras.dump_design)?;
    dir.write("trace.csv", trace_csv(&solved.trace).as_bytes())?;
    if extras.dump_trace_coefficients {
        dir.write("trace_coefficients.csv", trace_coefficients_csv(&solved.trace).as_bytes())?;
    }
    let mut summary = trace_summary(&solved);

    let approx = match solved.approximant() {
        Ok(a) => a,
        Err(e) => {
            summary.error = Some(e.to_string());
            dir.finish("approximate", Some(cfg.clone()), None, summary)?;
            return Err(e).context(format!("selecting m = {} terms", cfg.m));
        }
    };
    dir.lap("select");
    let grid = eval_grid(cfg, &solved.experiment.grid, extras.eval_n)?;
    let report = emit_model(&mut dir, Path::new(""), &approx, &solved.experiment.target, &grid)?;
    dir.lap("evaluate_and_write");

    summary.selected_iter = approx.selected_iter();
    summary.residual_norm = approx.residual_norm();
    summary.max_epsilon = Some(report.max_epsilon);
    println!(
        "m = {}: iteration {}, residual {}, max error {}",
        cfg.m,
        approx.selected_iter().unwrap_or(0),
        format_sci(approx.residual_norm().unwrap_or(f64::NAN)),
        format_sci(report.max_epsilon)
    );
    dir.finish("approximate", Some(cfg.clone()), None, summary)
}

pub fn reference(table: ReferenceTable, out: &Path, eval_n: Option<usize>) -> Result<()> {
    let mut dir = OutDir::create(out)?;
    let cfg = preset(table.preset(), table.alpha(), 10)?;
    let experiment = Experiment::<f64>::from_config(&cfg)?;
    let approx = load_reference_params::<f64>(table);
    dir.lap("setup");
    let grid = eval_grid(&cfg, &experiment.grid, eval_n)?;
    let report = emit_model(&mut dir, Path::new(""), &approx, &experiment.target, &grid)?;
    dir.lap("evaluate_and_write");
    println!(
        "{table}: residual {}, max error {}",
        format_sci(report.residual_norm),
        format_sci(report.max_epsilon)
    );
    let summary = SolverSummary {
        residual_norm: Some(report.residual_norm),
        max_epsilon: Some(report.max_epsilon),
        ..SolverSummary::default()
    };
    dir.finish("reference", Some(cfg), Some(table.id().to_string()), summary)
}

struct Row {
    value: usize,
    selected_iter: Option<usize>,
    residual_norm: Option<f64>,
    max_epsilon: Option<f64>,
    status: String,
}

impl Row {
    fn failed(value: usize, err: impl std::fmt::Display) -> Self {
        Row { value, selected_iter: None, residual_norm: None, max_epsilon: None, status: err.to_string() }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn summary_csv(param: &str, rows: &[Row]) -> String {
    let mut out = format!("{param},selected_iter,residual_norm,max_epsilon,status\n");
    let num = |v: Option<f64>| v.map(format_sci).unwrap_or_default();
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.value,
            r.selected_iter.map(|i| i.to_string()).unwrap_or_default(),
            num(r.residual_norm),
            num(r.max_epsilon),
            csv_field(&r.status)
        ));
    }
    out
}

/// Selects and evaluates one sub-run, writing under `prefix`.
fn sub_run(
    dir: &mut OutDir,
    prefix: &Path,
    solved: &SolvedExperiment<f64>,
    m: usize,
    value: usize,
    eval_n: Option<usize>,
) -> Row {
    let result = (|| -> Result<Row> {
        let approx = solved.select(m)?;
        let cfg = &solved.experiment.config;
        let grid = eval_grid(cfg, &solved.experiment.grid, eval_n)?;
        let report = emit_model(dir, prefix, &approx, &solved.experiment.target, &grid)?;
        Ok(Row {
            value,
            selected_iter: approx.selected_iter(),
            residual_norm: approx.residual_norm(),
            max_epsilon: Some(report.max_epsilon),
            status: "ok".to_string(),
        })
    })();
    result.unwrap_or_else(|e| Row::failed(value, format!("{e:#}")))
}

pub fn sweep(cfg: &ExperimentConfig, sweep: Sweep, out: &Path, eval_n: Option<usize>) -> Result<()> {
    let mut dir = OutDir::create(out)?;
    let (param, rows, summary) = match sweep {
        Sweep::M(ms) => {
            // The trace does not depend on m, so one solve serves every row.
            let solved = solve_timed(cfg, &mut dir, false)?;
            dir.write("trace.csv", trace_csv(&solved.trace).as_bytes())?;
            let rows: Vec<Row> = ms
                .iter()
                .map(|&m| sub_run(&mut dir, &PathBuf::from(format!("m_{m}")), &solved, m, m, eval_n))
                .collect();
            dir.lap("select_and_write");
            ("m", rows, trace_summary(&solved))
        }
        Sweep::L(ls) => {
            let solved: Vec<(usize, Result<SolvedExperiment<f64>>)> = thread::scope(|s| {
                let handles: Vec<_> = ls
                    .iter()
                    .map(|&l| {
                        s.spawn(move || {
                            let mut sub = cfg.clone();
                            sub.l = l;
                            let solved = Experiment::<f64>::from_config(&sub).and_then(Experiment::solve);
                            (l, solved.map_err(anyhow::Error::from))
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
            });
            dir.lap("solve");
            let mut rows = Vec::new();
            for (l, result) in &solved {
                let prefix = PathBuf::from(format!("l_{l}"));
                match result {
                    Ok(solved) => {
                        let wrote = dir.write(prefix.join("trace.csv"), trace_csv(&solved.trace).as_bytes());
                        rows.push(match wrote {
                            Ok(()) => sub_run(&mut dir, &prefix, solved, cfg.m, *l, eval_n),
                            Err(e) => Row::failed(*l, format!("{e:#}")),
                        });
                    }
                    Err(e) => rows.push(Row::failed(*l, format!("{e:#}"))),
                }
            }
            dir.lap("select_and_write");
            ("l", rows, SolverSummary::default())
        }
    };
    for r in &rows {
        match (r.selected_iter, r.residual_norm, r.max_epsilon) {
            (Some(it), Some(res), Some(eps)) => println!(
                "{param} = {}: iteration {it}, residual {}, max error {}",
                r.value,
                format_sci(res),
                format_sci(eps)
            ),
            _ => println!("{param} = {}: failed: {}", r.value, r.status),
        }
    }
    dir.write("summary.csv", summary_csv(param, &rows).as_bytes())?;
    dir.finish("sweep", Some(cfg.clone()), None, summary)
}
