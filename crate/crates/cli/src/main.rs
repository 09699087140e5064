mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use nnls_approx::{preset, ExperimentConfig, PresetName, ReferenceTable};

/// Sparse positive-coefficient approximation of x^-α and exp(-x^α) by
/// non-negative least squares over a fine dictionary of atoms.
#[derive(Parser, Debug)]
#[command(name = "nnls-approx", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit one approximant and write its parameters, trace and error curve.
    Approximate {
        #[command(flatten)]
        run: RunArgs,
        /// Also write the weighted design matrix and right-hand side to design.csv.
        #[arg(long)]
        dump_design: bool,
        /// Also write every recorded coefficient vector to trace_coefficients.csv.
        #[arg(long)]
        dump_trace_coefficients: bool,
    },
    /// Evaluate a published parameter table on its experiment grid.
    Reference {
        /// table1_a25, table1_a50, table1_a75, table2_a25, table2_a50 or table2_a75.
        table: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Evaluate on a fresh grid with this many nodes instead of the fitting grid.
        #[arg(long)]
        eval_n: Option<usize>,
    },
    /// Repeat a fit over several term counts or dictionary sizes.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Term counts to select from a single solver run, e.g. 5,10,20.
        #[arg(long, value_delimiter = ',', conflicts_with = "l_list", required_unless_present = "l_list")]
        m_list: Vec<usize>,
        /// Dictionary sizes, one solver run each, e.g. 500,1000,2000.
        #[arg(long, value_delimiter = ',')]
        l_list: Vec<usize>,
    },
}

/// Configuration source plus per-field overrides.
#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Named experiment: rational_power or expsum_stretched.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<PresetName>,
    /// TOML configuration file with every experiment field.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Number of terms to select.
    #[arg(long)]
    m: Option<usize>,
    /// Quadrature nodes.
    #[arg(long)]
    n: Option<usize>,
    /// Dictionary size.
    #[arg(long)]
    l: Option<usize>,
    /// Smallest candidate parameter.
    #[arg(long)]
    c: Option<f64>,
    /// Largest candidate parameter.
    #[arg(long)]
    d: Option<f64>,
    /// Left end of the approximation interval.
    #[arg(long)]
    a: Option<f64>,
    /// Right end of the approximation interval.
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    max_outer: Option<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Evaluate errors on a fresh grid with this many nodes instead of the fitting grid.
    #[arg(long)]
    eval_n: Option<usize>,
}

const DEFAULT_ALPHA: f64 = 0.5;
const DEFAULT_M: usize = 10;

impl RunArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match (&self.preset, &self.config) {
            (Some(name), None) => preset(
                *name,
                self.alpha.unwrap_or(DEFAULT_ALPHA),
                self.m.unwrap_or(DEFAULT_M),
            )?,
            (None, Some(path)) => ExperimentConfig::load(path)
                .with_context(|| format!("reading config {}", path.display()))?,
            _ => bail!("exactly one of --preset or --config is required"),
        };
        macro_rules! apply {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field {
                    cfg.$field = v;
                }
            )*};
        }
        apply!(alpha, m, n, l, c, d, a, b, max_outer);
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Approximate { run, dump_design, dump_trace_coefficients } => {
            let cfg = run.resolve()?;
            commands::approximate(
                &cfg,
                &run.out,
                commands::Extras { dump_design, dump_trace_coefficients, eval_n: run.eval_n },
            )
        }
        Command::Reference { table, out, eval_n } => {
            let table: ReferenceTable = table.parse()?;
            commands::reference(table, &out, eval_n)
        }
        Command::Sweep { run, m_list, l_list } => {
            let cfg = run.resolve()?;
            let sweep = if l_list.is_empty() {
                commands::Sweep::M(m_list)
            } else {
                commands::Sweep::L(l_list)
            };
            commands::sweep(&cfg, sweep, &run.out, run.eval_n)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let unattained = err
                .chain()
                .any(|e| matches!(e.downcast_ref(), Some(nnls_approx::Error::SupportNotAttained { .. })));
            ExitCode::from(if unattained { 3 } else { 1 })
        }
    }
}
