//! End-to-end run: grid, dictionary, design, trace, selection.

use crate::design::{assemble, DesignSystem};
use crate::dictionary::{build_candidates, BasisFamily, CandidateSet, TargetFunction, Term};
use crate::error::Result;
use crate::eval::{error_curve, ErrorReport};
use crate::grid::{build_grid, QuadratureGrid};
use crate::nnls::{solve_nnls, NnlsOptions, NnlsTrace};
use crate::presets::{ExperimentConfig, TargetKind};
use crate::scalar::Scalar;
use crate::selector::{select, SparseApproximant};

/// Concrete objects built from a configuration.
#[derive(Debug, Clone)]
pub struct Experiment<T> {
    pub config: ExperimentConfig,
    pub grid: QuadratureGrid<T>,
    pub candidates: CandidateSet<T>,
    pub family: BasisFamily<T>,
    pub target: TargetFunction<T>,
}

impl<T: Scalar> Experiment<T> {
    pub fn from_config(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let grid = build_grid(
            T::lit(config.a),
            T::lit(config.b),
            config.n,
            config.transform,
            config.weight,
        )?;
        let candidates =
            build_candidates(T::lit(config.c), T::lit(config.d), config.l, config.spacing)?;
        let target = match config.target {
            TargetKind::PowerNeg => TargetFunction::power_neg(T::lit(config.alpha))?,
            TargetKind::StretchedExp => TargetFunction::stretched_exp(T::lit(config.alpha))?,
            TargetKind::Planted => {
                let offset = match config.family.pin_abscissa::<T>() {
                    Some(_) => T::one(),
                    None => T::zero(),
                };
                let terms = config
                    .planted
                    .iter()
                    .map(|p| Term { u: T::lit(p.u), v: candidates.values()[p.index] })
                    .collect();
                TargetFunction::planted(config.family, offset, terms)?
            }
        };
        let family = BasisFamily::for_target(config.family, &target)?;
        Ok(Experiment { config: config.clone(), grid, candidates, family, target })
    }

    pub fn assemble(&self) -> Result<DesignSystem<T>> {
        assemble(&self.grid, &self.family, &self.candidates, &self.target)
    }

    pub fn solver_options(&self) -> NnlsOptions<T> {
        NnlsOptions::with_max_outer(self.config.max_outer)
    }

    /// Assembles and solves; the design matrix is dropped afterwards.
    pub fn solve(self) -> Result<SolvedExperiment<T>> {
        let system = self.assemble()?;
        let trace = solve_nnls(&system, &self.solver_options())?;
        Ok(SolvedExperiment { experiment: self, trace })
    }
}

#[derive(Debug, Clone)]
pub struct SolvedExperiment<T> {
    pub experiment: Experiment<T>,
    pub trace: NnlsTrace<T>,
}

impl<T: Scalar> SolvedExperiment<T> {
    pub fn select(&self, m: usize) -> Result<SparseApproximant<T>> {
        let e = &self.experiment;
        select(&self.trace, &e.candidates, &e.family, m)
    }

    /// Approximant for the configured term count.
    pub fn approximant(&self) -> Result<SparseApproximant<T>> {
        self.select(self.experiment.config.m)
    }

    /// Error on the fitting grid.
    pub fn error_report(&self, approx: &SparseApproximant<T>) -> Result<ErrorReport<T>> {
        error_curve(approx, &self.experiment.grid, &self.experiment.target)
    }
}
