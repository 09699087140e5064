//! Nonlinear approximation of one-dimensional functions by sums
//! `f(x) ≈ offset + Σ u_i φ(x, v_i)` with `u_i > 0`.
//!
//! The nonlinear parameters `v_i` are restricted to a fine candidate set, the
//! weighted residual is discretized by a midpoint rule in a transformed
//! variable, and the resulting non-negative least squares problem is solved
//! with the Lawson–Hanson active-set method. Every outer iteration of the
//! solver is recorded; the model with `m` terms is the recorded iterate with
//! exactly `m` positive coefficients and the smallest residual.
//!
//! The numerical modules are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix `f64`.
//!
//! ```no_run
//! use nnls_approx::{preset, Experiment, PresetName};
//!
//! let config = preset(PresetName::ExpsumStretched, 0.5, 10)?;
//! let solved = Experiment::<f64>::from_config(&config)?.solve()?;
//! let approx = solved.approximant()?;
//! for t in approx.terms() {
//!     println!("{:e} {:e}", t.u, t.v);
//! }
//! # Ok::<(), nnls_approx::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod design;
pub mod dictionary;
pub mod error;
pub mod eval;
pub mod export;
pub mod grid;
pub mod linalg;
pub mod nnls;
pub mod pipeline;
pub mod presets;
pub mod scalar;
pub mod selector;

pub use design::{assemble, DesignSystem, RestrictedSolution};
pub use dictionary::{
    build_candidates, eval_atom, eval_target, Atom, AtomKind, BasisFamily, CandidateSet, Spacing,
    TargetFunction, Term,
};
pub use error::{Error, Result};
pub use eval::{error_curve, load_reference_by_id, load_reference_params, ErrorReport, ReferenceTable};
pub use grid::{build_grid, QuadratureGrid, TransformKind, WeightKind};
pub use linalg::ColMatrix;
pub use nnls::{nnls_trace, solve_nnls, IterationRecord, NnlsOptions, NnlsTrace, Termination};
pub use pipeline::{Experiment, SolvedExperiment};
pub use presets::{preset, ExperimentConfig, PlantedAtom, PresetName, TargetKind};
pub use scalar::Scalar;
pub use selector::{evaluate_model, select, SparseApproximant};

pub type Grid = QuadratureGrid<f64>;
pub type Family = BasisFamily<f64>;
pub type Candidates = CandidateSet<f64>;
pub type Target = TargetFunction<f64>;
pub type System = DesignSystem<f64>;
pub type Trace = NnlsTrace<f64>;
pub type Record = IterationRecord<f64>;
pub type Approximant = SparseApproximant<f64>;
pub type Report = ErrorReport<f64>;
pub type Matrix = ColMatrix<f64>;
