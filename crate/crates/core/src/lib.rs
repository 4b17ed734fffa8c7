//! Sparse polynomial approximation of continuous functions on `[-1, 1]`.
//!
//! A function is sampled at random points drawn from the arcsine (Chebyshev)
//! measure, and a coefficient vector in the normalized Chebyshev basis is
//! recovered by solving a constrained (optionally weighted) l1 minimization
//! problem whose radius is anchored to a best-approximation error estimate.
//!
//! Modules:
//!
//! * [`basis`] - normalized Chebyshev system, arcsine sampling, sampling
//!   matrices and Gauss-Chebyshev quadrature.
//! * [`best_approx`] - best uniform (Remez) and best square approximations.
//! * [`solver`] - constrained l1 / weighted l1 solvers.
//! * [`sparsity`] - best s-term errors, weighted norms and quasi-norms.
//! * [`bounds`] - closed-form error bound calculators.
//! * [`expr`] - expression parser and the builtin test functions.
//! * [`harness`] - end-to-end pipeline, Monte Carlo experiments, CSV/SVG output.

pub mod basis;
pub mod best_approx;
pub mod bounds;
pub mod expr;
mod function;
pub mod harness;
pub mod rng;
pub mod solver;
pub mod sparsity;

pub use basis::{BasisSpec, CoefficientVector, QuadratureRule, SampleSet};
pub use best_approx::{ApproxMethod, BestApproxResult, EnMethod, GridLayout, GridSpec};
pub use expr::FunctionExpr;
pub use function::{EvalError, RealFunction};
pub use harness::{ExperimentReport, PipelineConfig, TrialResult};
pub use solver::{ConstrainedL1Problem, SolverOptions, SolverResult};
