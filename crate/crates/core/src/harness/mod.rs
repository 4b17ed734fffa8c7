//! End-to-end approximation pipeline and Monte Carlo experiments.
//!
//! One trial draws `m` arcsine samples, anchors the constraint radius at
//! `eps = theta * sqrt(m) * E` (with `E` the best-approximation error
//! estimate of the configured mode), solves the (weighted) constrained l1
//! problem and measures the relative error of the recovered polynomial.

mod output;
pub mod reproduce;

use std::time::Instant;

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::basis::{self, gauss_chebyshev, pairwise_sum, BasisSpec};
use crate::best_approx::{self, ApproxError, EnMethod, GridSpec};
use crate::expr::FunctionExpr;
use crate::function::EvalError;
use crate::rng;
use crate::solver::{self, ConstrainedL1Problem, SolverError, SolverOptions};

pub use output::{emit_csv, emit_svg, write_csv, Axes, AxisScale, CsvRow, Series, CSV_HEADER};
pub use reproduce::{reproduce, ReproduceOptions, ReproduceOutput, Target};

/// A trial succeeds when its relative error is below this threshold.
pub const SUCCESS_THRESHOLD: f64 = 5e-4;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Which error scalar anchors the constraint radius and which norm measures the result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `E_N` anchor, relative sup-norm error.
    #[default]
    Uniform,
    /// `||T_N||_inf` anchor, relative L2 error.
    L2,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Uniform => "uniform",
            Mode::L2 => "l2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum WeightScheme {
    #[default]
    None,
    /// `w_i = sqrt(i)`, `i = 1..N+1`.
    SqrtIndex,
    /// `w_i = (i + 1) / 2`, `i = 1..N+1`.
    LinearIndex,
    Custom(Vec<f64>),
}

impl WeightScheme {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "none" => Some(Self::None),
            "sqrt_index" | "sqrt-index" => Some(Self::SqrtIndex),
            "linear_index" | "linear-index" => Some(Self::LinearIndex),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::None => "none",
            Self::SqrtIndex => "sqrt_index",
            Self::LinearIndex => "linear_index",
            Self::Custom(_) => "custom",
        }
    }

    /// Weight vector for degree `n`, or `None` when unweighted.
    pub fn vector(&self, n: usize) -> Option<Vec<f64>> {
        match self {
            Self::None => None,
            Self::SqrtIndex => Some((1..=n + 1).map(|i| (i as f64).sqrt()).collect()),
            Self::LinearIndex => Some((1..=n + 1).map(|i| (i as f64 + 1.0) / 2.0).collect()),
            Self::Custom(w) => Some(w.clone()),
        }
    }
}

impl Serialize for WeightScheme {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Custom(w) => w.serialize(s),
            other => s.serialize_str(other.label()),
        }
    }
}

impl<'de> Deserialize<'de> for WeightScheme {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Name(String),
            Vector(Vec<f64>),
        }
        match Repr::deserialize(d)? {
            Repr::Name(name) => WeightScheme::parse(&name)
                .ok_or_else(|| serde::de::Error::custom(format!("unknown weight scheme '{name}'"))),
            Repr::Vector(w) => Ok(WeightScheme::Custom(w)),
        }
    }
}

fn grid_from_json<'de, D: Deserializer<'de>>(d: D) -> Result<GridSpec, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Size(usize),
        Spec(GridSpec),
    }
    Ok(match Repr::deserialize(d)? {
        Repr::Size(size) => GridSpec {
            size,
            ..GridSpec::default()
        },
        Repr::Spec(spec) => spec,
    })
}

/// Everything that determines an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(rename = "fn")]
    pub function: FunctionExpr,
    #[serde(rename = "N", alias = "n")]
    pub degree: usize,
    pub m: usize,
    pub theta: f64,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub weights: WeightScheme,
    #[serde(default, alias = "seed", alias = "master-seed")]
    pub master_seed: u64,
    #[serde(default, deserialize_with = "grid_from_json")]
    pub grid: GridSpec,
    #[serde(default, alias = "en-method")]
    pub en_method: EnMethod,
    #[serde(default, skip_serializing)]
    pub solver: SolverOptions,
}

impl PipelineConfig {
    pub fn new(function: FunctionExpr, degree: usize, m: usize, theta: f64) -> Self {
        Self {
            function,
            degree,
            m,
            theta,
            mode: Mode::Uniform,
            weights: WeightScheme::None,
            master_seed: 0,
            grid: GridSpec::default(),
            en_method: EnMethod::ChebTail,
            solver: SolverOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.m == 0 {
            return Err(HarnessError::Config("m must be at least 1".into()));
        }
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            return Err(HarnessError::Config(format!(
                "theta must be finite and nonnegative, got {}",
                self.theta
            )));
        }
        self.grid.validate()?;
        if let WeightScheme::Custom(w) = &self.weights {
            if w.len() != self.degree + 1 {
                return Err(HarnessError::Config(format!(
                    "custom weights need N + 1 = {} entries, got {}",
                    self.degree + 1,
                    w.len()
                )));
            }
            if w.iter().any(|v| !(*v >= 1.0 && v.is_finite())) {
                return Err(HarnessError::Config(
                    "custom weights must be finite and at least 1".into(),
                ));
            }
        }
        self.solver
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))
    }
}

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialResult {
    pub trial_index: u64,
    pub trial_seed: u64,
    pub rel_err: f64,
    pub success: bool,
    pub solver_iterations: usize,
    pub converged: bool,
    pub epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// A trial with the recovered coefficients and solver diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialDetail {
    pub result: TrialResult,
    pub coeffs: Vec<f64>,
    pub anchor: Option<f64>,
    pub residual_l2: f64,
    pub objective: f64,
    pub dual_objective: f64,
}

/// Aggregate statistics over the trials of one configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: PipelineConfig,
    pub trials: usize,
    pub avg_rel_err: f64,
    pub median_rel_err: f64,
    pub std_rel_err: f64,
    pub success_rate: f64,
    pub converged_rate: f64,
    pub anchor: Option<f64>,
    pub wall_ms: u64,
    #[serde(skip)]
    pub results: Vec<TrialResult>,
}

/// A configuration with its trial-independent quantities precomputed.
pub struct Pipeline {
    cfg: PipelineConfig,
    weights: Option<Vec<f64>>,
    grid_points: Vec<f64>,
    grid_values: Vec<f64>,
    f_inf: f64,
    nodes: Vec<f64>,
    node_values: Vec<f64>,
    f_l2: f64,
    anchor: Option<f64>,
}

fn eval_all(f: &FunctionExpr, points: &[f64]) -> Result<Vec<f64>, EvalError> {
    points.iter().map(|&x| f.eval(x)).collect()
}

impl Pipeline {
    pub fn new(cfg: PipelineConfig) -> Result<Self, HarnessError> {
        cfg.validate()?;
        let n = cfg.degree;
        let grid_points = cfg.grid.points();
        let grid_values = eval_all(&cfg.function, &grid_points)?;
        let f_inf = grid_values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        let nodes = gauss_chebyshev(4 * (n + 1)).nodes;
        let node_values = eval_all(&cfg.function, &nodes)?;
        let squares: Vec<f64> = node_values.iter().map(|v| v * v).collect();
        let f_l2 = (pairwise_sum(&squares) / nodes.len() as f64).sqrt();

        let anchor = if cfg.theta == 0.0 {
            None
        } else {
            Some(match (cfg.mode, cfg.en_method) {
                (Mode::Uniform, EnMethod::Remez) => {
                    best_approx::estimate_en(&cfg.function, n, EnMethod::Remez, &cfg.grid)?
                }
                _ => best_approx::projection_from_values(
                    n,
                    &nodes,
                    &node_values,
                    &grid_points,
                    &grid_values,
                )
                .t_inf
                .expect("projection sets t_inf"),
            })
        };
        let weights = cfg.weights.vector(n);
        Ok(Self {
            cfg,
            weights,
            grid_points,
            grid_values,
            f_inf,
            nodes,
            node_values,
            f_l2,
            anchor,
        })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.cfg
    }

    /// The cached error scalar `E` (absent when `theta = 0`).
    pub fn anchor(&self) -> Option<f64> {
        self.anchor
    }

    /// Constraint radius `theta * sqrt(m) * E`, exactly zero when `theta = 0`.
    pub fn epsilon(&self) -> f64 {
        match self.anchor {
            None => 0.0,
            Some(e) => self.cfg.theta * (self.cfg.m as f64).sqrt() * e,
        }
    }

    /// Relative error of `coeffs` in the norm of the configured mode.
    pub fn relative_error(&self, coeffs: &[f64]) -> f64 {
        match self.cfg.mode {
            Mode::Uniform => {
                best_approx::sup_residual(&self.grid_points, &self.grid_values, coeffs) / self.f_inf
            }
            Mode::L2 => {
                best_approx::l2_residual(&self.nodes, &self.node_values, coeffs) / self.f_l2
            }
        }
    }

    /// Both relative errors `(sup, l2)` of `coeffs`.
    pub fn relative_errors(&self, coeffs: &[f64]) -> (f64, f64) {
        (
            best_approx::sup_residual(&self.grid_points, &self.grid_values, coeffs) / self.f_inf,
            best_approx::l2_residual(&self.nodes, &self.node_values, coeffs) / self.f_l2,
        )
    }

    /// `(||f||_inf, ||f||_2)` on the grid and quadrature nodes.
    pub fn function_norms(&self) -> (f64, f64) {
        (self.f_inf, self.f_l2)
    }

    pub fn trial_seed(&self, trial_index: u64) -> u64 {
        rng::trial_seed(self.cfg.master_seed, trial_index)
    }

    pub fn run_trial(&self, trial_index: u64) -> TrialResult {
        self.run_trial_detailed(trial_index).result
    }

    pub fn run_trial_detailed(&self, trial_index: u64) -> TrialDetail {
        let seed = self.trial_seed(trial_index);
        let epsilon = self.epsilon();
        let failed = |error: String| TrialDetail {
            result: TrialResult {
                trial_index,
                trial_seed: seed,
                rel_err: f64::INFINITY,
                success: false,
                solver_iterations: 0,
                converged: false,
                epsilon,
                error: Some(error),
            },
            coeffs: Vec::new(),
            anchor: self.anchor,
            residual_l2: f64::NAN,
            objective: f64::NAN,
            dual_objective: f64::NAN,
        };
        match self.solve_trial(seed, epsilon) {
            Ok(sol) => {
                let rel_err = self.relative_error(&sol.z);
                TrialDetail {
                    result: TrialResult {
                        trial_index,
                        trial_seed: seed,
                        rel_err,
                        success: rel_err < SUCCESS_THRESHOLD,
                        solver_iterations: sol.iterations,
                        converged: sol.converged,
                        epsilon,
                        error: None,
                    },
                    anchor: self.anchor,
                    residual_l2: sol.residual_l2,
                    objective: sol.objective,
                    dual_objective: sol.dual_objective,
                    coeffs: sol.z,
                }
            }
            Err(e) => failed(e),
        }
    }

    fn solve_trial(&self, seed: u64, epsilon: f64) -> Result<solver::SolverResult, String> {
        let points = basis::sample_arcsine(seed, self.cfg.m);
        let values: Vec<f64> = points
            .iter()
            .map(|&x| self.cfg.function.eval(x))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let a = basis::build_matrix(&points, BasisSpec::new(self.cfg.degree))
            .map_err(|e| e.to_string())?;
        let problem =
            ConstrainedL1Problem::new(a, DVector::from_vec(values), epsilon, self.weights.clone())
                .map_err(|e| e.to_string())?;
        solver::solve(&problem, &self.cfg.solver).map_err(|e: SolverError| e.to_string())
    }

    /// Runs trials `0..trials` in parallel and aggregates them in index order.
    pub fn run_experiment(&self, trials: usize) -> ExperimentReport {
        let start = Instant::now();
        let results: Vec<TrialResult> = (0..trials as u64)
            .into_par_iter()
            .map(|i| self.run_trial(i))
            .collect();
        let mut report = aggregate(self.cfg.clone(), results, self.anchor);
        report.wall_ms = start.elapsed().as_millis() as u64;
        report
    }
}

/// Order-independent statistics over `results` (which are kept in index order).
pub fn aggregate(
    config: PipelineConfig,
    results: Vec<TrialResult>,
    anchor: Option<f64>,
) -> ExperimentReport {
    let n = results.len();
    let errs: Vec<f64> = results.iter().map(|r| r.rel_err).collect();
    let (avg, median, std) = if n == 0 {
        (f64::NAN, f64::NAN, f64::NAN)
    } else {
        let avg = pairwise_sum(&errs) / n as f64;
        let mut sorted = errs.clone();
        sorted.sort_by(f64::total_cmp);
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
        };
        let std = if n < 2 {
            0.0
        } else if !avg.is_finite() {
            f64::INFINITY
        } else {
            let dev: Vec<f64> = errs.iter().map(|e| (e - avg) * (e - avg)).collect();
            (pairwise_sum(&dev) / (n - 1) as f64).sqrt()
        };
        (avg, median, std)
    };
    let successes = results.iter().filter(|r| r.success).count();
    let converged = results.iter().filter(|r| r.converged).count();
    let denom = n.max(1) as f64;
    ExperimentReport {
        config,
        trials: n,
        avg_rel_err: avg,
        median_rel_err: median,
        std_rel_err: std,
        success_rate: successes as f64 / denom,
        converged_rate: converged as f64 / denom,
        anchor,
        wall_ms: 0,
        results,
    }
}

/// Runs one trial of `cfg`.
pub fn run_trial(cfg: &PipelineConfig, trial_index: u64) -> Result<TrialResult, HarnessError> {
    Ok(Pipeline::new(cfg.clone())?.run_trial(trial_index))
}

/// Runs `trials` trials of `cfg`; timing includes the precomputation.
pub fn run_experiment(
    cfg: &PipelineConfig,
    trials: usize,
) -> Result<ExperimentReport, HarnessError> {
    if trials == 0 {
        return Err(HarnessError::Config("trials must be at least 1".into()));
    }
    let start = Instant::now();
    let pipeline = Pipeline::new(cfg.clone())?;
    let mut report = pipeline.run_experiment(trials);
    report.wall_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}
