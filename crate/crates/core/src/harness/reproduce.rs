//! Parameter grids of the reference experiments.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::best_approx::GridSpec;
use crate::expr::FunctionExpr;
use crate::solver::SolverOptions;

use super::output::{emit_csv, emit_svg, Axes, AxisScale, CsvRow, Series};
use super::{run_experiment, ExperimentReport, HarnessError, Mode, PipelineConfig, WeightScheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Tab3,
    Tab4,
    Tab5,
}

impl Target {
    pub const ALL: [Target; 7] = [
        Target::Fig3,
        Target::Fig4,
        Target::Fig5,
        Target::Fig6,
        Target::Tab3,
        Target::Tab4,
        Target::Tab5,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Target::Fig3 => "fig3",
            Target::Fig4 => "fig4",
            Target::Fig5 => "fig5",
            Target::Fig6 => "fig6",
            Target::Tab3 => "tab3",
            Target::Tab4 => "tab4",
            Target::Tab5 => "tab5",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Target {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Target::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown target '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproduceOptions {
    pub trials: usize,
    pub master_seed: u64,
    pub grid: GridSpec,
    pub solver: SolverOptions,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        Self {
            trials: 500,
            master_seed: 0,
            grid: GridSpec::default(),
            solver: SolverOptions::default(),
        }
    }
}

pub struct ReproduceOutput {
    pub target: Target,
    pub reports: Vec<ExperimentReport>,
    pub series: Vec<Series>,
    pub axes: Axes,
    /// Assumptions made where the reference setup is underspecified.
    pub notes: Vec<String>,
}

impl ReproduceOutput {
    pub fn rows(&self) -> Vec<CsvRow> {
        self.reports.iter().map(CsvRow::from).collect()
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), HarnessError> {
        emit_csv(&self.rows(), path)
    }

    pub fn write_svg(&self, path: &Path) -> Result<(), HarnessError> {
        emit_svg(&self.series, &self.axes, path)
    }
}

const FIG3_THETAS: [f64; 7] = [0.0, 1.0, 1e3, 1e5, 1e7, 1e9, 1e11];
const ALL_FUNCTIONS: [&str; 4] = ["runge", "sqrt105", "logsin", "cos36"];
const THREE_FUNCTIONS: [&str; 3] = ["runge", "sqrt105", "logsin"];
const TABLE_WEIGHTS: [WeightScheme; 3] = [
    WeightScheme::None,
    WeightScheme::SqrtIndex,
    WeightScheme::LinearIndex,
];
const TABLE_THETAS: [f64; 2] = [1.0, 1e5];

fn base(
    f: &str,
    n: usize,
    m: usize,
    theta: f64,
    mode: Mode,
    opts: &ReproduceOptions,
) -> PipelineConfig {
    PipelineConfig {
        mode,
        master_seed: opts.master_seed,
        grid: opts.grid,
        solver: opts.solver,
        ..PipelineConfig::new(FunctionExpr::builtin(f).expect("builtin name"), n, m, theta)
    }
}

fn table(
    functions: &[&str],
    n: usize,
    m: usize,
    mode: Mode,
    opts: &ReproduceOptions,
) -> Vec<PipelineConfig> {
    let mut out = Vec::new();
    for f in functions {
        for w in &TABLE_WEIGHTS {
            for theta in TABLE_THETAS {
                out.push(PipelineConfig {
                    weights: w.clone(),
                    ..base(f, n, m, theta, mode, opts)
                });
            }
        }
    }
    out
}

/// The configurations of `target`, in output row order.
pub fn configs(target: Target, opts: &ReproduceOptions) -> Vec<PipelineConfig> {
    let mut out = Vec::new();
    match target {
        Target::Fig3 => {
            for f in ALL_FUNCTIONS {
                for theta in FIG3_THETAS {
                    out.push(base(f, 999, 400, theta, Mode::Uniform, opts));
                }
            }
        }
        Target::Fig4 => {
            for f in THREE_FUNCTIONS {
                for theta in [0.0, 1e5] {
                    for m in (150..=450).step_by(50) {
                        out.push(base(f, 599, m, theta, Mode::Uniform, opts));
                    }
                }
            }
        }
        Target::Fig5 => {
            for (n, m) in [(599, 300), (799, 400)] {
                for f in THREE_FUNCTIONS {
                    for theta in FIG3_THETAS {
                        out.push(base(f, n, m, theta, Mode::L2, opts));
                    }
                }
            }
        }
        Target::Fig6 => {
            for n in [399, 599] {
                for f in THREE_FUNCTIONS {
                    for theta in [0.0, 1e4] {
                        for m in (150..=350).step_by(50) {
                            out.push(base(f, n, m, theta, Mode::L2, opts));
                        }
                    }
                }
            }
        }
        Target::Tab3 => out = table(&["sqrt105", "logsin"], 599, 300, Mode::Uniform, opts),
        Target::Tab4 => out = table(&["runge", "cos36"], 799, 400, Mode::Uniform, opts),
        Target::Tab5 => {
            out = table(
                &["runge", "cos36", "sqrt105", "logsin"],
                799,
                400,
                Mode::L2,
                opts,
            )
        }
    }
    out
}

fn notes(target: Target) -> Vec<String> {
    match target {
        Target::Fig3 => vec!["assumption: functions runge, sqrt105, logsin, cos36".into()],
        Target::Fig4 | Target::Fig5 => vec!["assumption: functions runge, sqrt105, logsin".into()],
        Target::Fig6 => vec![
            "assumption: functions runge, sqrt105, logsin".into(),
            "assumption: m = 150..350 in steps of 50".into(),
        ],
        _ => Vec::new(),
    }
}

fn theta_label(theta: f64) -> String {
    if theta == 0.0 {
        "0".into()
    } else {
        format!("1e{}", theta.log10().round() as i64)
    }
}

/// `(series label, x)` of a report within the chart of `target`.
fn placement(target: Target, r: &ExperimentReport) -> (String, f64) {
    let c = &r.config;
    let f = c.function.name();
    match target {
        Target::Fig3 => (f.to_string(), c.theta),
        Target::Fig4 => (format!("{f}, theta={}", theta_label(c.theta)), c.m as f64),
        Target::Fig5 => (format!("{f}, N={}, m={}", c.degree, c.m), c.theta),
        Target::Fig6 => (
            format!("{f}, N={}, theta={}", c.degree, theta_label(c.theta)),
            c.m as f64,
        ),
        Target::Tab3 | Target::Tab4 | Target::Tab5 => {
            (format!("{f}, {}", c.weights.label()), c.theta)
        }
    }
}

fn axes(target: Target) -> Axes {
    let (x_label, x_scale) = match target {
        Target::Fig4 | Target::Fig6 => ("m", AxisScale::Linear),
        _ => ("theta", AxisScale::Categorical),
    };
    let y_label = match target {
        Target::Fig5 | Target::Fig6 | Target::Tab5 => "average relative L2 error",
        _ => "average relative sup-norm error",
    };
    Axes {
        title: target.as_str().to_string(),
        x_label: x_label.into(),
        y_label: y_label.into(),
        x_scale,
    }
}

/// Runs every configuration of `target`, calling `on_report` after each.
pub fn reproduce_with<F>(
    target: Target,
    opts: &ReproduceOptions,
    mut on_report: F,
) -> Result<ReproduceOutput, HarnessError>
where
    F: FnMut(usize, usize, &ExperimentReport),
{
    let cfgs = configs(target, opts);
    let total = cfgs.len();
    let mut reports = Vec::with_capacity(total);
    for (i, cfg) in cfgs.iter().enumerate() {
        let report = run_experiment(cfg, opts.trials)?;
        on_report(i, total, &report);
        reports.push(report);
    }
    let mut series: Vec<Series> = Vec::new();
    for r in &reports {
        let (label, x) = placement(target, r);
        match series.iter_mut().find(|s| s.label == label) {
            Some(s) => s.points.push((x, r.avg_rel_err)),
            None => series.push(Series {
                label,
                points: vec![(x, r.avg_rel_err)],
            }),
        }
    }
    Ok(ReproduceOutput {
        target,
        reports,
        series,
        axes: axes(target),
        notes: notes(target),
    })
}

pub fn reproduce(target: Target, opts: &ReproduceOptions) -> Result<ReproduceOutput, HarnessError> {
    reproduce_with(target, opts, |_, _, _| {})
}
