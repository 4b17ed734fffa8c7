//! `spap`: sparse Chebyshev approximation experiments from the command line.

mod bounds_cmd;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use spap_core::best_approx::{EnMethod, GridSpec};
use spap_core::harness::{
    self, emit_csv, CsvRow, HarnessError, Mode, Pipeline, ReproduceOptions, Target, WeightScheme,
};
use spap_core::{FunctionExpr, PipelineConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(msg) => CliError::Usage(msg),
            HarnessError::Io { path, source } => CliError::Io { path, source },
            other => CliError::Runtime(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "spap",
    version,
    about = "Sparse Chebyshev approximation from random samples"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the pipeline once and write the recovered polynomial as JSON.
    Approx(ApproxArgs),
    /// Run a Monte Carlo experiment described by a JSON config.
    Experiment(ExperimentArgs),
    /// Run the parameter grid of a reference figure or table.
    Reproduce(ReproduceArgs),
    /// Evaluate a closed-form error bound.
    Bounds(BoundsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Uniform,
    L2,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightsArg {
    None,
    #[value(alias = "sqrt_index")]
    SqrtIndex,
    #[value(alias = "linear_index")]
    LinearIndex,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnMethodArg {
    Remez,
    #[value(alias = "cheb_tail")]
    ChebTail,
}

#[derive(Args)]
struct ApproxArgs {
    /// Builtin name (runge, sqrt105, logsin, cos36) or an expression in x.
    #[arg(long = "fn")]
    function: String,
    /// Polynomial degree N.
    #[arg(long = "N", visible_alias = "degree")]
    degree: usize,
    /// Number of random samples.
    #[arg(long)]
    m: usize,
    /// Constraint multiplier (0 requests interpolation).
    #[arg(long)]
    theta: f64,
    #[arg(long, value_enum, default_value = "uniform")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "none")]
    weights: WeightsArg,
    #[arg(long = "en-method", value_enum, default_value = "cheb-tail")]
    en_method: EnMethodArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Size of the uniform evaluation grid.
    #[arg(long, default_value_t = 10001)]
    grid: usize,
    /// Trial index within the seed stream.
    #[arg(long, default_value_t = 0)]
    trial: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(value_parser = parse_target)]
    target: Target,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Suppress per-configuration progress on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(value_enum)]
    name: bounds_cmd::BoundName,
    /// Comma-separated `key=value` pairs.
    #[arg(long, default_value = "")]
    params: String,
}

fn parse_target(s: &str) -> Result<Target, String> {
    s.parse().map_err(|e: HarnessError| e.to_string())
}

#[derive(Serialize)]
struct SolverStats {
    iterations: usize,
    converged: bool,
    residual_l2: f64,
    objective: f64,
    dual_objective: f64,
}

#[derive(Serialize)]
struct ApproxOutput<'a> {
    config: &'a PipelineConfig,
    trial_index: u64,
    trial_seed: u64,
    epsilon: f64,
    e_hat: Option<f64>,
    rel_err: f64,
    rel_err_inf: f64,
    rel_err_l2: f64,
    success: bool,
    solver: SolverStats,
    coefficients: &'a [f64],
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = io::stdout().lock();
            writeln!(out, "{text}").map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

fn approx(args: ApproxArgs) -> Result<(), CliError> {
    let function =
        FunctionExpr::resolve(&args.function).map_err(|e| CliError::Usage(format!("--fn: {e}")))?;
    let grid = GridSpec::uniform(args.grid).map_err(|e| CliError::Usage(format!("--grid: {e}")))?;
    let cfg = PipelineConfig {
        mode: match args.mode {
            ModeArg::Uniform => Mode::Uniform,
            ModeArg::L2 => Mode::L2,
        },
        weights: match args.weights {
            WeightsArg::None => WeightScheme::None,
            WeightsArg::SqrtIndex => WeightScheme::SqrtIndex,
            WeightsArg::LinearIndex => WeightScheme::LinearIndex,
        },
        en_method: match args.en_method {
            EnMethodArg::Remez => EnMethod::Remez,
            EnMethodArg::ChebTail => EnMethod::ChebTail,
        },
        master_seed: args.seed,
        grid,
        ..PipelineConfig::new(function, args.degree, args.m, args.theta)
    };
    let pipeline = Pipeline::new(cfg)?;
    let detail = pipeline.run_trial_detailed(args.trial);
    if let Some(err) = &detail.result.error {
        return Err(CliError::Runtime(format!("trial failed: {err}")));
    }
    let (rel_err_inf, rel_err_l2) = pipeline.relative_errors(&detail.coeffs);
    let out = ApproxOutput {
        config: pipeline.config(),
        trial_index: args.trial,
        trial_seed: detail.result.trial_seed,
        epsilon: detail.result.epsilon,
        e_hat: detail.anchor,
        rel_err: detail.result.rel_err,
        rel_err_inf,
        rel_err_l2,
        success: detail.result.success,
        solver: SolverStats {
            iterations: detail.result.solver_iterations,
            converged: detail.result.converged,
            residual_l2: detail.residual_l2,
            objective: detail.objective,
            dual_objective: detail.dual_objective,
        },
        coefficients: &detail.coeffs,
    };
    let text = serde_json::to_string_pretty(&out).map_err(|e| CliError::Runtime(e.to_string()))?;
    write_output(args.out.as_deref(), &text)
}

fn experiment(args: ExperimentArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.config).map_err(|e| CliError::io(&args.config, e))?;
    let cfg: PipelineConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.config.display())))?;
    let report = harness::run_experiment(&cfg, args.trials)?;
    emit_csv(&[CsvRow::from(&report)], &args.out)?;
    eprintln!(
        "{}: avg_rel_err {:.4e}, success_rate {:.3}, {} ms",
        cfg.function.name(),
        report.avg_rel_err,
        report.success_rate,
        report.wall_ms
    );
    Ok(())
}

fn reproduce(args: ReproduceArgs) -> Result<(), CliError> {
    let opts = ReproduceOptions {
        trials: args.trials,
        master_seed: args.seed,
        ..ReproduceOptions::default()
    };
    let quiet = args.quiet;
    let output = harness::reproduce::reproduce_with(args.target, &opts, |i, total, r| {
        if !quiet {
            let c = &r.config;
            eprintln!(
                "[{}/{total}] {} N={} m={} theta={:e} {} {}: avg_rel_err {:.4e}, success_rate {:.3}",
                i + 1,
                c.function.name(),
                c.degree,
                c.m,
                c.theta,
                c.weights.label(),
                c.mode.as_str(),
                r.avg_rel_err,
                r.success_rate
            );
        }
    })?;
    for note in &output.notes {
        eprintln!("note: {note}");
    }
    output.write_csv(&args.out)?;
    if let Some(svg) = &args.svg {
        output.write_svg(svg)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Approx(a) => approx(a),
        Command::Experiment(a) => experiment(a),
        Command::Reproduce(a) => reproduce(a),
        Command::Bounds(a) => {
            let value = bounds_cmd::evaluate(a.name, &a.params)?;
            println!("{value}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
