//! The `fracmks` command-line front end.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 failed
//! verification.

mod format;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::fractional_calculus::{FractionalOrder, TimeGrid};
use crate::invariant_subspace::{invariance_check, MksParams};
use crate::mks_solution::{composition_gap, pde_residual, C1Mode, Solution, SolutionParams};
use crate::special_functions::{mittag_leffler, MLParams};

pub use format::{coord, json_number, value};

pub const EXIT_OK: u8 = 0;
pub const EXIT_RUNTIME: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_VERIFY_FAILED: u8 = 3;

const DEFAULT_QUAD_STEPS: usize = 2000;

#[derive(Debug, Parser)]
#[command(
    name = "fracmks",
    version,
    about = "Mittag-Leffler evaluation and exact solutions of the time-fractional mKS equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate E_{α,β}(z).
    #[command(allow_negative_numbers = true)]
    Ml(MlArgs),
    /// Tabulate u(t, x) on a grid.
    #[command(allow_negative_numbers = true)]
    Solve(SolveArgs),
    /// Check the analytic PDE residual against a tolerance.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
    /// Tabulate g(t) = E_α(θ(2t)^α) - E_α(θt^α)².
    #[command(allow_negative_numbers = true)]
    Gap(GapArgs),
    /// Randomised check that the operator maps W₃ into itself.
    #[command(allow_negative_numbers = true)]
    Invariance(InvarianceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Maximum number of decimals printed.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u8).range(1..=17))]
    precision: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl Preset {
    /// `(α, λ given as m or directly)`.
    fn model(self) -> (f64, LambdaSpec) {
        match self {
            Preset::Fig1 => (1.0, LambdaSpec::M(3.0)),
            Preset::Fig2 => (1.0, LambdaSpec::M(4.0)),
            Preset::Fig3 => (0.5, LambdaSpec::M(3.0)),
            Preset::Fig4 => (0.5, LambdaSpec::M(4.0)),
            Preset::Fig5 => (1.0, LambdaSpec::Lambda(0.5)),
            Preset::Fig6 => (0.5, LambdaSpec::Lambda(0.5)),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliC1Mode {
    Paper,
    Quadrature,
}

impl From<CliC1Mode> for C1Mode {
    fn from(mode: CliC1Mode) -> Self {
        match mode {
            CliC1Mode::Paper => C1Mode::PaperClosedForm,
            CliC1Mode::Quadrature => C1Mode::Quadrature,
        }
    }
}

#[derive(Debug, Args)]
struct LambdaArgs {
    /// Operator parameter λ in (0, 1).
    #[arg(long, conflicts_with = "m")]
    lambda: Option<f64>,
    /// Shorthand for λ = 1/m.
    #[arg(long)]
    m: Option<f64>,
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[command(flatten)]
    lambda: LambdaArgs,
    /// Time-fractional order α in (0, 1].
    #[arg(long)]
    alpha: Option<f64>,
    /// Take α and λ from one of the figure captions.
    #[arg(long, value_enum, conflicts_with_all = ["lambda", "m", "alpha"])]
    preset: Option<Preset>,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, default_value_t = 2.0)]
    t_max: f64,
    /// Number of time steps; nodes are k·t_max/n_t.
    #[arg(long, default_value_t = 20)]
    n_t: usize,
    #[arg(long, default_value_t = 0.0)]
    x_min: f64,
    /// Defaults to one period 2π/γ.
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long, default_value_t = 33)]
    n_x: usize,
    /// Explicit comma-separated times, replacing --t-max/--n-t.
    #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with_all = ["t_max", "n_t"])]
    t: Option<Vec<f64>>,
    /// Explicit comma-separated positions, replacing --x-min/--x-max/--n-x.
    #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with_all = ["x_min", "x_max", "n_x"])]
    x: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct C1Args {
    #[arg(long, value_enum, default_value_t = CliC1Mode::Paper)]
    c1_mode: CliC1Mode,
    /// Steps of the quadrature grid for C₁ (quadrature mode).
    #[arg(long)]
    quad_steps: Option<usize>,
}

#[derive(Debug, Args)]
struct MlArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long)]
    z: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    c1: C1Args,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    c1: C1Args,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct GapArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    theta: f64,
    /// Comma-separated sample times.
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    t: Vec<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct InvarianceArgs {
    #[command(flatten)]
    lambda: LambdaArgs,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

#[derive(Debug, Clone, Copy)]
enum LambdaSpec {
    Lambda(f64),
    M(f64),
}

impl LambdaArgs {
    fn spec(&self) -> Option<LambdaSpec> {
        match (self.lambda, self.m) {
            (Some(l), _) => Some(LambdaSpec::Lambda(l)),
            (_, Some(m)) => Some(LambdaSpec::M(m)),
            _ => None,
        }
    }
}

fn mks_from(spec: LambdaSpec) -> CliResult<MksParams> {
    let parsed = match spec {
        LambdaSpec::Lambda(l) => MksParams::new(l),
        LambdaSpec::M(m) => MksParams::from_m(m),
    };
    parsed.or_else(|e| usage(e.to_string()))
}

fn order_from(alpha: f64) -> CliResult<FractionalOrder> {
    FractionalOrder::new(alpha).or_else(|e| usage(e.to_string()))
}

struct Model {
    params: SolutionParams,
    spec: LambdaSpec,
    preset: Option<Preset>,
}

impl ModelArgs {
    fn resolve(&self) -> CliResult<Model> {
        let (alpha, spec) = match self.preset {
            Some(p) => p.model(),
            None => {
                let Some(spec) = self.lambda.spec() else {
                    return usage("one of --lambda, --m or --preset is required");
                };
                let Some(alpha) = self.alpha else {
                    return usage("--alpha is required unless --preset is given");
                };
                (alpha, spec)
            }
        };
        Ok(Model {
            params: SolutionParams::new(mks_from(spec)?, order_from(alpha)?),
            spec,
            preset: self.preset,
        })
    }
}

fn check_finite(name: &str, vals: &[f64]) -> CliResult<()> {
    if vals.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        usage(format!("--{name} values must be finite"))
    }
}

struct Grid {
    t: Vec<f64>,
    x: Vec<f64>,
    /// Step count of the generated time grid, if any.
    n_t: Option<usize>,
}

impl GridArgs {
    fn resolve(&self, mks: &MksParams, include_t0: bool) -> CliResult<Grid> {
        let (t, n_t) = match &self.t {
            Some(ts) => {
                check_finite("t", ts)?;
                let lowest_ok = |t: &f64| if include_t0 { *t >= 0.0 } else { *t > 0.0 };
                if !ts.iter().all(lowest_ok) {
                    let bound = if include_t0 { ">= 0" } else { "> 0" };
                    return usage(format!("--t values must be {bound}"));
                }
                (ts.clone(), None)
            }
            None => {
                if !(self.t_max.is_finite() && self.t_max > 0.0) {
                    return usage("--t-max must be > 0");
                }
                if self.n_t < 1 {
                    return usage("--n-t must be >= 1");
                }
                let first = if include_t0 { 0 } else { 1 };
                let ts = (first..=self.n_t)
                    .map(|k| self.t_max * k as f64 / self.n_t as f64)
                    .collect();
                (ts, Some(self.n_t))
            }
        };
        let x = match &self.x {
            Some(xs) => {
                check_finite("x", xs)?;
                xs.clone()
            }
            None => {
                let x_max = self.x_max.unwrap_or_else(|| mks.period());
                if !(self.x_min.is_finite() && x_max.is_finite() && x_max > self.x_min) {
                    return usage("--x-max must exceed --x-min");
                }
                if self.n_x < 2 {
                    return usage("--n-x must be >= 2");
                }
                let span = x_max - self.x_min;
                (0..self.n_x)
                    .map(|j| self.x_min + span * j as f64 / (self.n_x - 1) as f64)
                    .collect()
            }
        };
        Ok(Grid { t, x, n_t })
    }
}

/// Quadrature grid covering `grid.t`, aligned with the generated time nodes.
fn quadrature_grid(grid: &Grid, quad_steps: Option<usize>) -> CliResult<TimeGrid> {
    let t_max = grid.t.iter().cloned().fold(0.0, f64::max);
    if t_max <= 0.0 {
        return usage("quadrature mode needs a time > 0");
    }
    let steps = match (quad_steps, grid.n_t) {
        (Some(s), _) => s,
        (None, Some(n)) => n * DEFAULT_QUAD_STEPS.div_ceil(n),
        (None, None) => DEFAULT_QUAD_STEPS,
    };
    TimeGrid::new(t_max, steps).or_else(|e| usage(e.to_string()))
}

struct Emitter {
    format: Format,
    precision: usize,
}

impl Emitter {
    fn new(out: &OutputArgs) -> Self {
        Self {
            format: out.format,
            precision: out.precision as usize,
        }
    }

    fn coord(&self, v: f64) -> String {
        coord(v, self.precision)
    }

    fn value(&self, v: f64) -> String {
        value(v, self.precision)
    }

    fn num(&self, v: f64) -> Value {
        json_number(v, self.precision)
    }

    fn nums(&self, vs: &[f64]) -> Value {
        Value::Array(vs.iter().map(|&v| self.num(v)).collect())
    }

    fn grid_json(&self, grid: &Grid) -> Value {
        json!({ "t": self.nums(&grid.t), "x": self.nums(&grid.x) })
    }

    fn model_json(&self, model: &Model, mode: C1Mode) -> Value {
        let p = &model.params;
        let mut obj = Map::new();
        if let Some(preset) = model.preset {
            obj.insert("preset".into(), json!(preset.name()));
        }
        obj.insert("alpha".into(), self.num(p.alpha()));
        obj.insert("lambda".into(), self.num(p.mks.lambda()));
        if let LambdaSpec::M(m) = model.spec {
            obj.insert("m".into(), self.num(m));
        }
        obj.insert("gamma".into(), self.num(p.mks.gamma()));
        obj.insert("theta".into(), self.num(p.mks.theta()));
        obj.insert("c1_mode".into(), json!(mode.to_string()));
        Value::Object(obj)
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Text to emit plus the exit status.
struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self {
            text,
            code: EXIT_OK,
        }
    }
}

fn cmd_ml(a: &MlArgs) -> CliResult<Outcome> {
    let params = MLParams::new(a.alpha, a.beta).or_else(|e| usage(e.to_string()))?;
    if !a.z.is_finite() {
        return usage("--z must be finite");
    }
    let r = mittag_leffler(params, a.z)?;
    let e = Emitter::new(&a.out);
    let text = match e.format {
        Format::Csv => format!(
            "alpha,beta,z,value,abs_error_estimate,method\n{},{},{},{},{},{}\n",
            e.coord(a.alpha),
            e.coord(a.beta),
            e.coord(a.z),
            e.value(r.value),
            e.value(r.abs_error_estimate),
            r.method
        ),
        Format::Json => json_text(&json!({
            "params": { "alpha": e.num(a.alpha), "beta": e.num(a.beta), "z": e.num(a.z) },
            "values": {
                "value": e.num(r.value),
                "abs_error_estimate": e.num(r.abs_error_estimate),
                "method": r.method.to_string(),
            },
        })),
    };
    Ok(Outcome::ok(text))
}

fn cmd_solve(a: &SolveArgs) -> CliResult<Outcome> {
    let model = a.model.resolve()?;
    let grid = a.grid.resolve(&model.params.mks, true)?;
    let mode = C1Mode::from(a.c1.c1_mode);
    let qgrid = match mode {
        C1Mode::Quadrature => Some(quadrature_grid(&grid, a.c1.quad_steps)?),
        C1Mode::PaperClosedForm => None,
    };
    let solution = Solution::new(model.params, mode, qgrid.as_ref())?;
    let mut rows = Vec::with_capacity(grid.t.len());
    for &t in &grid.t {
        let row = grid
            .x
            .iter()
            .map(|&x| solution.evaluate(t, x))
            .collect::<crate::Result<Vec<f64>>>()?;
        rows.push(row);
    }
    let e = Emitter::new(&a.out);
    let text = match e.format {
        Format::Csv => {
            let mut s = String::from("t,x,u\n");
            for (&t, row) in grid.t.iter().zip(&rows) {
                for (&x, &u) in grid.x.iter().zip(row) {
                    writeln!(s, "{},{},{}", e.coord(t), e.coord(x), e.value(u)).unwrap();
                }
            }
            s
        }
        Format::Json => json_text(&json!({
            "params": e.model_json(&model, mode),
            "grid": e.grid_json(&grid),
            "values": rows.iter().map(|r| e.nums(r)).collect::<Vec<_>>(),
        })),
    };
    Ok(Outcome::ok(text))
}

fn cmd_verify(a: &VerifyArgs) -> CliResult<Outcome> {
    if !(a.tol > 0.0) {
        return usage("--tol must be > 0");
    }
    let model = a.model.resolve()?;
    let grid = a.grid.resolve(&model.params.mks, false)?;
    let mode = C1Mode::from(a.c1.c1_mode);
    if mode == C1Mode::Quadrature {
        // The quadrature C₁ must at least be computable on this grid.
        Solution::new(
            model.params,
            mode,
            Some(&quadrature_grid(&grid, a.c1.quad_steps)?),
        )?;
    }
    let report = pde_residual(&model.params, &grid.t, &grid.x, mode)?;
    let passed = report.passes(a.tol);
    let e = Emitter::new(&a.out);
    let text = match e.format {
        Format::Csv => format!(
            "max_abs_residual,argmax_t,argmax_x,tolerance,passed\n{},{},{},{},{}\n",
            e.value(report.max_abs_residual),
            e.coord(report.argmax.0),
            e.coord(report.argmax.1),
            e.coord(a.tol),
            passed
        ),
        Format::Json => json_text(&json!({
            "params": e.model_json(&model, mode),
            "grid": e.grid_json(&grid),
            "values": report.residual_field.iter().map(|r| e.nums(r)).collect::<Vec<_>>(),
            "report": {
                "max_abs_residual": e.num(report.max_abs_residual),
                "argmax": { "t": e.num(report.argmax.0), "x": e.num(report.argmax.1) },
                "tolerance": e.num(a.tol),
                "passed": passed,
            },
        })),
    };
    Ok(Outcome {
        text,
        code: if passed { EXIT_OK } else { EXIT_VERIFY_FAILED },
    })
}

fn cmd_gap(a: &GapArgs) -> CliResult<Outcome> {
    let order = order_from(a.alpha)?;
    if !a.theta.is_finite() {
        return usage("--theta must be finite");
    }
    check_finite("t", &a.t)?;
    if a.t.iter().any(|&t| t < 0.0) {
        return usage("--t values must be >= 0");
    }
    let report = composition_gap(order, a.theta, &a.t)?;
    let e = Emitter::new(&a.out);
    let text = match e.format {
        Format::Csv => {
            let mut s = String::from("t,gap\n");
            for (&t, &g) in report.t_samples.iter().zip(&report.gaps) {
                writeln!(s, "{},{}", e.coord(t), e.value(g)).unwrap();
            }
            s
        }
        Format::Json => json_text(&json!({
            "params": { "alpha": e.num(a.alpha), "theta": e.num(a.theta) },
            "grid": { "t": e.nums(&report.t_samples) },
            "values": e.nums(&report.gaps),
        })),
    };
    Ok(Outcome::ok(text))
}

fn cmd_invariance(a: &InvarianceArgs) -> CliResult<Outcome> {
    let Some(spec) = a.lambda.spec() else {
        return usage("one of --lambda or --m is required");
    };
    let mks = mks_from(spec)?;
    if a.trials == 0 {
        return usage("--trials must be >= 1");
    }
    if !(a.tol > 0.0) {
        return usage("--tol must be > 0");
    }
    let r = invariance_check(&mks, a.trials, a.seed, a.tol)?;
    let e = Emitter::new(&a.out);
    let text = match e.format {
        Format::Csv => format!(
            "lambda,trials,seed,max_fit_residual,max_coefficient_error,\
             max_annihilator_residual,tolerance,passed\n{},{},{},{},{},{},{},{}\n",
            e.coord(r.lambda),
            r.trials,
            r.seed,
            e.value(r.max_fit_residual),
            e.value(r.max_coefficient_error),
            e.value(r.max_annihilator_residual),
            e.coord(r.tolerance),
            r.passed
        ),
        Format::Json => json_text(&json!({
            "params": {
                "lambda": e.num(mks.lambda()),
                "gamma": e.num(mks.gamma()),
                "theta": e.num(mks.theta()),
                "trials": r.trials,
                "seed": r.seed,
            },
            "report": {
                "max_fit_residual": e.num(r.max_fit_residual),
                "max_coefficient_error": e.num(r.max_coefficient_error),
                "max_annihilator_residual": e.num(r.max_annihilator_residual),
                "tolerance": e.num(r.tolerance),
                "passed": r.passed,
            },
        })),
    };
    Ok(Outcome {
        text,
        code: if r.passed {
            EXIT_OK
        } else {
            EXIT_VERIFY_FAILED
        },
    })
}

fn output_path(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Ml(a) => a.out.output.as_ref(),
        Command::Solve(a) => a.out.output.as_ref(),
        Command::Verify(a) => a.out.output.as_ref(),
        Command::Gap(a) => a.out.output.as_ref(),
        Command::Invariance(a) => a.out.output.as_ref(),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing results to `stdout` (or `--output`) and diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Ml(a) => cmd_ml(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Gap(a) => cmd_gap(a),
        Command::Invariance(a) => cmd_invariance(a),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
        Err(CliError::Runtime(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_RUNTIME;
        }
    };
    let written = match output_path(&cli.command) {
        Some(path) => std::fs::write(path, &outcome.text),
        None => stdout
            .write_all(outcome.text.as_bytes())
            .and_then(|_| stdout.flush()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_RUNTIME;
    }
    if outcome.code == EXIT_VERIFY_FAILED {
        let _ = writeln!(stderr, "verification failed");
    }
    outcome.code
}

pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run(args, &mut io::stdout().lock(), &mut io::stderr().lock())
}
