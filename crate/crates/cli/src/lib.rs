//! Command-line front end: run scenarios, check a-priori stability, sweep a
//! controller gain, list models and re-export result bundles.
//!
//! Every command prints `key=value` lines. Exit status is 0 for a clean run
//! or a stable prediction, 2 for a diverged run or an unstable prediction and
//! 1 for usage or validation errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flexsim::io::import_bundle;
use flexsim::stability::{Criterion, StabilityReport};
use flexsim::{
    export_result, gain_sweep, list_models, load_scenario_with_overrides, run, ExportFormats,
    Override, Scenario, SimulationResult,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DIVERGED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "flexsim",
    version,
    about = "Explicit finite-difference simulation of flexible structures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario and optionally write a result bundle.
    Run(RunArgs),
    /// Print the a-priori stability report of a scenario.
    Check(ScenarioArgs),
    /// Run a scenario once per value of one controller gain.
    Sweep(SweepArgs),
    /// List the available models.
    ListModels(ListArgs),
    /// Write a result bundle, either by running a scenario or by converting
    /// an existing bundle.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Scenario file (TOML, or JSON by extension).
    #[arg(long)]
    pub scenario: PathBuf,
    /// Override a scenario key, e.g. `controller.pd_gains.k2=30`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Divergence threshold; shorthand for `--set divergence_threshold=X`.
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Csv,
    Bin,
    Both,
}

impl From<Format> for ExportFormats {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => ExportFormats::CSV,
            Format::Bin => ExportFormats::BIN,
            Format::Both => ExportFormats::BOTH,
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Directory for the result bundle; nothing is written without it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Gain to vary: k1..k4 for PD, k1, k2 or disturbance_bound for exact-model.
    #[arg(long)]
    pub gain: String,
    /// Comma-separated gain values.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub values: Vec<f64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ListArgs {
    /// Print the whole catalog as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Scenario to run.
    #[arg(long, conflicts_with = "from", required_unless_present = "from")]
    pub scenario: Option<PathBuf>,
    #[arg(long = "set", value_name = "KEY=VALUE", requires = "scenario")]
    pub overrides: Vec<String>,
    #[arg(long, requires = "scenario")]
    pub threshold: Option<f64>,
    /// Existing bundle to convert.
    #[arg(long)]
    pub from: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    pub format: Format,
}

/// Parses `args` (including the program name) and executes the command.
/// Normal output goes to `out`, diagnostics to `err`; returns the exit status.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
    }
}

type CmdResult = std::result::Result<i32, String>;

fn execute(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Run(args) => cmd_run(args, out),
        Command::Check(args) => cmd_check(args, out),
        Command::Sweep(args) => cmd_sweep(args, out),
        Command::ListModels(args) => cmd_list(args, out),
        Command::Export(args) => cmd_export(args, out),
    }
}

fn parse_overrides(
    raw: &[String],
    threshold: Option<f64>,
) -> std::result::Result<Vec<Override>, String> {
    let mut list = raw
        .iter()
        .map(|s| s.parse::<Override>().map_err(|e| e.to_string()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if let Some(x) = threshold {
        list.push(
            format!("divergence_threshold={x:?}")
                .parse()
                .map_err(|e: flexsim::Error| e.to_string())?,
        );
    }
    Ok(list)
}

/// Loads the scenario file with `--set` and `--threshold` applied.
pub fn load(
    path: &PathBuf,
    raw: &[String],
    threshold: Option<f64>,
) -> std::result::Result<Scenario, String> {
    let overrides = parse_overrides(raw, threshold)?;
    load_scenario_with_overrides(path, &overrides).map_err(|e| format!("{}: {e}", path.display()))
}

fn io_err(e: std::io::Error) -> String {
    e.to_string()
}

fn summary(result: &SimulationResult, out: &mut dyn Write) -> std::io::Result<()> {
    let v = &result.verdict;
    let peak = v.peak_magnitude;
    match v.first_bad_step {
        Some(step) => writeln!(
            out,
            "verdict=diverged first_bad_step={step} peak={peak:e} reason={:?}",
            v.reason
        )?,
        None => writeln!(
            out,
            "verdict=stable steps={} peak={peak:e}",
            result.steps_completed
        )?,
    }
    writeln!(out, "model={}", result.scenario.model.kind())?;
    writeln!(out, "controller={}", result.scenario.controller.kind)?;
    writeln!(out, "steps_completed={}", result.steps_completed)?;
    writeln!(out, "tip_final={:e}", result.tip.final_w())?;
    writeln!(out, "tip_final_abs={:e}", result.tip.final_w().abs())?;
    writeln!(
        out,
        "tip_tail_mean_abs={:e}",
        result.tip.window_mean_abs(0.1)
    )?;
    writeln!(out, "wall_time_s={:.6}", result.wall_time.as_secs_f64())?;
    if let Some(step) = v.first_bad_step {
        writeln!(out, "message=diverged at step {step}")?;
    }
    Ok(())
}

fn exit_for(result: &SimulationResult) -> i32 {
    if result.verdict.diverged {
        EXIT_DIVERGED
    } else {
        EXIT_OK
    }
}

fn cmd_run(args: RunArgs, out: &mut dyn Write) -> CmdResult {
    let s = &args.scenario;
    let scenario = load(&s.scenario, &s.overrides, s.threshold)?;
    let result = run(&scenario).map_err(|e| e.to_string())?;
    summary(&result, out).map_err(io_err)?;
    if let Some(dir) = &args.out {
        export_result(&result, dir, args.format.into())
            .map_err(|e| format!("{}: {e}", dir.display()))?;
        writeln!(out, "bundle={}", dir.display()).map_err(io_err)?;
    }
    Ok(exit_for(&result))
}

/// Short decimal rendering that hides representation noise such as
/// `0.39999999999999997`.
pub fn short(v: f64) -> String {
    let rounded: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    let a = rounded.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

/// One-line human form of a report, e.g. `r=0.4 < 0.5: stable`.
pub fn describe(report: &StabilityReport) -> String {
    let verdict = if report.predicted_stable {
        "stable"
    } else {
        "unstable"
    };
    let (name, ok, bad) = match report.criterion {
        Criterion::HeatScheme => ("r", "<", ">="),
        Criterion::BeamScheme => ("lhs", "<=", ">"),
        Criterion::WaveSpeedHeuristic => ("courant", "<=", ">"),
    };
    let op = if report.predicted_stable { ok } else { bad };
    let line = format!(
        "{name}={} {op} {}: {verdict}",
        short(report.lhs_value),
        short(report.threshold)
    );
    if report.criterion.is_heuristic() {
        format!("{line} [{}]", report.criterion_name)
    } else {
        line
    }
}

fn cmd_check(args: ScenarioArgs, out: &mut dyn Write) -> CmdResult {
    let scenario = load(&args.scenario, &args.overrides, args.threshold)?;
    let mesh = flexsim::build_mesh(scenario.mesh).map_err(|e| e.to_string())?;
    let report =
        flexsim::engine::a_priori_report(&scenario.model, &mesh).map_err(|e| e.to_string())?;
    let w = |out: &mut dyn Write| -> std::io::Result<()> {
        writeln!(out, "{}", describe(&report))?;
        writeln!(out, "model={}", scenario.model.kind())?;
        writeln!(out, "criterion={}", report.criterion_name)?;
        writeln!(out, "heuristic={}", report.criterion.is_heuristic())?;
        writeln!(out, "h={}", short(mesh.h))?;
        writeln!(out, "k={}", short(mesh.k))?;
        writeln!(out, "lhs={}", short(report.lhs_value))?;
        writeln!(out, "threshold={}", short(report.threshold))?;
        writeln!(out, "margin={}", short(report.margin))?;
        writeln!(
            out,
            "predicted={}",
            if report.predicted_stable {
                "stable"
            } else {
                "unstable"
            }
        )
    };
    w(out).map_err(io_err)?;
    Ok(if report.predicted_stable {
        EXIT_OK
    } else {
        EXIT_DIVERGED
    })
}

fn cmd_sweep(args: SweepArgs, out: &mut dyn Write) -> CmdResult {
    let s = &args.scenario;
    let scenario = load(&s.scenario, &s.overrides, s.threshold)?;
    let entries =
        gain_sweep(&scenario, &args.gain, &args.values, args.jobs).map_err(|e| e.to_string())?;
    for e in &entries {
        let verdict = if e.verdict.diverged {
            "diverged"
        } else {
            "stable"
        };
        let step = e
            .verdict
            .first_bad_step
            .map_or("none".to_string(), |s| s.to_string());
        writeln!(
            out,
            "{}={} verdict={verdict} first_bad_step={step} steps_completed={} tip_final_abs={:e} tip_tail_mean_abs={:e}",
            args.gain,
            e.value,
            e.steps_completed,
            e.final_tip_magnitude,
            e.tail_mean_abs
        )
        .map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn cmd_list(args: ListArgs, out: &mut dyn Write) -> CmdResult {
    let catalog = list_models();
    if args.json {
        let text = serde_json::to_string_pretty(&catalog).map_err(|e| e.to_string())?;
        writeln!(out, "{text}").map_err(io_err)?;
        return Ok(EXIT_OK);
    }
    let mut w = || -> std::io::Result<()> {
        for m in &catalog.models {
            let controllers: Vec<&str> = m.controllers.iter().map(|c| c.kind.as_str()).collect();
            let params: Vec<String> = m
                .parameters
                .iter()
                .map(|p| format!("{}:{}", p.name, p.default))
                .collect();
            writeln!(
                out,
                "model={} title=\"{}\" controllers={} params={}",
                m.kind,
                m.title,
                controllers.join(","),
                params.join(",")
            )?;
        }
        for a in &catalog.absent {
            writeln!(out, "absent={} reason=\"{}\"", a.name, a.reason)?;
        }
        Ok(())
    };
    w().map_err(io_err)?;
    Ok(EXIT_OK)
}

fn cmd_export(args: ExportArgs, out: &mut dyn Write) -> CmdResult {
    let result = match (&args.scenario, &args.from) {
        (Some(path), _) => {
            let scenario = load(path, &args.overrides, args.threshold)?;
            run(&scenario).map_err(|e| e.to_string())?
        }
        (None, Some(dir)) => import_bundle(dir)
            .and_then(|b| b.into_result())
            .map_err(|e| format!("{}: {e}", dir.display()))?,
        (None, None) => return Err("one of --scenario or --from is required".into()),
    };
    let meta = export_result(&result, &args.out, args.format.into())
        .map_err(|e| format!("{}: {e}", args.out.display()))?;
    writeln!(out, "bundle={}", args.out.display()).map_err(io_err)?;
    if let Some(shape) = meta.shape {
        writeln!(out, "levels={} nodes={}", shape.n_levels, shape.n_nodes).map_err(io_err)?;
    }
    writeln!(
        out,
        "verdict={}",
        if result.verdict.diverged {
            "diverged"
        } else {
            "stable"
        }
    )
    .map_err(io_err)?;
    Ok(EXIT_OK)
}
