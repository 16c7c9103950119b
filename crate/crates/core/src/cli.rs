//! Command-line front end. Exit codes: 0 success, 1 input error, 2 numeric
//! failure.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::DeaError;
use crate::exec::Execution;
use crate::io::{
    parse_dataset, render_properties, render_ranges, render_rankings, render_retention, DataKind, OutputFormat,
    ParsedDataset, RunConfig,
};
use crate::models::{ModelKind, PerturbationMask};
use crate::perturbation::{empirical_radius, level_grid, retention_test, LabConfig, SamplingScheme};
use crate::properties::run_property_suites;
use crate::ranking::{rank_all, rank_interval_all};

#[derive(Debug, Parser)]
#[command(name = "robust-dea", version, about = "Robustness-based DEA rankings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank every DMU of a dataset.
    Rank(RankArgs),
    /// Run the randomized property suites.
    Verify(VerifyArgs),
    /// Monte-Carlo retention test for one DMU.
    Perturb(PerturbArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Fix {
    Inputs,
    Outputs,
    PeersInputs,
    PeersOutputs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Table => OutputFormat::Table,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Sampling {
    Uniform,
    Vertices,
}

#[derive(Debug, Args)]
struct RankArgs {
    /// CSV file with an `id` column and `i:`/`o:` data columns.
    #[arg(long)]
    input: PathBuf,
    /// ccr, robust-lp, robust-exact, bcc, bcc-robust-lp or bcc-robust-exact.
    #[arg(long, default_value = "robust-lp", value_parser = parse_model)]
    model: ModelKind,
    /// Hold a data group at its nominal value (repeatable).
    #[arg(long, value_enum)]
    fix: Vec<Fix>,
    /// Rank interval data (columns with :lo/:hi suffixes).
    #[arg(long)]
    interval: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Decimals in table output (1 to 12).
    #[arg(long, default_value_t = 4)]
    precision: usize,
    /// Leave the test DMU out of its own peer set in classical scores.
    #[arg(long)]
    exclude_self: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 200)]
    datasets: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Debug, Args)]
struct PerturbArgs {
    #[arg(long)]
    input: PathBuf,
    /// Id of the DMU to test.
    #[arg(long)]
    dmu: String,
    /// Perturbation level for a single retention test.
    #[arg(long, required_unless_present = "radius_step")]
    delta: Option<f64>,
    /// Estimate the radius over the grid 0, step, 2·step, ... instead.
    #[arg(long, conflicts_with = "delta")]
    radius_step: Option<f64>,
    #[arg(long, default_value_t = 0.5, requires = "radius_step")]
    radius_max: f64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum)]
    fix: Vec<Fix>,
    #[arg(long, value_enum, default_value = "uniform")]
    sampling: Sampling,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    s.parse::<ModelKind>().map_err(|e| e.to_string())
}

fn mask_from(fixes: &[Fix]) -> PerturbationMask {
    let mut mask = PerturbationMask::ALL;
    for fix in fixes {
        match fix {
            Fix::Inputs => mask.vary_test_inputs = false,
            Fix::Outputs => mask.vary_test_outputs = false,
            Fix::PeersInputs => mask.vary_peer_inputs = false,
            Fix::PeersOutputs => mask.vary_peer_outputs = false,
        }
    }
    mask
}

enum Failure {
    Input(String),
    Numeric(String),
}

impl From<DeaError> for Failure {
    fn from(e: DeaError) -> Self {
        if e.is_numeric() {
            Failure::Numeric(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn load(path: &PathBuf) -> Result<ParsedDataset, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_dataset(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code.
pub fn run_cli<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{shown}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{shown}");
                    1
                }
            };
        }
    };
    let outcome = match cli.command {
        Command::Rank(args) => rank(args, stdout, stderr),
        Command::Verify(args) => verify(args, stdout),
        Command::Perturb(args) => perturb(args, stdout),
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Numeric(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<(), Failure> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| Failure::Input(format!("cannot write output: {e}")))
}

fn rank(args: RankArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let config = RunConfig {
        model: args.model,
        mask: mask_from(&args.fix),
        include_self_classical: !args.exclude_self,
        interval_mode: args.interval,
        output_format: args.format.into(),
        precision: args.precision,
        ..RunConfig::default()
    };
    config.validate()?;
    let parsed = load(&args.input)?;
    if config.interval_mode != parsed.is_interval() {
        return Err(Failure::Input(if config.interval_mode {
            "--interval needs interval columns (':lo'/':hi' pairs)".into()
        } else {
            "the dataset has interval columns; pass --interval".into()
        }));
    }
    let rank_cfg = config.rank_config();

    let mut failures = Vec::new();
    let text = match parsed.data {
        DataKind::Point(ds) => {
            let mut ok = Vec::new();
            for outcome in rank_all(&ds, config.model, config.mask, &rank_cfg)? {
                match outcome {
                    Ok(r) => ok.push(r),
                    Err(f) => failures.push(f),
                }
            }
            render_rankings(&ok, config.output_format, config.precision)?
        }
        DataKind::Interval(iv) => {
            let mut ok = Vec::new();
            for outcome in rank_interval_all(&iv, config.model, config.mask, &rank_cfg)? {
                match outcome {
                    Ok(r) => ok.push(r),
                    Err(f) => failures.push(f),
                }
            }
            render_ranges(&ok, config.output_format, config.precision)
        }
    };
    emit(stdout, &text)?;
    if failures.is_empty() {
        return Ok(());
    }
    for f in &failures {
        let _ = writeln!(stderr, "DMU '{}': {}", f.dmu_id, f.error);
    }
    let summary = format!("{} DMU(s) could not be ranked", failures.len());
    Err(if failures.iter().any(|f| f.error.is_numeric()) {
        Failure::Numeric(format!("numeric failure: {summary}"))
    } else {
        Failure::Input(summary)
    })
}

fn verify(args: VerifyArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    if args.datasets == 0 {
        return Err(Failure::Input("--datasets must be at least 1".into()));
    }
    let reports = run_property_suites(args.datasets, args.seed, Execution::default());
    emit(stdout, &render_properties(&reports, args.format.into()))?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numeric(format!("property violations in {}", failed.join(", "))))
    }
}

fn perturb(args: PerturbArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let parsed = load(&args.input)?;
    let DataKind::Point(ds) = parsed.data else {
        return Err(Failure::Input("perturb needs point data".into()));
    };
    let test = ds
        .index_of(&args.dmu)
        .ok_or_else(|| Failure::Input(format!("no DMU with id '{}'", args.dmu)))?;
    let lab = LabConfig {
        mask: mask_from(&args.fix),
        scheme: match args.sampling {
            Sampling::Uniform => SamplingScheme::Uniform,
            Sampling::Vertices => SamplingScheme::Vertices,
        },
        execution: Execution::default(),
    };
    let format: OutputFormat = args.format.into();
    if let Some(step) = args.radius_step {
        if !(step > 0.0 && step < 1.0) || !(0.0..1.0).contains(&args.radius_max) {
            return Err(Failure::Input("--radius-step must be in (0, 1) and --radius-max in [0, 1)".into()));
        }
        let levels = level_grid(step, args.radius_max);
        let radius = empirical_radius(&ds, test, args.trials, &levels, args.seed, &lab)?;
        let text = match format {
            OutputFormat::Json => format!(
                "{}\n",
                serde_json::json!({ "id": args.dmu, "empirical_radius": radius, "step": step, "trials_per_level": args.trials })
            ),
            OutputFormat::Table => format!("DMU {}: empirical radius {radius} (step {step}, {} trials per level)\n", args.dmu, args.trials),
        };
        return emit(stdout, &text);
    }
    let delta = args.delta.expect("clap requires --delta without --radius-step");
    let report = retention_test(&ds, test, delta, args.trials, args.seed, &lab)?;
    emit(stdout, &render_retention(&report, format))
}
