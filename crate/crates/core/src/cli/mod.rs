//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed validation check, 2 configuration error,
//! 3 domain or unsupported-method error.

mod commands;
mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::report::{Format, RiskReport};
use crate::validation;

pub use commands::{cmd_concentration, cmd_premium, cmd_ratios, cmd_stoploss, cmd_tail};
pub use config::{GridKind, Job, Mc, McConfig, OutputConfig, RunConfig, DEFAULT_TAU, MIN_MC_COUNT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "lstat-tail", version, about = "Tail expansions and risk measures for weighted order-statistic sums")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First-, second- and higher-order tail probabilities on an x grid.
    Tail(RunArgs),
    /// VaR and CTE concentrations on a p grid.
    Concentration(RunArgs),
    /// TVaR/VaR and TCTE/CTE ratios on a p grid.
    Ratios(RunArgs),
    /// ROC reinsurance premiums on a p grid for each tau.
    Premium(RunArgs),
    /// Stop-loss premiums on a retention grid.
    Stoploss(RunArgs),
    /// Run the built-in invariant suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Model spec, e.g. burr:a=0.8,b=2.5.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub weights: Option<Vec<f64>>,
    /// x values (tail, stoploss) or probability levels (concentration, ratios, premium).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub grid: Option<Vec<f64>>,
    /// ROC levels for premium; defaults to 0.06,0.10.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub tau: Option<Vec<f64>>,
    #[arg(long)]
    pub mc_count: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// exact_n2, monte_carlo or asymptotic.
    #[arg(long)]
    pub fn_method: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// JSON config file; only its output section is used.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn load(path: &Option<PathBuf>) -> Result<RunConfig> {
    path.as_deref().map_or_else(|| Ok(RunConfig::default()), RunConfig::from_file)
}

fn output_flags(o: &OutputArgs) -> Result<Option<OutputConfig>> {
    let format = o.format.as_deref().map(str::parse::<Format>).transpose()?;
    Ok((format.is_some() || o.out.is_some()).then(|| OutputConfig { format, path: o.out.clone() }))
}

impl RunArgs {
    /// The config file merged with the flags.
    pub fn merged(&self) -> Result<RunConfig> {
        let mc = (self.mc_count.is_some() || self.seed.is_some()).then_some(McConfig {
            count: self.mc_count,
            seed: self.seed,
        });
        let flags = RunConfig {
            model: self.model.clone(),
            weights: self.weights.clone(),
            grid: self.grid.clone(),
            tau: self.tau.clone(),
            mc,
            fn_method: self.fn_method.clone(),
            output: output_flags(&self.output)?,
        };
        Ok(load(&self.config)?.overridden_by(flags))
    }
}

/// Maps an error to its exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => EXIT_CONFIG,
        _ => EXIT_DOMAIN,
    }
}

fn emit(report: &RiskReport, format: Format, out: &Option<PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    let text = report.render(format);
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::Config(format!("cannot write to stdout: {e}"))),
    }
}

fn run_job(args: &RunArgs, kind: GridKind, f: fn(&Job) -> Result<RiskReport>, stdout: &mut dyn Write) -> Result<i32> {
    let job = Job::resolve(args.merged()?, kind)?;
    let report = f(&job)?;
    emit(&report, job.format, &job.out, stdout)?;
    Ok(EXIT_OK)
}

/// Executes a parsed command.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    use GridKind::*;
    match &cli.command {
        Command::Tail(a) => run_job(a, Levels, cmd_tail, stdout),
        Command::Concentration(a) => run_job(a, Probabilities, cmd_concentration, stdout),
        Command::Ratios(a) => run_job(a, Probabilities, cmd_ratios, stdout),
        Command::Premium(a) => run_job(a, Probabilities, cmd_premium, stdout),
        Command::Stoploss(a) => run_job(a, Levels, cmd_stoploss, stdout),
        Command::Validate(a) => {
            let cfg = load(&a.config)?.overridden_by(RunConfig {
                output: output_flags(&a.output)?,
                ..Default::default()
            });
            let (format, out) = config::resolve_output(&cfg);
            let checks = validation::run_suite()?;
            emit(&validation::to_report(&checks), format, &out, stdout)?;
            Ok(if checks.iter().all(|c| c.pass) { EXIT_OK } else { EXIT_VALIDATION })
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
