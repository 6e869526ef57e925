use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thermoecon_core::calibration::{self, HistoricalSeries};
use thermoecon_core::dynamics::{integrate_fiscal, integrate_physical};
use thermoecon_core::model::classify_mode;

use crate::config::{self, ConfigError, Needs, Overrides, ScenarioFile};
use crate::data::{self, DataError};
use crate::output::{self, Format};
use crate::parallel;

#[derive(Debug, Parser)]
#[command(name = "thermoecon", version, about = "Thermodynamic growth model: simulate, ensemble, calibrate")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report the growth mode of (eta0, eta_tech).
    Classify {
        #[arg(long, value_parser = rate, allow_hyphen_values = true)]
        eta0: f64,
        #[arg(long, value_parser = rate, allow_hyphen_values = true)]
        eta_tech: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Deterministic fiscal trajectory.
    Simulate(RunArgs),
    /// Noisy ensemble with quantile bands.
    Ensemble(RunArgs),
    /// Coupled physical model.
    Physical(RunArgs),
    /// Cumulative wealth, lambda and empirical rate of return from a data file.
    Calibrate {
        data: PathBuf,
        /// Pre-series wealth in billions, or `head` for GDP(first year) x 2500 yr.
        #[arg(long, default_value = "0")]
        c_pre: String,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; never changes results.
    #[arg(long, env = "THERMOECON_THREADS", value_parser = positive)]
    pub threads: Option<usize>,
    #[arg(long, value_parser = rate, allow_hyphen_values = true)]
    pub eta0: Option<f64>,
    #[arg(long, value_parser = rate, allow_hyphen_values = true)]
    pub eta_tech: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub members: Option<usize>,
    #[arg(long, value_parser = rate)]
    pub sigma: Option<f64>,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("'{s}' is not a positive integer")),
    }
}

fn rate(s: &str) -> Result<f64, String> {
    config::parse_rate("value", s).map_err(|e| match e {
        ConfigError::Invalid { reason, .. } => reason,
        other => other.to_string(),
    })
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("data error: {0}")]
    Data(#[from] DataError),
    #[error("{0}")]
    Blowup(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Blowup(_) => 4,
        }
    }
}

fn emit(out: &OutputArgs, body: &str) -> Result<(), CliError> {
    match &out.out {
        Some(path) => std::fs::write(path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

/// `<out>.manifest.ini` next to the output file.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.ini");
    PathBuf::from(name)
}

fn load_params(args: &RunArgs, needs: Needs) -> Result<thermoecon_core::dynamics::ScenarioParams, CliError> {
    let file = match &args.config {
        Some(p) => ScenarioFile::load(p)?,
        None => ScenarioFile::default(),
    };
    let overrides = Overrides {
        eta0: args.eta0,
        eta_tech: args.eta_tech,
        dt: args.dt,
        horizon: args.horizon,
        members: args.members,
        sigma: args.sigma,
        seed: args.seed,
    };
    Ok(config::resolve(file, &overrides, needs)?)
}

fn write_run(args: &RunArgs, command: &str, params: &thermoecon_core::dynamics::ScenarioParams, body: &str) -> Result<(), CliError> {
    emit(&args.out, body)?;
    if let Some(path) = &args.out.out {
        let m = manifest_path(path);
        std::fs::write(&m, config::manifest(params, command)).map_err(|e| CliError::Io(format!("{}: {e}", m.display())))?;
    }
    Ok(())
}

fn core_config_error(e: thermoecon_core::Error) -> CliError {
    CliError::Config(ConfigError::invalid("scenario", e.to_string()))
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Classify { eta0, eta_tech, out } => {
            let mode = classify_mode(eta_tech, eta0).map_err(|e| ConfigError::invalid("eta0", e.to_string()))?;
            emit(&out, &output::classification(eta0, eta_tech, mode, out.format))
        }
        Command::Simulate(args) => {
            let params = load_params(&args, Needs::Fiscal)?;
            let traj = integrate_fiscal(&params).map_err(core_config_error)?;
            write_run(&args, "simulate", &params, &output::trajectory(&traj, args.out.format))?;
            if traj.meta.truncated {
                let t = traj.points.last().map(|p| p.t).unwrap_or(0.0);
                return Err(CliError::Blowup(format!("collapse: rate of return diverged after t = {}", output::num(t))));
            }
            Ok(())
        }
        Command::Ensemble(args) => {
            let params = load_params(&args, Needs::Ensemble)?;
            let result = parallel::run_ensemble(&params, args.threads).map_err(core_config_error)?;
            write_run(&args, "ensemble", &params, &output::bands(&result, &params.id, args.out.format))
        }
        Command::Physical(args) => {
            let params = load_params(&args, Needs::Physical)?;
            let scenario = params.physical.as_ref().expect("resolved with physical section");
            let run = integrate_physical(scenario).map_err(core_config_error)?;
            write_run(&args, "physical", &params, &output::physical(&run, &params.id, args.out.format))?;
            if run.trajectory.meta.truncated {
                return Err(CliError::Blowup("system dissolved before the horizon".into()));
            }
            Ok(())
        }
        Command::Calibrate { data, c_pre, out } => {
            let series = data::load(&data)?;
            let c_pre = parse_c_pre(&c_pre, &series)?;
            let report = calibration::calibrate(&series, c_pre)
                .map_err(|e| DataError { problems: vec![(0, e.to_string())] })?;
            emit(&out, &output::calibration(&report, out.format))
        }
    }
}

fn parse_c_pre(text: &str, series: &HistoricalSeries) -> Result<f64, CliError> {
    if text.trim() == "head" {
        return calibration::pre_series_wealth(series).map_err(|e| DataError { problems: vec![(0, e.to_string())] }.into());
    }
    let v = config::parse_number("c-pre", text)?;
    if v < 0.0 {
        return Err(ConfigError::invalid("c-pre", "must be non-negative").into());
    }
    Ok(v)
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("thermoecon: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
