//! `wbs`: fit, compare, simulate and describe Weibull Birnbaum–Saunders models.

mod commands;
mod input;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "wbs", version, about = "Weibull Birnbaum-Saunders lifetime modelling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum likelihood estimates, standard errors and -2 log-likelihood.
    Fit {
        #[command(flatten)]
        data: DataArgs,
        /// Comma-separated families, or `all`.
        #[arg(long, visible_alias = "models", default_value = "wbs")]
        model: String,
        #[command(flatten)]
        fit: FitArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Goodness-of-fit table (-2l, AIC, BIC, CAIC, K-S) sorted by AIC.
    Compare {
        #[command(flatten)]
        data: DataArgs,
        /// Comma-separated families, or `all`.
        #[arg(long, visible_alias = "model", default_value = "all")]
        models: String,
        #[command(flatten)]
        fit: FitArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Draw a WBS sample by inverse transform.
    Simulate {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also write (t, F_exact, F_empirical) as CSV to this path.
        #[arg(long)]
        cdf_out: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Scaled total time on test curve.
    Ttt {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Moments, mean deviations, quantiles and a hazard curve.
    Props {
        #[command(flatten)]
        params: ParamArgs,
        /// Number of hazard grid points between the 0.001 and 0.999 quantiles.
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// List the built-in datasets with their checksums.
    Datasets {
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct DataArgs {
    /// Built-in dataset name or path to a data file.
    #[arg(long)]
    data: String,
    /// CSV column (header name or 1-based index).
    #[arg(long)]
    column: Option<String>,
}

#[derive(Args)]
struct FitArgs {
    /// Random starts for the WBS fit.
    #[arg(long)]
    starts: Option<usize>,
    /// Gradient-norm tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to a file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Numeric(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<wbs_core::Error> for CliError {
    fn from(e: wbs_core::Error) -> Self {
        match e {
            wbs_core::Error::InvalidParams(_) => CliError::Usage(e.to_string()),
            wbs_core::Error::InvalidSample(_) => CliError::Data(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    use commands::*;
    match cli.command {
        Command::Fit { data, model, fit, out } => {
            let d = input::load(&data.data, data.column.as_deref())?;
            cmd_fit(&d, &parse_models(&model)?, &fit_options(&fit)?, &out.into_sink(Format::Json))
        }
        Command::Compare { data, models, fit, out } => {
            let d = input::load(&data.data, data.column.as_deref())?;
            cmd_compare(&d, &parse_models(&models)?, &fit_options(&fit)?, &out.into_sink(Format::Json))
        }
        Command::Simulate {
            params,
            n,
            seed,
            cdf_out,
            out,
        } => {
            if n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            cmd_simulate(&params.build()?, n, seed, cdf_out.as_deref(), &out.into_sink(Format::Csv))
        }
        Command::Ttt { data, out } => {
            let d = input::load(&data.data, data.column.as_deref())?;
            cmd_ttt(&d, &out.into_sink(Format::Csv))
        }
        Command::Props { params, points, out } => {
            if points < 2 {
                return Err(CliError::Usage("--points must be at least 2".into()));
            }
            cmd_props(&params.build()?, points, &out.into_sink(Format::Csv))
        }
        Command::Datasets { out } => cmd_datasets(&out.into_sink(Format::Json)),
    }
}

impl ParamArgs {
    fn build(&self) -> Result<wbs_core::WbsParams, CliError> {
        wbs_core::WbsParams::new(self.alpha, self.beta, self.a, self.b).map_err(|e| CliError::Usage(e.to_string()))
    }
}

impl OutArgs {
    fn into_sink(self, default: Format) -> commands::Sink {
        commands::Sink {
            format: self.format.unwrap_or(default),
            path: self.out,
        }
    }
}

fn fit_options(f: &FitArgs) -> Result<wbs_core::FitOptions, CliError> {
    let mut o = wbs_core::FitOptions::default();
    if let Some(s) = f.starts {
        if s == 0 {
            return Err(CliError::Usage("--starts must be at least 1".into()));
        }
        o.n_starts = s;
    }
    if let Some(t) = f.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Usage("--tol must be positive".into()));
        }
        o.grad_tol = t;
    }
    if let Some(s) = f.seed {
        o.seed = wbs_core::RngSeed(s);
    }
    Ok(o)
}

/// `all` or a comma-separated list; duplicates are dropped, order is kept.
fn parse_models(s: &str) -> Result<Vec<wbs_core::Family>, CliError> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(wbs_core::Family::ALL.to_vec());
    }
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let f: wbs_core::Family = part.parse().map_err(|e: wbs_core::Error| CliError::Usage(e.to_string()))?;
        if !out.contains(&f) {
            out.push(f);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("model list is empty".into()));
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wbs: {e}");
            ExitCode::from(e.code())
        }
    }
}
