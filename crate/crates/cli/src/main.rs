//! `arveson`: runs the norm study, the Weyl relation suite and the Warren-noise
//! Monte Carlo, and assembles the obstruction report.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::Settings;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or parameter combinations; exit code 2.
    Validation(String),
    /// Failure while running or writing artifacts; exit code 1.
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid configuration: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "arveson", version, about = "Sign-operator norms and Warren-noise Monte Carlo")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Norm of the three-sign sum over dimensions, angles and schemes.
    NormStudy(Common),
    /// Residuals of the automorphism relations and the Weyl phase.
    WeylSuite(Common),
    /// Monte Carlo mass of a first-superchaos vector.
    WarrenMass(Common),
    /// Quadratic forms of the ψ(n, δ) probes.
    Lemma43(Common),
    /// Margin combining a norm study and a lemma43 table.
    Obstruction(Common),
}

#[derive(Args, Default)]
struct Common {
    /// Flat `key = value` file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<String>,
    /// Comma-separated: oscillator, grid.
    #[arg(long)]
    scheme: Option<String>,
    /// Comma-separated ascending matrix dimensions.
    #[arg(long)]
    dims: Option<String>,
    #[arg(long)]
    t: Option<String>,
    /// Comma-separated angles in (π/2, π].
    #[arg(long)]
    alpha: Option<String>,
    /// Time-grid size of the Brownian paths.
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long = "n-list")]
    n_list: Option<String>,
    /// Comma-separated; `2^-12` style accepted.
    #[arg(long = "delta-list")]
    delta_list: Option<String>,
    /// Superchaos profile: w or ws.
    #[arg(long)]
    profile: Option<String>,
    /// Output file; defaults to `$ARVESON_OUT_DIR/<name>.<format>`.
    #[arg(long)]
    out: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Worker thread cap (0 = all cores).
    #[arg(long)]
    threads: Option<String>,
    /// Record wall times in the norm study.
    #[arg(long)]
    timing: bool,
    #[arg(long = "norm-from")]
    norm_from: Option<String>,
    #[arg(long = "lemma43-from")]
    lemma43_from: Option<String>,
}

impl Common {
    fn flags(&self) -> Settings {
        let pairs = [
            ("seed", &self.seed),
            ("scheme", &self.scheme),
            ("dims", &self.dims),
            ("t", &self.t),
            ("alpha", &self.alpha),
            ("m", &self.m),
            ("samples", &self.samples),
            ("n-list", &self.n_list),
            ("delta-list", &self.delta_list),
            ("profile", &self.profile),
            ("out", &self.out),
            ("format", &self.format),
            ("threads", &self.threads),
            ("norm-from", &self.norm_from),
            ("lemma43-from", &self.lemma43_from),
        ];
        let mut s: Settings = pairs
            .into_iter()
            .filter_map(|(k, v)| v.clone().map(|v| (k.to_string(), v)))
            .collect();
        if self.timing {
            s.insert("timing".into(), "true".into());
        }
        s
    }

    fn settings(&self) -> Result<Settings, CliError> {
        let file = match &self.config {
            Some(p) => config::read_config(p)?,
            None => Settings::new(),
        };
        Ok(config::merge(file, self.flags()))
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let (common, run): (&Common, fn(&Settings) -> Result<String, CliError>) = match &cli.command {
        Command::NormStudy(c) => (c, commands::norm_study),
        Command::WeylSuite(c) => (c, commands::weyl_suite),
        Command::WarrenMass(c) => (c, commands::warren_mass),
        Command::Lemma43(c) => (c, commands::lemma43),
        Command::Obstruction(c) => (c, commands::obstruction),
    };
    let settings = common.settings()?;
    let threads: usize = config::Resolved(&settings).get("threads")?;
    arveson_core::configure_threads(threads).map_err(|e| CliError::Validation(e.to_string()))?;
    run(&settings)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            log::debug!("{e:?}");
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
