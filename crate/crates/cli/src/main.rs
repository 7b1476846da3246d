use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use relaysec::{emit, run_sweep, Format, SweepSpec};

mod config;

use config::{ConfigFile, Mode};

#[derive(Debug, Parser)]
#[command(
    name = "relaysec",
    version,
    about = "Intercept probability of relay selection under eavesdropping"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form intercept probability at one parameter point.
    Analytic(PointArgs),
    /// Closed form plus Monte-Carlo estimate at one parameter point.
    Simulate(PointArgs),
    /// Sweep MER or relay count and emit one row per point and scheme.
    Sweep(SweepArgs),
}

#[derive(Debug, Args, Default)]
struct PointArgs {
    /// Schemes to evaluate: direct, maxmin, proposed (comma separated or repeated).
    #[arg(long = "scheme", value_delimiter = ',')]
    schemes: Vec<String>,
    /// Main-to-eavesdropper ratio in dB.
    #[arg(long, allow_negative_numbers = true)]
    mer_db: Option<f64>,
    /// σ_si² / σ_sd².
    #[arg(long)]
    alpha_si: Option<f64>,
    /// σ_id² / σ_sd².
    #[arg(long)]
    alpha_id: Option<f64>,
    /// σ_ie² / σ_se².
    #[arg(long)]
    alpha_ie: Option<f64>,
    /// Number of relays.
    #[arg(long = "relays")]
    relay_count: Option<usize>,
    /// Total transmit power.
    #[arg(long)]
    power: Option<f64>,
    /// Receiver noise variance.
    #[arg(long)]
    noise_var: Option<f64>,
    /// Monte-Carlo trials per point (0 = closed form only).
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Confidence level of the Wilson interval.
    #[arg(long = "confidence")]
    confidence_level: Option<f64>,
    /// Output format.
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Key/value config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads (defaults to all cores). Output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args, Default)]
struct SweepArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Swept variable: mer_db or relay_count.
    #[arg(long = "var")]
    variable: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    to: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
}

impl PointArgs {
    fn overrides(&self) -> ConfigFile {
        ConfigFile {
            schemes: (!self.schemes.is_empty()).then(|| self.schemes.clone().into()),
            mer_db: self.mer_db,
            alpha_si: self.alpha_si,
            alpha_id: self.alpha_id,
            alpha_ie: self.alpha_ie,
            relay_count: self.relay_count,
            power: self.power,
            noise_var: self.noise_var,
            trials: self.trials,
            seed: self.seed,
            confidence_level: self.confidence_level,
            ..Default::default()
        }
    }
}

fn resolve(mode: Mode, point: &PointArgs, sweep: Option<&SweepArgs>) -> Result<SweepSpec> {
    let file = match &point.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let mut flags = point.overrides();
    if let Some(sweep) = sweep {
        flags.variable = sweep.variable.clone();
        flags.from = sweep.from;
        flags.to = sweep.to;
        flags.step = sweep.step;
    }
    file.merged_with(flags).into_spec(mode)
}

fn run(cli: Cli) -> Result<()> {
    let (mode, point, sweep) = match &cli.command {
        Command::Analytic(p) => (Mode::Analytic, p, None),
        Command::Simulate(p) => (Mode::Simulate, p, None),
        Command::Sweep(s) => (Mode::Sweep, &s.point, Some(s)),
    };
    let spec = resolve(mode, point, sweep)?;
    let format: Format = point.format.as_deref().unwrap_or("csv").parse()?;

    let rows = match point.threads {
        Some(0) => bail!("--threads must be at least 1"),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("building worker pool")?
            .install(|| run_sweep(&spec))?,
        None => run_sweep(&spec)?,
    };

    match &point.out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut out = BufWriter::new(file);
            emit(&rows, format, &mut out).with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            emit(&rows, format, &mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("relaysec: error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
