use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use jrc_core::harness::{
    emit_beampattern, emit_sweep, run_beampattern_spec, run_sweep, BeampatternSpec, Format, RawConfig, SweepSpec,
};
use jrc_core::{Error, Result};

/// Hybrid-beamforming JRC experiment runner.
#[derive(Parser, Debug)]
#[command(name = "jrc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monte-Carlo sweep over SNR, antenna count or rho.
    Sweep(CommonArgs),
    /// Radar beampattern for fixed targets.
    Beampattern(CommonArgs),
}

#[derive(clap::Args, Debug)]
struct CommonArgs {
    /// Flat key = value configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config seed and JRC_SEED.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; standard output when neither this nor `output` is set.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OutputFormat {
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

fn resolve_seed(cli: Option<u64>, config: u64) -> Result<u64> {
    if let Some(seed) = cli {
        return Ok(seed);
    }
    match std::env::var("JRC_SEED") {
        Ok(raw) => raw.trim().parse().map_err(|_| Error::Config {
            key: "JRC_SEED".into(),
            message: format!("cannot parse `{raw}` as a seed"),
        }),
        Err(_) => Ok(config),
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Sweep(args) => {
            let raw = RawConfig::load(&args.config)?;
            let mut spec = SweepSpec::from_config(&raw)?;
            spec.scenario.seed = resolve_seed(args.seed, spec.scenario.seed)?;
            if args.jobs == 0 {
                return Err(Error::Config {
                    key: "jobs".into(),
                    message: "must be at least 1".into(),
                });
            }
            let result = run_sweep(&spec, args.jobs)?;
            let path = args.output.or(spec.output_path);
            emit_sweep(&result, path.as_deref(), args.format.into())
        }
        Command::Beampattern(args) => {
            let raw = RawConfig::load(&args.config)?;
            let mut spec = BeampatternSpec::from_config(&raw)?;
            spec.scenario.seed = resolve_seed(args.seed, spec.scenario.seed)?;
            let pattern = run_beampattern_spec(&spec)?;
            let path = args.output.or(spec.output_path);
            emit_beampattern(&pattern, path.as_deref(), args.format.into())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage_error = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage_error { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
