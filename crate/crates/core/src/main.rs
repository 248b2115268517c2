use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dmabf::baselines::SchemeId;
use dmabf::harness::{load_config, run_sweep, write_csv, write_csv_to, SweepKind, SweepSpec};
use dmabf::{Error, SystemConfig};

#[derive(Parser)]
#[command(name = "dmabf", version, about = "Monte Carlo sweeps for DMA microstrip selection and beamforming")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral efficiency versus transmit power (dBm).
    PowerSweep(SweepArgs),
    /// Spectral efficiency versus number of RF chains, at 0 dBm.
    RfSweep(SweepArgs),
    /// Every requested scheme at one transmit power (first of --values, default 0 dBm).
    Single(SweepArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// key = value configuration file; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated scheme names, e.g. proposed,dma_full_rf.
    #[arg(long, value_delimiter = ',')]
    schemes: Option<Vec<String>>,
    /// Comma-separated swept values (dBm or RF-chain counts).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    values: Option<Vec<f64>>,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn build(kind: SweepKind, single: bool, args: &SweepArgs) -> Result<(SystemConfig<f64>, SweepSpec), Error> {
    let (cfg, mut spec) = match &args.config {
        Some(path) => load_config(path)?,
        None => {
            let cfg = SystemConfig::default();
            let spec = SweepSpec::default_power(&cfg);
            (cfg, spec)
        }
    };
    if kind == SweepKind::Rf {
        spec = SweepSpec { master_seed: spec.master_seed, ..SweepSpec::default_rf(&cfg) };
    }
    if let Some(values) = &args.values {
        spec.values = values.clone();
    }
    if single {
        spec.values = vec![spec.values.first().copied().filter(|_| args.values.is_some()).unwrap_or(0.0)];
        spec.trials = 1;
    }
    if let Some(trials) = args.trials {
        spec.trials = trials;
    }
    if let Some(seed) = args.seed {
        spec.master_seed = seed;
    }
    if let Some(names) = &args.schemes {
        spec.schemes = names
            .iter()
            .map(|s| s.parse::<SchemeId>())
            .collect::<Result<_, _>>()?;
    }
    Ok((cfg, spec))
}

fn run(cli: Cli) -> Result<(), Error> {
    let (kind, single, args) = match &cli.command {
        Command::PowerSweep(a) => (SweepKind::Power, false, a),
        Command::RfSweep(a) => (SweepKind::Rf, false, a),
        Command::Single(a) => (SweepKind::Power, true, a),
    };
    let (cfg, spec) = build(kind, single, args)?;
    let rows = run_sweep(&cfg, &spec)?;
    if single {
        for r in &rows {
            eprintln!("{:<18} {:>8.3} dBm  {:>10.6} bit/s/Hz", r.scheme.name(), r.swept_value, r.mean_se);
        }
    }
    match &args.out {
        Some(path) => write_csv(&rows, path),
        None => write_csv_to(&rows, std::io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
