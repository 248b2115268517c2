//! Seeded Monte Carlo sweeps over transmit power or RF-chain count.
//!
//! Every trial owns a seed derived from `(master_seed, trial)`. The paths of
//! a trial come from stream 0 of that seed and are shared by every swept
//! value and every scheme, so comparisons are paired. Results do not depend
//! on how trials are scheduled across threads.

mod config_file;
mod csv_io;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::baselines::{evaluate, SchemeId, TrialChannels};
use crate::channel::sample_paths;
use crate::config::{dbm_to_watts, SystemConfig};
use crate::error::{Error, Result};

pub use config_file::{load_config, parse_config, KEYS as CONFIG_KEYS};
pub use csv_io::{read_csv, write_csv, write_csv_to, HEADER as CSV_HEADER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepKind {
    /// Transmit power in dBm.
    Power,
    /// Number of RF chains.
    Rf,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::Power => "power",
            SweepKind::Rf => "rf",
        }
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "power" => Ok(SweepKind::Power),
            "rf" => Ok(SweepKind::Rf),
            other => Err(Error::Domain(format!("unknown sweep kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kind: SweepKind,
    /// dBm for power sweeps, RF-chain counts for RF sweeps.
    pub values: Vec<f64>,
    pub schemes: Vec<SchemeId>,
    pub trials: usize,
    pub master_seed: u64,
}

pub const DEFAULT_TRIALS: usize = 200;

/// Transmit power used by RF-chain sweeps, dBm.
pub const RF_SWEEP_POWER_DBM: f64 = 0.0;

impl SweepSpec {
    /// -10..10 dBm in 5 dB steps, every scheme.
    pub fn default_power(_cfg: &SystemConfig<f64>) -> Self {
        Self {
            kind: SweepKind::Power,
            values: vec![-10.0, -5.0, 0.0, 5.0, 10.0],
            schemes: SchemeId::ALL.to_vec(),
            trials: DEFAULT_TRIALS,
            master_seed: 0,
        }
    }

    /// `1..=N` RF chains, every scheme.
    pub fn default_rf(cfg: &SystemConfig<f64>) -> Self {
        Self {
            kind: SweepKind::Rf,
            values: (1..=cfg.n_strips).map(|n| n as f64).collect(),
            ..Self::default_power(cfg)
        }
    }

    pub fn validate(&self, cfg: &SystemConfig<f64>) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Domain("sweep needs at least one value".into()));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("sweep values must be finite".into()));
        }
        if self.values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("sweep values must be strictly increasing".into()));
        }
        if self.trials == 0 {
            return Err(Error::Domain("trials must be at least 1".into()));
        }
        if self.schemes.is_empty() {
            return Err(Error::Domain("no schemes requested".into()));
        }
        if self.kind == SweepKind::Rf {
            for &v in &self.values {
                if v.fract() != 0.0 || v < 1.0 || v > cfg.n_strips as f64 {
                    return Err(Error::Domain(format!(
                        "RF-chain count {v} must be an integer in 1..={}",
                        cfg.n_strips
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One aggregated row: a scheme at a swept value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub scheme: SchemeId,
    pub kind: SweepKind,
    pub swept_value: f64,
    /// bit/s/Hz
    pub mean_se: f64,
    /// Sample standard deviation across trials; 0 for a single trial.
    pub std_se: f64,
    pub trials: usize,
    pub master_seed: u64,
}

impl SweepResult {
    pub fn std_error(&self) -> f64 {
        self.std_se / (self.trials as f64).sqrt()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` under `master_seed`.
pub fn trial_seed(master_seed: u64, trial: usize) -> u64 {
    splitmix64(master_seed ^ splitmix64(trial as u64))
}

/// Independent random streams of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Paths = 0,
    /// Initial weights of the sub-wavelength DMA schemes (and the random subset).
    Dma = 1,
    Incompact = 2,
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Configuration at one swept value.
pub fn config_at(cfg: &SystemConfig<f64>, kind: SweepKind, value: f64) -> SystemConfig<f64> {
    match kind {
        SweepKind::Power => cfg.with_tx_power(dbm_to_watts(value)),
        SweepKind::Rf => cfg
            .with_n_rf(value as usize)
            .with_tx_power(dbm_to_watts(RF_SWEEP_POWER_DBM)),
    }
}

fn scheme_stream(scheme: SchemeId) -> Stream {
    match scheme {
        SchemeId::DmaIncompact => Stream::Incompact,
        _ => Stream::Dma,
    }
}

/// Spectral efficiency of every `(value, scheme)` pair on one trial, in
/// value-major order.
pub fn run_trial(cfg: &SystemConfig<f64>, spec: &SweepSpec, trial: usize) -> Result<Vec<f64>> {
    let seed = trial_seed(spec.master_seed, trial);
    let paths = sample_paths(cfg, &mut stream_rng(seed, Stream::Paths));
    let channels = TrialChannels::new(paths, cfg);
    let mut out = Vec::with_capacity(spec.values.len() * spec.schemes.len());
    for &value in &spec.values {
        let at = config_at(cfg, spec.kind, value);
        for &scheme in &spec.schemes {
            let mut rng = stream_rng(seed, scheme_stream(scheme));
            let se = evaluate(scheme, &channels, &at, &mut rng).map_err(|e| Error::Trial {
                scheme: scheme.name().to_string(),
                value,
                trial,
                source: Box::new(e),
            })?;
            out.push(se);
        }
    }
    Ok(out)
}

/// Runs the sweep. Rows are ordered by scheme (as requested) then value.
pub fn run_sweep(cfg: &SystemConfig<f64>, spec: &SweepSpec) -> Result<Vec<SweepResult>> {
    cfg.validate()?;
    spec.validate(cfg)?;
    let per_trial: Vec<Vec<f64>> = (0..spec.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, spec, t))
        .collect::<Result<_>>()?;

    let n_schemes = spec.schemes.len();
    let mut rows = Vec::with_capacity(n_schemes * spec.values.len());
    for (si, &scheme) in spec.schemes.iter().enumerate() {
        for (vi, &value) in spec.values.iter().enumerate() {
            let k = vi * n_schemes + si;
            let samples: Vec<f64> = per_trial.iter().map(|t| t[k]).collect();
            let (mean_se, std_se) = mean_std(&samples);
            rows.push(SweepResult {
                scheme,
                kind: spec.kind,
                swept_value: value,
                mean_se,
                std_se,
                trials: spec.trials,
                master_seed: spec.master_seed,
            });
        }
    }
    Ok(rows)
}

/// Mean and sample standard deviation, summed in index order.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
