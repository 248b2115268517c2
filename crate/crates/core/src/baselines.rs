//! Benchmark schemes the proposed design is compared against.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::seq::index::sample;
use rand::Rng;

use crate::channel::{intrinsic_channel, ChannelRealization, PathSet};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::optimizer::{optimize, optimize_from, spectral_efficiency, Selection};
use crate::scalar::Real;
use crate::weights::random_weights;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    /// Gain-ranked microstrip selection with alternating MRT / coordinate ascent.
    Proposed,
    /// One RF chain per antenna on the half-wavelength array, MRT.
    FullyDigital,
    /// DMA with one RF chain per microstrip.
    DmaFullRf,
    /// Proposed design on a DMA with λ/2 element spacing.
    DmaIncompact,
    /// Uniformly random microstrip subset, then MRT / coordinate ascent.
    RandomSelection,
    /// Partially connected phase-shifter hybrid on the half-wavelength array.
    PsHybridPartial,
}

impl SchemeId {
    pub const ALL: [SchemeId; 6] = [
        SchemeId::Proposed,
        SchemeId::FullyDigital,
        SchemeId::DmaFullRf,
        SchemeId::DmaIncompact,
        SchemeId::RandomSelection,
        SchemeId::PsHybridPartial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Proposed => "proposed",
            SchemeId::FullyDigital => "fully_digital",
            SchemeId::DmaFullRf => "dma_full_rf",
            SchemeId::DmaIncompact => "dma_incompact",
            SchemeId::RandomSelection => "random_selection",
            SchemeId::PsHybridPartial => "ps_hybrid_partial",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        SchemeId::ALL
            .into_iter()
            .find(|id| id.name() == key)
            .ok_or_else(|| Error::Domain(format!("unknown scheme `{s}`")))
    }
}

/// MRT with one RF chain per antenna: `log2(1 + P ||h||^2 / σ²)`.
pub fn fully_digital<T: Real>(intrinsic: &[Complex<T>], power: T, noise_var: T) -> Result<T> {
    if noise_var.is_nan() || noise_var <= T::zero() {
        return Err(Error::Domain(format!("noise variance must be positive, got {noise_var}")));
    }
    let energy: T = intrinsic.iter().map(|h| h.norm_sqr()).sum();
    spectral_efficiency(power * energy / noise_var)
}

/// The proposed design; returns spectral efficiency only.
pub fn proposed<T: Real, R: Rng + ?Sized>(
    h: &ChannelRealization<T>,
    cfg: &SystemConfig<T>,
    rng: &mut R,
) -> Result<T> {
    Ok(optimize(h, cfg, rng)?.0.spectral_efficiency)
}

/// Every microstrip gets its own RF chain.
pub fn dma_full_rf<T: Real, R: Rng + ?Sized>(
    h: &ChannelRealization<T>,
    cfg: &SystemConfig<T>,
    rng: &mut R,
) -> Result<T> {
    proposed(h, &cfg.with_n_rf(cfg.n_strips), rng)
}

/// Proposed design on a λ/2-spaced DMA; `h` and `cfg` must describe that
/// geometry (see [`SystemConfig::incompact`]).
pub fn dma_incompact<T: Real, R: Rng + ?Sized>(
    h: &ChannelRealization<T>,
    cfg: &SystemConfig<T>,
    rng: &mut R,
) -> Result<T> {
    proposed(h, cfg, rng)
}

/// Draws a uniformly random set of `n_rf` microstrips, then runs the
/// alternating loop with that set frozen.
pub fn random_selection<T: Real, R: Rng + ?Sized>(
    h: &ChannelRealization<T>,
    cfg: &SystemConfig<T>,
    rng: &mut R,
) -> Result<T> {
    cfg.validate()?;
    // Weights first, so with the same rng state this starts where
    // `proposed` and `dma_full_rf` start.
    let init = random_weights(cfg, rng);
    let mut set = sample(rng, cfg.n_strips, cfg.n_rf).into_vec();
    set.sort_unstable();
    Ok(optimize_from(h, cfg, init, &Selection::Fixed(set))?.0.spectral_efficiency)
}

/// Contiguous partition of `len` antennas into `parts` near-equal groups;
/// the first `len % parts` groups hold one extra antenna.
pub fn contiguous_partition(len: usize, parts: usize) -> Result<Vec<std::ops::Range<usize>>> {
    if parts == 0 || parts > len {
        return Err(Error::Domain(format!(
            "cannot split {len} antennas into {parts} subarrays"
        )));
    }
    let base = len / parts;
    let extra = len % parts;
    let mut start = 0;
    Ok((0..parts)
        .map(|k| {
            let size = base + usize::from(k < extra);
            let r = start..start + size;
            start += size;
            r
        })
        .collect())
}

/// Effective channel of every subarray after phase-conjugate analog
/// weights `e^{j∠h_u} / sqrt(|S_k|)`: `Σ_{u∈S_k} |h_u| / sqrt(|S_k|)`.
///
/// The `1/sqrt(|S_k|)` keeps the radiated power equal to the digital power.
pub fn ps_subarray_channels<T: Real>(intrinsic: &[Complex<T>], n_rf: usize) -> Result<Vec<T>> {
    Ok(contiguous_partition(intrinsic.len(), n_rf)?
        .into_iter()
        .map(|r| {
            let size = T::lit(r.len() as f64);
            intrinsic[r].iter().map(|h| h.norm()).sum::<T>() / size.sqrt()
        })
        .collect())
}

/// Partially connected phase-shifter hybrid: phase-conjugate analog stage
/// per subarray, digital MRT over the `n_rf` subarrays with total power P.
pub fn ps_hybrid_partial<T: Real>(intrinsic: &[Complex<T>], cfg: &SystemConfig<T>, n_rf: usize) -> Result<T> {
    if cfg.noise_var.is_nan() || cfg.noise_var <= T::zero() {
        return Err(Error::Domain("noise variance must be positive".into()));
    }
    let gain: T = ps_subarray_channels(intrinsic, n_rf)?
        .into_iter()
        .map(|c| c * c)
        .sum();
    spectral_efficiency(cfg.tx_power * gain / cfg.noise_var)
}

/// Channels of one trial on every geometry, all built from the same paths.
#[derive(Debug, Clone)]
pub struct TrialChannels<T> {
    /// Sub-wavelength DMA (proposed, full-RF, random selection).
    pub dma: ChannelRealization<T>,
    /// λ/2 DMA, including its waveguide response.
    pub incompact: ChannelRealization<T>,
    /// Over-the-air channel of the λ/2 conventional array.
    pub half_wave: Vec<Complex<T>>,
}

impl<T: Real> TrialChannels<T> {
    pub fn new(paths: PathSet<T>, cfg: &SystemConfig<T>) -> Self {
        let half_wave = intrinsic_channel(&paths, &cfg.half_wavelength_array());
        let incompact = ChannelRealization::new(paths.clone(), &cfg.incompact());
        let dma = ChannelRealization::new(paths, cfg);
        Self {
            dma,
            incompact,
            half_wave,
        }
    }
}

/// Evaluates one scheme on one trial. `rng` drives the scheme's own
/// randomness (initial weights, random subset).
pub fn evaluate<T: Real, R: Rng + ?Sized>(
    scheme: SchemeId,
    channels: &TrialChannels<T>,
    cfg: &SystemConfig<T>,
    rng: &mut R,
) -> Result<T> {
    match scheme {
        SchemeId::Proposed => proposed(&channels.dma, cfg, rng),
        SchemeId::FullyDigital => fully_digital(&channels.half_wave, cfg.tx_power, cfg.noise_var),
        SchemeId::DmaFullRf => dma_full_rf(&channels.dma, cfg, rng),
        SchemeId::DmaIncompact => dma_incompact(&channels.incompact, &cfg.incompact(), rng),
        SchemeId::RandomSelection => random_selection(&channels.dma, cfg, rng),
        SchemeId::PsHybridPartial => ps_hybrid_partial(&channels.half_wave, cfg, cfg.n_rf),
    }
}
