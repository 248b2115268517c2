//! Physical and algorithmic parameters of one DMA downlink link.

use crate::error::{Error, Result};
use crate::scalar::{Real, SPEED_OF_LIGHT};

/// Converts a power level in dBm to watts.
pub fn dbm_to_watts<T: Real>(dbm: T) -> T {
    T::lit(10.0).powf((dbm - T::lit(30.0)) / T::lit(10.0))
}

pub fn watts_to_dbm<T: Real>(watts: T) -> T {
    T::lit(10.0) * watts.log10() + T::lit(30.0)
}

/// Everything needed to build a channel and run the optimizer.
///
/// Vectors over the array use microstrip-major order: element `m` of
/// microstrip `n` sits at flat index `n * m_elements + m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig<T> {
    /// Carrier frequency, Hz.
    pub carrier_frequency: T,
    /// Number of microstrips (rows).
    pub n_strips: usize,
    /// Radiating elements per microstrip.
    pub m_elements: usize,
    /// Element spacing along a microstrip, m.
    pub d_e: T,
    /// Spacing between microstrips, m.
    pub d_s: T,
    /// Number of propagation paths.
    pub n_paths: usize,
    /// Number of RF chains, i.e. the maximum number of active microstrips.
    pub n_rf: usize,
    /// Total transmit power, W.
    pub tx_power: T,
    /// Receiver noise variance, W.
    pub noise_var: T,
    /// Waveguide attenuation, 1/m.
    pub wg_attenuation: T,
    /// Guided wavenumber, 1/m.
    pub wg_wavenumber: T,
    /// Outer-loop stop threshold on the absolute SNR increase.
    pub convergence_eps: T,
    pub max_outer_iters: usize,
    /// Inner coordinate-ascent stop threshold on the objective increase.
    pub inner_eps: T,
    /// Inner coordinate ascent also keeps sweeping until no phase moves by
    /// more than this many radians.
    pub phase_tol: T,
    pub max_inner_sweeps: usize,
}

impl<T: Real> Default for SystemConfig<T> {
    /// 28 GHz DMA with 10 microstrips of 30 elements at λ/5, strips λ/2
    /// apart, 12 paths, 3 RF chains, 0 dBm transmit power and 0 dBm noise.
    fn default() -> Self {
        let carrier = T::lit(28e9);
        let lambda = T::lit(SPEED_OF_LIGHT) / carrier;
        Self {
            carrier_frequency: carrier,
            n_strips: 10,
            m_elements: 30,
            d_e: lambda / T::lit(5.0),
            d_s: lambda / T::lit(2.0),
            n_paths: 12,
            n_rf: 3,
            tx_power: T::lit(1e-3),
            noise_var: T::lit(1e-3),
            wg_attenuation: T::lit(0.6),
            wg_wavenumber: T::lit(827.67),
            convergence_eps: T::lit(1e-4),
            max_outer_iters: 100,
            inner_eps: T::lit(1e-6),
            phase_tol: T::lit(1e-9),
            max_inner_sweeps: 200,
        }
    }
}

impl<T: Real> SystemConfig<T> {
    pub fn wavelength(&self) -> T {
        T::lit(SPEED_OF_LIGHT) / self.carrier_frequency
    }

    /// Total number of radiating elements `U = N * M`.
    pub fn n_elements(&self) -> usize {
        self.n_strips * self.m_elements
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("carrier_frequency", self.carrier_frequency)?;
        positive("d_e", self.d_e)?;
        positive("d_s", self.d_s)?;
        positive("tx_power", self.tx_power)?;
        positive("noise_var", self.noise_var)?;
        positive("convergence_eps", self.convergence_eps)?;
        if self.n_strips == 0 || self.m_elements == 0 || self.n_paths == 0 {
            return Err(Error::Config(
                "n_strips, m_elements and n_paths must be at least 1".into(),
            ));
        }
        if self.n_rf == 0 || self.n_rf > self.n_strips {
            return Err(Error::Config(format!(
                "n_rf must lie in 1..={}, got {}",
                self.n_strips, self.n_rf
            )));
        }
        if self.max_outer_iters == 0 || self.max_inner_sweeps == 0 {
            return Err(Error::Config("iteration caps must be at least 1".into()));
        }
        for (name, v) in [
            ("wg_attenuation", self.wg_attenuation),
            ("wg_wavenumber", self.wg_wavenumber),
            ("inner_eps", self.inner_eps),
            ("phase_tol", self.phase_tol),
        ] {
            if !(v >= T::zero() && v.is_finite()) {
                return Err(Error::Config(format!(
                    "{name} must be non-negative and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn with_n_rf(&self, n_rf: usize) -> Self {
        Self { n_rf, ..self.clone() }
    }

    pub fn with_tx_power(&self, tx_power: T) -> Self {
        Self { tx_power, ..self.clone() }
    }

    /// DMA with the same strip count whose elements are spread at λ/2,
    /// giving a square `N x N` array (10 x 10 by default).
    pub fn incompact(&self) -> Self {
        let half = self.wavelength() / T::lit(2.0);
        Self {
            m_elements: self.n_strips,
            d_e: half,
            d_s: half,
            ..self.clone()
        }
    }

    /// Conventional half-wavelength planar array used by the fully digital
    /// and phase-shifter baselines. Same element grid as [`Self::incompact`];
    /// those schemes ignore the waveguide constants.
    pub fn half_wavelength_array(&self) -> Self {
        self.incompact()
    }
}
