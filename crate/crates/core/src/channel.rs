//! Geometric mmWave channel, DMA waveguide response and the effective
//! end-to-end channel seen through the microstrips.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::config::SystemConfig;
use crate::error::{check_len, Error, Result};
use crate::scalar::Real;

/// Propagation paths: complex gains and angles of departure in `[0, π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSet<T> {
    gains: Vec<Complex<T>>,
    aods: Vec<T>,
}

impl<T: Real> PathSet<T> {
    pub fn new(gains: Vec<Complex<T>>, aods: Vec<T>) -> Result<Self> {
        check_len(gains.len(), aods.len())?;
        if gains.is_empty() {
            return Err(Error::Domain("a path set needs at least one path".into()));
        }
        for &theta in &aods {
            check_aod(theta)?;
        }
        Ok(Self { gains, aods })
    }

    pub fn gains(&self) -> &[Complex<T>] {
        &self.gains
    }

    pub fn aods(&self) -> &[T] {
        &self.aods
    }

    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains.is_empty()
    }

    /// Same paths in another scalar precision.
    pub fn cast<U: Real>(&self) -> PathSet<U> {
        PathSet {
            gains: self
                .gains
                .iter()
                .map(|g| Complex::new(U::lit(g.re.as_f64()), U::lit(g.im.as_f64())))
                .collect(),
            aods: self.aods.iter().map(|a| U::lit(a.as_f64())).collect(),
        }
    }
}

fn check_aod<T: Real>(theta: T) -> Result<()> {
    if theta >= T::zero() && theta < T::PI() {
        Ok(())
    } else {
        Err(Error::Domain(format!("angle of departure {theta} outside [0, π)")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVector<T> {
    pub aod: T,
    /// Spatial frequency of every element, m.
    pub spatial_freqs: Vec<T>,
    /// Unit-modulus array response, microstrip-major.
    pub entries: Vec<Complex<T>>,
}

/// Array response toward `theta`.
///
/// Element `m` of microstrip `n` has spatial frequency
/// `m d_e sin θ + n d_s cos θ` and response `exp(-j 2π Ω / λ)`.
pub fn steering_vector<T: Real>(theta: T, cfg: &SystemConfig<T>) -> Result<SteeringVector<T>> {
    check_aod(theta)?;
    let k = T::TAU() / cfg.wavelength();
    let (sin, cos) = theta.sin_cos();
    let mut spatial_freqs = Vec::with_capacity(cfg.n_elements());
    for n in 0..cfg.n_strips {
        let strip = T::lit(n as f64) * cfg.d_s * cos;
        for m in 0..cfg.m_elements {
            spatial_freqs.push(T::lit(m as f64) * cfg.d_e * sin + strip);
        }
    }
    let entries = spatial_freqs
        .iter()
        .map(|&omega| Complex::from_polar(T::one(), -k * omega))
        .collect();
    Ok(SteeringVector {
        aod: theta,
        spatial_freqs,
        entries,
    })
}

/// Draws `L` paths with i.i.d. `CN(0, 1/L)` gains and AoDs uniform on `[0, π)`.
pub fn sample_paths<T: Real, R: Rng + ?Sized>(cfg: &SystemConfig<T>, rng: &mut R) -> PathSet<T> {
    let l = cfg.n_paths;
    let scale = (0.5 / l as f64).sqrt();
    let mut gains = Vec::with_capacity(l);
    let mut aods = Vec::with_capacity(l);
    for _ in 0..l {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        gains.push(Complex::new(T::lit(re * scale), T::lit(im * scale)));
        // Narrowing to f32 can round a value just below π up to π.
        let theta = T::lit(rng.gen::<f64>() * std::f64::consts::PI);
        aods.push(if theta >= T::PI() { T::zero() } else { theta });
    }
    PathSet { gains, aods }
}

/// Intrinsic (over-the-air) channel `Σ_l η_l a(θ_l)`.
pub fn intrinsic_channel<T: Real>(paths: &PathSet<T>, cfg: &SystemConfig<T>) -> Vec<Complex<T>> {
    let mut h = vec![Complex::new(T::zero(), T::zero()); cfg.n_elements()];
    for (&eta, &theta) in paths.gains.iter().zip(&paths.aods) {
        let a = steering_vector(theta, cfg).expect("path set holds validated angles");
        for (hu, au) in h.iter_mut().zip(&a.entries) {
            *hu = *hu + eta * au;
        }
    }
    h
}

/// Propagation inside the microstrips: `exp(-ρ (β + jα))` with
/// `ρ = (m + 1) d_e` measured from the feed port, identical on every strip.
pub fn waveguide_response<T: Real>(cfg: &SystemConfig<T>) -> Vec<Complex<T>> {
    let per_strip: Vec<Complex<T>> = (0..cfg.m_elements)
        .map(|m| {
            let rho = T::lit((m + 1) as f64) * cfg.d_e;
            Complex::from_polar((-rho * cfg.wg_attenuation).exp(), -rho * cfg.wg_wavenumber)
        })
        .collect();
    per_strip
        .iter()
        .copied()
        .cycle()
        .take(cfg.n_elements())
        .collect()
}

/// Elementwise product of the intrinsic channel and the waveguide response.
pub fn effective_channel<T: Real>(
    intrinsic: &[Complex<T>],
    waveguide: &[Complex<T>],
) -> Result<Vec<Complex<T>>> {
    check_len(intrinsic.len(), waveguide.len())?;
    Ok(intrinsic
        .iter()
        .zip(waveguide)
        .map(|(h, f)| h * f)
        .collect())
}

/// One channel draw on a given DMA geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization<T> {
    pub paths: PathSet<T>,
    pub intrinsic: Vec<Complex<T>>,
    pub waveguide: Vec<Complex<T>>,
    pub effective: Vec<Complex<T>>,
    m_elements: usize,
}

impl<T: Real> ChannelRealization<T> {
    pub fn new(paths: PathSet<T>, cfg: &SystemConfig<T>) -> Self {
        let intrinsic = intrinsic_channel(&paths, cfg);
        let waveguide = waveguide_response(cfg);
        let effective = effective_channel(&intrinsic, &waveguide).expect("lengths agree");
        Self {
            paths,
            intrinsic,
            waveguide,
            effective,
            m_elements: cfg.m_elements,
        }
    }

    /// Builds a realization directly from an effective channel, with a
    /// unit waveguide response. Mostly useful for hand-made instances.
    pub fn from_effective(effective: Vec<Complex<T>>, m_elements: usize) -> Result<Self> {
        if m_elements == 0 || effective.is_empty() || !effective.len().is_multiple_of(m_elements) {
            return Err(Error::Dimension {
                expected: m_elements.max(1),
                got: effective.len(),
            });
        }
        let ones = vec![Complex::new(T::one(), T::zero()); effective.len()];
        Ok(Self {
            paths: PathSet {
                gains: Vec::new(),
                aods: Vec::new(),
            },
            intrinsic: effective.clone(),
            waveguide: ones,
            effective,
            m_elements,
        })
    }

    pub fn n_strips(&self) -> usize {
        self.effective.len() / self.m_elements
    }

    pub fn m_elements(&self) -> usize {
        self.m_elements
    }

    /// Effective channel of microstrip `n`.
    pub fn strip(&self, n: usize) -> &[Complex<T>] {
        &self.effective[n * self.m_elements..(n + 1) * self.m_elements]
    }

    pub fn intrinsic_strip(&self, n: usize) -> &[Complex<T>] {
        &self.intrinsic[n * self.m_elements..(n + 1) * self.m_elements]
    }
}
