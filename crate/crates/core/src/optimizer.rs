//! Joint microstrip selection, digital MRT and Lorentzian weight design.
//!
//! The `U x U` diagonal weight matrix is never built: every quantity is
//! expressed through the per-strip scalars `c_n = h_n^H g_n`, so the
//! received amplitude is `Σ_n c_n w_n`.

use num_complex::Complex;
use rand::Rng;

use crate::channel::ChannelRealization;
use crate::config::SystemConfig;
use crate::error::{check_len, Error, Result};
use crate::scalar::Real;
use crate::weights::{random_weights, strip_inner, DmaWeights};

#[derive(Debug, Clone, PartialEq)]
pub struct BeamformingSolution<T> {
    /// Active microstrips, ascending.
    pub active_set: Vec<usize>,
    /// Digital weights over all `N` microstrips; zero off the active set.
    pub w: Vec<Complex<T>>,
    pub weights: DmaWeights<T>,
    pub snr: T,
    /// bit/s/Hz
    pub spectral_efficiency: T,
    pub outer_iterations: usize,
}

/// SNR after the selection + MRT step of every outer iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerTrace<T> {
    pub snr_per_iteration: Vec<T>,
}

impl<T: Real> OptimizerTrace<T> {
    pub fn is_non_decreasing(&self, slack: T) -> bool {
        self.snr_per_iteration
            .windows(2)
            .all(|w| w[1] >= w[0] - slack)
    }
}

/// How the active set is chosen in each outer iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selection {
    /// The `n_rf` strips with the largest `|c_n|^2`.
    GainRanked,
    /// A fixed set, e.g. drawn at random by a baseline.
    Fixed(Vec<usize>),
}

fn check_dims<T: Real>(h: &ChannelRealization<T>, weights: &DmaWeights<T>) -> Result<()> {
    check_len(h.n_strips(), weights.n_strips())?;
    check_len(h.m_elements(), weights.m_elements())
}

fn strip_channels<T: Real>(h: &ChannelRealization<T>, weights: &DmaWeights<T>) -> Vec<Complex<T>> {
    (0..h.n_strips())
        .map(|n| strip_inner(h.strip(n), weights.strip_weights(n)))
        .collect()
}

/// `|h_n^H g_n|^2` for every microstrip.
pub fn strip_gains<T: Real>(h: &ChannelRealization<T>, weights: &DmaWeights<T>) -> Result<Vec<T>> {
    check_dims(h, weights)?;
    Ok(strip_channels(h, weights)
        .into_iter()
        .map(|c| c.norm_sqr())
        .collect())
}

/// Indices of the `n_rf` largest gains, ascending. Ties go to the lower index.
pub fn select_strips<T: Real>(gains: &[T], n_rf: usize) -> Result<Vec<usize>> {
    if n_rf > gains.len() {
        return Err(Error::Domain(format!(
            "cannot activate {n_rf} of {} microstrips",
            gains.len()
        )));
    }
    let mut order: Vec<usize> = (0..gains.len()).collect();
    order.sort_by(|&a, &b| {
        gains[b]
            .partial_cmp(&gains[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut chosen = order[..n_rf].to_vec();
    chosen.sort_unstable();
    Ok(chosen)
}

/// Power-`P` maximum ratio transmission over the active strips.
///
/// Returns one weight per entry of `active`, in the same order.
pub fn mrt_beamformer<T: Real>(
    h: &ChannelRealization<T>,
    weights: &DmaWeights<T>,
    active: &[usize],
    power: T,
) -> Result<Vec<Complex<T>>> {
    check_dims(h, weights)?;
    check_indices(active, h.n_strips())?;
    let c: Vec<Complex<T>> = active
        .iter()
        .map(|&n| strip_inner(h.strip(n), weights.strip_weights(n)))
        .collect();
    let norm = c.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt();
    if norm == T::zero() {
        return Err(Error::DegenerateChannel(
            "effective channel is zero on every active microstrip".into(),
        ));
    }
    let scale = power.sqrt() / norm;
    Ok(c.into_iter().map(|x| x.conj() * scale).collect())
}

fn check_indices(active: &[usize], n: usize) -> Result<()> {
    match active.iter().find(|&&i| i >= n) {
        Some(&i) => Err(Error::Domain(format!("microstrip index {i} out of range 0..{n}"))),
        None => Ok(()),
    }
}

/// Scatters the reduced digital vector onto all `n` microstrips.
pub fn embed_w<T: Real>(w_bar: &[Complex<T>], active: &[usize], n: usize) -> Result<Vec<Complex<T>>> {
    check_len(active.len(), w_bar.len())?;
    check_indices(active, n)?;
    let mut w = vec![Complex::new(T::zero(), T::zero()); n];
    for (&i, &x) in active.iter().zip(w_bar) {
        w[i] = x;
    }
    Ok(w)
}

/// Received SNR `|Σ_n c_n w_n|^2 / σ²`.
pub fn snr<T: Real>(
    h: &ChannelRealization<T>,
    weights: &DmaWeights<T>,
    w: &[Complex<T>],
    noise_var: T,
) -> Result<T> {
    if noise_var.is_nan() || noise_var <= T::zero() {
        return Err(Error::Domain(format!("noise variance must be positive, got {noise_var}")));
    }
    check_dims(h, weights)?;
    check_len(h.n_strips(), w.len())?;
    let amplitude = strip_channels(h, weights)
        .into_iter()
        .zip(w)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (c, w)| acc + c * w);
    Ok(amplitude.norm_sqr() / noise_var)
}

/// `log2(1 + snr)` in bit/s/Hz.
pub fn spectral_efficiency<T: Real>(snr: T) -> Result<T> {
    if snr < T::zero() || snr.is_nan() {
        return Err(Error::Domain(format!("SNR must be non-negative, got {snr}")));
    }
    Ok(snr.ln_1p() / T::LN_2())
}

/// Everything in strip `h_n^H (b + j)` except element `m`'s own `b` term:
/// `Σ_{m'≠m} h*_{m'} b_{m'} + j Σ_{m'} h*_{m'}`.
pub fn tilde_h<T: Real>(h_strip: &[Complex<T>], b_strip: &[Complex<T>], m: usize) -> Complex<T> {
    let j = Complex::new(T::zero(), T::one());
    h_strip
        .iter()
        .zip(b_strip)
        .enumerate()
        .fold(Complex::new(T::zero(), T::zero()), |acc, (k, (h, b))| {
            let bias = h.conj() * j;
            if k == m {
                acc + bias
            } else {
                acc + h.conj() * b + bias
            }
        })
}

/// Best unit-circle value for element `m` with the rest of the strip fixed.
///
/// Maximizes `|h*_m b_m + h̃_m|^2`, i.e. aligns `b_m` against
/// `h*_m h̃*_m`. When that product is exactly zero every phase is optimal
/// and the current value is kept.
pub fn update_phase<T: Real>(h_strip: &[Complex<T>], b_strip: &[Complex<T>], m: usize) -> Complex<T> {
    let ht = tilde_h(h_strip, b_strip, m);
    best_circle_value(h_strip[m].conj() * ht.conj(), b_strip[m])
}

#[inline]
fn best_circle_value<T: Real>(coupling: Complex<T>, current: Complex<T>) -> Complex<T> {
    if coupling.norm_sqr() == T::zero() {
        current
    } else {
        Complex::from_polar(T::one(), -coupling.arg())
    }
}

/// Objective of the unit-circle subproblem over `active`:
/// `Σ_n |Σ_m h*_{n,m} (b_{n,m} + j)|^2`, which equals `4 Σ_n |c_n|^2`.
pub fn circle_objective<T: Real>(
    h: &ChannelRealization<T>,
    weights: &DmaWeights<T>,
    active: &[usize],
) -> T {
    let j = Complex::new(T::zero(), T::one());
    active
        .iter()
        .map(|&n| {
            h.strip(n)
                .iter()
                .zip(weights.strip_circle_vars(n))
                .fold(Complex::new(T::zero(), T::zero()), |acc, (h, b)| {
                    acc + h.conj() * (b + j)
                })
                .norm_sqr()
        })
        .sum()
}

/// Stopping rule of the inner coordinate ascent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerSettings<T> {
    /// Stop once a sweep raises the objective by less than this...
    pub eps: T,
    /// ...and no element moved by more than this many radians.
    pub phase_tol: T,
    pub max_sweeps: usize,
}

impl<T: Real> InnerSettings<T> {
    pub fn from_config(cfg: &SystemConfig<T>) -> Self {
        Self {
            eps: cfg.inner_eps,
            phase_tol: cfg.phase_tol,
            max_sweeps: cfg.max_inner_sweeps,
        }
    }
}

fn angle_between<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    (a * b.conj()).arg().abs()
}

/// Element-wise coordinate ascent on the active strips.
///
/// Sweeps strips in ascending order and elements in order, replacing each
/// `b_{n,m}` by [`update_phase`]. An update is only taken when it strictly
/// raises that element's term, so the objective never decreases. Strips
/// outside `active` keep their weights. Returns the new weights and the
/// number of sweeps performed.
pub fn coordinate_ascent<T: Real>(
    h: &ChannelRealization<T>,
    weights: &DmaWeights<T>,
    active: &[usize],
    settings: &InnerSettings<T>,
) -> Result<(DmaWeights<T>, usize)> {
    check_dims(h, weights)?;
    check_indices(active, h.n_strips())?;
    let j = Complex::new(T::zero(), T::one());
    let mut out = weights.clone();
    let mut objective = circle_objective(h, &out, active);
    let mut sweeps = 0;
    while sweeps < settings.max_sweeps {
        sweeps += 1;
        let mut max_step = T::zero();
        for &n in active {
            let h_n = h.strip(n);
            let mut b = out.strip_circle_vars(n).to_vec();
            let bias = h_n.iter().fold(Complex::new(T::zero(), T::zero()), |acc, x| acc + x.conj() * j);
            let mut total = h_n
                .iter()
                .zip(&b)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (x, bm)| acc + x.conj() * bm);
            for m in 0..b.len() {
                let a = h_n[m].conj();
                let ht = total - a * b[m] + bias;
                let coupling = a * ht.conj();
                let candidate = best_circle_value(coupling, b[m]);
                if (coupling * candidate).re > (coupling * b[m]).re {
                    max_step = max_step.max(angle_between(candidate, b[m]));
                    total = total + a * (candidate - b[m]);
                    b[m] = candidate;
                }
            }
            out.set_strip_circle_vars(n, &b)?;
        }
        let next = circle_objective(h, &out, active);
        let increase = next - objective;
        objective = next;
        if increase < settings.eps && max_step <= settings.phase_tol {
            break;
        }
    }
    Ok((out, sweeps))
}

/// Alternating selection/MRT and coordinate ascent from random weights.
pub fn optimize<T: Real, R: Rng + ?Sized>(
    h: &ChannelRealization<T>,
    cfg: &SystemConfig<T>,
    rng: &mut R,
) -> Result<(BeamformingSolution<T>, OptimizerTrace<T>)> {
    cfg.validate()?;
    let init = random_weights(cfg, rng);
    optimize_from(h, cfg, init, &Selection::GainRanked)
}

/// The alternating loop from given initial weights.
///
/// Each outer iteration selects the active set, applies MRT and records the
/// SNR, then runs coordinate ascent on the active strips (warm-started from
/// the current weights). Stops when the SNR gain drops below
/// `cfg.convergence_eps` or after `cfg.max_outer_iters` iterations.
pub fn optimize_from<T: Real>(
    h: &ChannelRealization<T>,
    cfg: &SystemConfig<T>,
    init: DmaWeights<T>,
    selection: &Selection,
) -> Result<(BeamformingSolution<T>, OptimizerTrace<T>)> {
    cfg.validate()?;
    check_len(cfg.n_strips, h.n_strips())?;
    check_len(cfg.m_elements, h.m_elements())?;
    check_dims(h, &init)?;
    if let Selection::Fixed(set) = selection {
        check_indices(set, cfg.n_strips)?;
        if set.len() > cfg.n_rf {
            return Err(Error::Domain(format!(
                "fixed set activates {} microstrips with {} RF chains",
                set.len(),
                cfg.n_rf
            )));
        }
    }
    let inner = InnerSettings::from_config(cfg);
    let mut weights = init;
    let mut trace = OptimizerTrace { snr_per_iteration: Vec::new() };
    let mut best: Option<BeamformingSolution<T>> = None;

    for iter in 1..=cfg.max_outer_iters {
        let gains = strip_gains(h, &weights)?;
        if gains.iter().all(|&g| g == T::zero()) {
            return Err(Error::DegenerateChannel(
                "every microstrip has zero effective gain".into(),
            ));
        }
        let active = match selection {
            Selection::GainRanked => select_strips(&gains, cfg.n_rf)?,
            Selection::Fixed(set) => {
                let mut set = set.clone();
                set.sort_unstable();
                set
            }
        };
        let w_bar = mrt_beamformer(h, &weights, &active, cfg.tx_power)?;
        let w = embed_w(&w_bar, &active, cfg.n_strips)?;
        let value = snr(h, &weights, &w, cfg.noise_var)?;

        let previous = best.as_ref().map(|s| s.snr);
        if let Some(prev) = previous {
            // A rounding-level drop means nothing is left to gain.
            if value < prev {
                break;
            }
        }
        trace.snr_per_iteration.push(value);
        best = Some(BeamformingSolution {
            active_set: active.clone(),
            w,
            weights: weights.clone(),
            snr: value,
            spectral_efficiency: spectral_efficiency(value)?,
            outer_iterations: iter,
        });
        if let Some(prev) = previous {
            if value - prev < cfg.convergence_eps {
                break;
            }
        }
        if iter == cfg.max_outer_iters {
            break;
        }
        weights = coordinate_ascent(h, &weights, &active, &inner)?.0;
    }
    let solution = best.expect("at least one outer iteration runs");
    Ok((solution, trace))
}
