//! Lorentzian-constrained metasurface weights.
//!
//! Every element weight lies on the circle `|g - j/2| = 1/2` and is fully
//! described by one phase `φ`: `g = (j + e^{jφ}) / 2`. The affine map
//! `b = 2g - j` sends that circle onto the unit circle, which is where the
//! optimizer works.

use num_complex::Complex;
use rand::Rng;

use crate::config::SystemConfig;
use crate::error::{check_len, Error, Result};
use crate::scalar::Real;

fn j<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_phase<T: Real>(phi: T) -> T {
    let tau = T::TAU();
    let r = phi % tau;
    let r = if r < T::zero() { r + tau } else { r };
    // `r + tau` can round up to exactly tau for tiny negative r.
    if r >= tau {
        T::zero()
    } else {
        r
    }
}

/// Weight realized by a resonator tuned to phase `φ`.
pub fn lorentzian_of_phase<T: Real>(phi: T) -> Complex<T> {
    (j::<T>() + Complex::from_polar(T::one(), phi)) / T::lit(2.0)
}

/// Maps a Lorentzian weight onto the unit circle.
pub fn b_of_g<T: Real>(g: Complex<T>) -> Result<Complex<T>> {
    let dist = ((g - j::<T>() / T::lit(2.0)).norm() - T::lit(0.5)).abs();
    if dist > T::manifold_tol() {
        return Err(Error::Constraint(format!(
            "weight {g} is {dist} away from the Lorentzian circle"
        )));
    }
    Ok(g * T::lit(2.0) - j::<T>())
}

/// Inverse of [`b_of_g`].
pub fn g_of_b<T: Real>(b: Complex<T>) -> Result<Complex<T>> {
    let dist = (b.norm() - T::one()).abs();
    if dist > T::manifold_tol() {
        return Err(Error::Constraint(format!(
            "circle variable {b} is {dist} away from the unit circle"
        )));
    }
    Ok((b + j::<T>()) / T::lit(2.0))
}

/// `h_n^H g_n`: what one microstrip contributes to the received signal per
/// unit digital weight.
pub fn effective_strip_channel<T: Real>(h_n: &[Complex<T>], g_n: &[Complex<T>]) -> Result<Complex<T>> {
    check_len(h_n.len(), g_n.len())?;
    Ok(strip_inner(h_n, g_n))
}

#[inline]
pub(crate) fn strip_inner<T: Real>(h_n: &[Complex<T>], g_n: &[Complex<T>]) -> Complex<T> {
    h_n.iter()
        .zip(g_n)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (h, g)| acc + h.conj() * g)
}

/// Weights of all `N x M` elements, stored strip-major.
///
/// The phases are the only free parameters; `g` and `b` are recomputed
/// from them whenever they change.
#[derive(Debug, Clone, PartialEq)]
pub struct DmaWeights<T> {
    n_strips: usize,
    m_elements: usize,
    phases: Vec<T>,
    weights: Vec<Complex<T>>,
    circle_vars: Vec<Complex<T>>,
}

impl<T: Real> DmaWeights<T> {
    pub fn from_phases(phases: Vec<T>, n_strips: usize, m_elements: usize) -> Result<Self> {
        check_len(n_strips * m_elements, phases.len())?;
        let phases: Vec<T> = phases.into_iter().map(wrap_phase).collect();
        let circle_vars: Vec<Complex<T>> = phases
            .iter()
            .map(|&p| Complex::from_polar(T::one(), p))
            .collect();
        let weights = phases.iter().map(|&p| lorentzian_of_phase(p)).collect();
        Ok(Self {
            n_strips,
            m_elements,
            phases,
            weights,
            circle_vars,
        })
    }

    /// Same phase on every element.
    pub fn uniform(phase: T, n_strips: usize, m_elements: usize) -> Self {
        Self::from_phases(vec![phase; n_strips * m_elements], n_strips, m_elements)
            .expect("length matches by construction")
    }

    pub fn n_strips(&self) -> usize {
        self.n_strips
    }

    pub fn m_elements(&self) -> usize {
        self.m_elements
    }

    pub fn phases(&self) -> &[T] {
        &self.phases
    }

    pub fn weights(&self) -> &[Complex<T>] {
        &self.weights
    }

    pub fn circle_vars(&self) -> &[Complex<T>] {
        &self.circle_vars
    }

    pub fn strip_weights(&self, n: usize) -> &[Complex<T>] {
        &self.weights[self.range(n)]
    }

    pub fn strip_circle_vars(&self, n: usize) -> &[Complex<T>] {
        &self.circle_vars[self.range(n)]
    }

    /// Overwrites the weights of microstrip `n` from unit-circle variables.
    pub fn set_strip_circle_vars(&mut self, n: usize, b: &[Complex<T>]) -> Result<()> {
        check_len(self.m_elements, b.len())?;
        for &bm in b {
            g_of_b(bm)?;
        }
        let range = self.range(n);
        for (k, &bm) in range.zip(b) {
            let phi = wrap_phase(bm.arg());
            self.phases[k] = phi;
            self.circle_vars[k] = Complex::from_polar(T::one(), phi);
            self.weights[k] = lorentzian_of_phase(phi);
        }
        Ok(())
    }

    /// Largest distance of any weight from the Lorentzian circle.
    pub fn max_manifold_error(&self) -> T {
        let center = j::<T>() / T::lit(2.0);
        self.weights
            .iter()
            .map(|g| ((g - center).norm() - T::lit(0.5)).abs())
            .fold(T::zero(), T::max)
    }

    fn range(&self, n: usize) -> std::ops::Range<usize> {
        n * self.m_elements..(n + 1) * self.m_elements
    }
}

/// Uniform random phases on `[0, 2π)`.
pub fn random_weights<T: Real, R: Rng + ?Sized>(cfg: &SystemConfig<T>, rng: &mut R) -> DmaWeights<T> {
    let tau = std::f64::consts::TAU;
    let phases = (0..cfg.n_elements())
        .map(|_| T::lit(rng.gen::<f64>() * tau))
        .collect();
    DmaWeights::from_phases(phases, cfg.n_strips, cfg.m_elements).expect("sized from config")
}
