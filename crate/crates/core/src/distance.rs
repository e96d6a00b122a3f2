//! Kolmogorov distance between a standardized lattice variable and the
//! standard normal law, and the numeric Esseen smoothing bound.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pgf::{CharacteristicFunction, Pmf};

/// Standard normal distribution function `F(w) = erfc(-w / sqrt 2) / 2`.
pub fn normal_cdf(w: f64) -> f64 {
    0.5 * libm::erfc(-w / SQRT_2)
}

/// The support points `w_k = (k - mu) / sigma` of the standardized variable
/// together with `F(w_k)` and the left limits `F(w_k-)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardizedLattice {
    pub support: Vec<f64>,
    pub cdf: Vec<f64>,
    pub left_limits: Vec<f64>,
}

impl StandardizedLattice {
    pub fn new(pmf: &Pmf, mu: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::DegenerateVariance(sigma * sigma.abs()));
        }
        let cdf = pmf.cdf();
        let mut left_limits = Vec::with_capacity(cdf.len());
        left_limits.push(0.0);
        left_limits.extend_from_slice(&cdf[..cdf.len().saturating_sub(1)]);
        let support = (0..cdf.len()).map(|k| (k as f64 - mu) / sigma).collect();
        Ok(StandardizedLattice {
            support,
            cdf,
            left_limits,
        })
    }

    /// `sup_w |P(X_hat <= w) - F(w)|`. Between jumps the lattice CDF is flat and
    /// `F` increasing, so the supremum is attained at a jump, approached from
    /// one side or the other.
    pub fn kolmogorov_distance(&self) -> f64 {
        self.support
            .iter()
            .zip(self.cdf.iter().zip(&self.left_limits))
            .map(|(&w, (&right, &left))| {
                let f = normal_cdf(w);
                (right - f).abs().max((left - f).abs())
            })
            .fold(0.0, f64::max)
    }
}

pub fn kolmogorov_distance(pmf: &Pmf, mu: f64, sigma: f64) -> Result<f64> {
    Ok(StandardizedLattice::new(pmf, mu, sigma)?.kolmogorov_distance())
}

/// Characteristic function of `(X - mu) / sigma`: `phi(t / sigma) e^{-i mu t / sigma}`.
pub struct Standardized<C> {
    inner: C,
    mu: f64,
    sigma: f64,
}

impl<C: CharacteristicFunction> Standardized<C> {
    pub fn new(inner: C, mu: f64, sigma: f64) -> Self {
        Standardized { inner, mu, sigma }
    }
}

impl<C: CharacteristicFunction> CharacteristicFunction for Standardized<C> {
    fn cf(&self, t: f64) -> Complex64 {
        let s = t / self.sigma;
        self.inner.cf(s) * Complex64::from_polar(1.0, -self.mu * s)
    }
}

/// Weight of the quadrature cushion `10 (T / steps)^4`.
pub const ESSEEN_CUSHION: f64 = 10.0;

/// Upper bound on the Kolmogorov distance from Esseen's smoothing inequality
///
/// `(1/pi) int_{-T}^{T} |phi(t) - e^{-t^2/2}| / |t| dt + 12 sqrt 2 / (pi^{3/2} T)`,
///
/// where `cf` is the characteristic function of a standardized variable.
/// The integral is evaluated by composite Simpson with `steps` panels (rounded
/// up to even) and the cushion `10 (T / steps)^4` is added. The integrand is
/// continued by 0 at `t = 0`.
pub fn esseen_bound<C>(cf: &C, t_max: f64, steps: usize) -> Result<f64>
where
    C: CharacteristicFunction + ?Sized,
{
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::NonpositiveT(t_max));
    }
    let steps = (steps.max(2) + 1) & !1;
    let h = 2.0 * t_max / steps as f64;
    let integrand = |t: f64| {
        if t == 0.0 {
            0.0
        } else {
            (cf.cf(t) - Complex64::new((-0.5 * t * t).exp(), 0.0)).norm() / t.abs()
        }
    };
    let mut sum = integrand(-t_max) + integrand(t_max);
    for j in 1..steps {
        let t = -t_max + j as f64 * h;
        let weight = if j % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * integrand(t);
    }
    let integral = sum * h / 3.0;
    let tail = 12.0 * SQRT_2 / (PI.powf(1.5) * t_max);
    let cushion = ESSEEN_CUSHION * (t_max / steps as f64).powi(4);
    Ok(integral / PI + tail + cushion)
}
