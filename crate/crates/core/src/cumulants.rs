//! Cumulants of `X` read directly off the roots of its generating function.
//!
//! With `u_k = 1 / (1 - zeta_k)`:
//!
//! - `mu     = sum_k u_k`
//! - `sigma2 = sum_k -zeta_k u_k^2`
//! - `kappa  = sum_k -zeta_k u_k^4 ((1 + zeta_k)^2 + 2 zeta_k)`
//!
//! Every sum runs over the stored root order, where conjugates are adjacent,
//! and is reduced pairwise so imaginary parts cancel before they accumulate.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pgf::{RootedPgf, CLASSIFY_TOL};

/// Variance at or below this value is treated as a point mass.
pub const DEGENERATE_VARIANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CumulantSummary {
    pub mu: f64,
    pub sigma2: f64,
    pub kappa: f64,
    pub delta: f64,
}

impl CumulantSummary {
    pub fn sigma(&self) -> f64 {
        self.sigma2.max(0.0).sqrt()
    }

    pub fn is_degenerate(&self) -> bool {
        self.sigma2 <= DEGENERATE_VARIANCE
    }
}

/// Sums `term(zeta)` over all roots. Each conjugate pair is combined first,
/// then the per-root (or per-pair) values are reduced pairwise.
pub fn root_sum<F>(pgf: &RootedPgf, term: F) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let roots = pgf.roots();
    let mut values = Vec::with_capacity(roots.len());
    let mut i = 0;
    while i < roots.len() {
        let z = roots[i].value();
        if roots[i].is_real() {
            values.push(term(z));
            i += 1;
        } else {
            values.push(term(z) + term(roots[i + 1].value()));
            i += 2;
        }
    }
    pairwise_sum(&values)
}

fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    match values.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => values[0],
        n => pairwise_sum(&values[..n / 2]) + pairwise_sum(&values[n / 2..]),
    }
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

pub fn mean_term(z: Complex64) -> Complex64 {
    (one() - z).inv()
}

pub fn variance_term(z: Complex64) -> Complex64 {
    let u = (one() - z).inv();
    -z * u * u
}

pub fn kappa_term(z: Complex64) -> Complex64 {
    let u = (one() - z).inv();
    let u2 = u * u;
    let w = one() + z;
    -z * u2 * u2 * (w * w + 2.0 * z)
}

pub fn mean_from_roots(pgf: &RootedPgf) -> f64 {
    root_sum(pgf, mean_term).re
}

pub fn variance_from_roots(pgf: &RootedPgf) -> f64 {
    root_sum(pgf, variance_term).re
}

pub fn kappa_from_roots(pgf: &RootedPgf) -> f64 {
    root_sum(pgf, kappa_term).re
}

/// Fourth cumulant of a root-unitary generating function from its root angles:
/// `-sum_k (2 + cos phi_k) / (2 (1 - cos phi_k)^2)`.
pub fn kappa_cyclotomic(angles: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for &phi in angles {
        if phi == 0.0 {
            return Err(Error::ZeroAngle);
        }
        // 1 - cos(phi) without cancellation for small angles
        let s = (phi / 2.0).sin();
        let one_minus_cos = 2.0 * s * s;
        total -= (2.0 + phi.cos()) / (2.0 * one_minus_cos * one_minus_cos);
    }
    Ok(total)
}

pub fn cumulant_summary(pgf: &RootedPgf) -> CumulantSummary {
    CumulantSummary {
        mu: mean_from_roots(pgf),
        sigma2: variance_from_roots(pgf),
        kappa: kappa_from_roots(pgf),
        delta: pgf.delta(),
    }
}

/// Location of `zeta` relative to the real-part and imaginary-part zero sets
/// of the per-root variance contribution `-zeta / (1 - zeta)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StrophoidRegion {
    /// `Re(-zeta / (1 - zeta)^2) >= 0`.
    pub re_nonneg: bool,
    /// `Im(zeta) = 0` or `|zeta| = 1` (within `1e-10`).
    pub im_zero: bool,
}

/// Classifies `zeta` against the right strophoid `y^2 = x (x - 1)^2 / (2 - x)`
/// and the unit circle.
///
/// `re_nonneg` is the sign of `Re(-zeta (1 - conj zeta)^2) = (2 - x)|zeta|^2 - x`,
/// the numerator of the real part over the positive `|1 - zeta|^4`.
pub fn strophoid_region(zeta: Complex64) -> Result<StrophoidRegion> {
    if zeta == one() {
        return Err(Error::RootAtOne);
    }
    let (x, y) = (zeta.re, zeta.im);
    let re_numerator = (2.0 - x) * zeta.norm_sqr() - x;
    Ok(StrophoidRegion {
        re_nonneg: re_numerator >= 0.0,
        im_zero: y == 0.0 || (zeta.norm() - 1.0).abs() <= CLASSIFY_TOL,
    })
}

/// The strophoid inequality `Im(zeta)^2 >= Re(zeta) (Re(zeta) - 1)^2 / (2 - Re(zeta))`,
/// defined only on the half-plane `Re(zeta) < 2`.
pub fn strophoid_inequality(zeta: Complex64) -> Option<bool> {
    let (x, y) = (zeta.re, zeta.im);
    if x >= 2.0 {
        return None;
    }
    Some(y * y >= x * (x - 1.0) * (x - 1.0) / (2.0 - x))
}
