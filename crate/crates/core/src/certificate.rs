//! Stein–Tikhomirov certificates for the normal approximation.
//!
//! The logarithmic derivative of the characteristic function,
//! `Q(t) = phi'(t) / phi(t) = i sum_k e^{it} / (e^{it} - zeta_k)`, drives
//! everything here. For the standardized variable,
//! `phi_hat'(t) + t phi_hat(t) = alpha(t) phi_hat(t)` with
//! `alpha(t) = (Q(t / sigma) - i mu) / sigma + t`, and the whole argument
//! reduces to a quadratic bound `|alpha(t)| <= A t^2` on `(-C, C)`. For
//! real-rooted or root-unitary generating functions `A = 5 pi^3 / (2 sigma delta)`
//! and `C = sigma delta / 2` work, which gives the explicit bounds below.

use std::f64::consts::PI;
use std::sync::LazyLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cumulants::{root_sum, CumulantSummary, DEGENERATE_VARIANCE};
use crate::error::{Error, Result};
use crate::pgf::{Root, RootedPgf};

/// Angular distance below which `e^{it}` is taken to hit a root angle.
pub const ANGLE_COLLISION_TOL: f64 = 1e-12;
/// Default number of grid points for [`quadratic_certificate`].
pub const DEFAULT_GRID_POINTS: usize = 4096;

/// The explicit constants of the three bounds, evaluated from their closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    /// `20 pi^3 / (6 sqrt pi) + 60 pi sqrt(2 pi)`
    pub c0: f64,
    /// `c0 / pi`
    pub c1: f64,
    /// `c0 / 2^{1/4}`
    pub c2: f64,
}

impl Constants {
    pub fn compute() -> Self {
        let c0 = 20.0 * PI.powi(3) / (6.0 * PI.sqrt()) + 60.0 * PI * (2.0 * PI).sqrt();
        Constants {
            c0,
            c1: c0 / PI,
            c2: c0 / 2f64.powf(0.25),
        }
    }

    /// Checks `c0 < 531`, `c1 < 169`, `c2 < 447`.
    pub fn self_test(&self) -> Result<()> {
        for (name, value, limit) in [
            ("c0", self.c0, 531.0),
            ("c1", self.c1, 169.0),
            ("c2", self.c2, 447.0),
        ] {
            if !(value < limit) {
                return Err(Error::ConstantSelfTest(format!(
                    "{name} = {value} is not below {limit}"
                )));
            }
        }
        Ok(())
    }
}

static CONSTANTS: LazyLock<Constants> = LazyLock::new(|| {
    let c = Constants::compute();
    if let Err(e) = c.self_test() {
        panic!("{e}");
    }
    c
});

/// The self-tested constants; the check runs once, on first access.
pub fn constants() -> &'static Constants {
    &CONSTANTS
}

fn check_angle(pgf: &RootedPgf, t: f64) -> Result<()> {
    for angle in pgf.roots().iter().map(Root::angle) {
        let d = (t - angle).rem_euclid(2.0 * PI);
        if d.min(2.0 * PI - d) <= ANGLE_COLLISION_TOL {
            return Err(Error::AngleCollision { t, angle });
        }
    }
    Ok(())
}

fn rotated(z: Complex64, t: f64) -> Complex64 {
    z * Complex64::from_polar(1.0, -t)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// `Q(t) = i sum_k 1 / (1 - zeta_k e^{-it})`.
pub fn q_value(pgf: &RootedPgf, t: f64) -> Result<Complex64> {
    check_angle(pgf, t)?;
    let sum = root_sum(pgf, |z| (one() - rotated(z, t)).inv());
    Ok(Complex64::i() * sum)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QDerivatives {
    pub d1: Complex64,
    pub d2: Complex64,
    pub d3: Complex64,
}

/// `Q'`, `Q''`, `Q'''` at `t`. With `w = zeta e^{-it}` and `v = 1 / (1 - w)`:
///
/// - `Q'   = sum_k w v^2`
/// - `Q''  = i sum_k w v^2 (1 - 2 v)`
/// - `Q''' = -sum_k w v^4 ((1 + w)^2 + 2 w)`
pub fn q_derivatives(pgf: &RootedPgf, t: f64) -> Result<QDerivatives> {
    check_angle(pgf, t)?;
    let d1 = root_sum(pgf, |z| {
        let w = rotated(z, t);
        let v = (one() - w).inv();
        w * v * v
    });
    let d2 = root_sum(pgf, |z| {
        let w = rotated(z, t);
        let v = (one() - w).inv();
        w * v * v * (one() - 2.0 * v)
    });
    let d3 = root_sum(pgf, |z| {
        let w = rotated(z, t);
        let v = (one() - w).inv();
        let v2 = v * v;
        let p = one() + w;
        -w * v2 * v2 * (p * p + 2.0 * w)
    });
    Ok(QDerivatives {
        d1,
        d2: Complex64::i() * d2,
        d3,
    })
}

/// `alpha(t) = (Q(t / sigma) - i mu) / sigma + t`, evaluated as written.
pub fn alpha(pgf: &RootedPgf, mu: f64, sigma: f64, t: f64) -> Result<Complex64> {
    let q = q_value(pgf, t / sigma)?;
    Ok((q - Complex64::new(0.0, mu)) / sigma + t)
}

/// `alpha(t)` as the Taylor remainder `(Q(s) - Q(0) - Q'(0) s) / sigma`,
/// `s = t / sigma`, with `mu` and `sigma^2` taken from the same roots.
///
/// Per root, with `u = 1 / (1 - zeta)`, `v = 1 / (1 - zeta e^{-is})` and
/// `E = e^{-is} - 1 = -2 sin^2(s/2) - i sin s`, the remainder is
/// `zeta u (s zeta E u v + (sin s - s) v - 2i sin^2(s/2) v)`, every term of
/// which is `O(s^2)`; nothing cancels at small `t`.
pub fn alpha_remainder(pgf: &RootedPgf, sigma: f64, t: f64) -> Result<Complex64> {
    let s = t / sigma;
    check_angle(pgf, s)?;
    let half = (s / 2.0).sin();
    let sin2_half = half * half;
    let e = Complex64::new(-2.0 * sin2_half, -s.sin());
    let sin_minus = s.sin() - s;
    let sum = root_sum(pgf, |z| {
        let u = (one() - z).inv();
        let v = (one() - rotated(z, s)).inv();
        z * u * (s * z * e * u * v + sin_minus * v - Complex64::new(0.0, 2.0 * sin2_half) * v)
    });
    Ok(sum / sigma)
}

/// Outcome of checking `|alpha(t)| <= A t^2` on a grid over `(-C, C)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticCertificate {
    /// `5 pi^3 / (2 sigma delta)`
    #[serde(rename = "A")]
    pub a: f64,
    /// `sigma delta / 2`
    #[serde(rename = "C")]
    pub c: f64,
    pub grid_max_ratio: f64,
    pub pass: bool,
    pub points_evaluated: usize,
}

/// Symmetric grid over `(-c, c)` without `0`: a quarter of each half
/// log-spaced from `1e-8 * 2c` up to the first uniform point, the rest uniform.
pub fn certificate_grid(c: f64, grid_points: usize) -> Vec<f64> {
    let half = (grid_points / 2).max(1);
    let n_log = half / 4;
    let n_uni = half - n_log;
    let t_min = 1e-8 * 2.0 * c;
    let first_uniform = c / n_uni as f64;
    let mut positive = Vec::with_capacity(half);
    if n_log > 0 && t_min < first_uniform {
        let ratio = first_uniform / t_min;
        positive.extend((0..n_log).map(|i| t_min * ratio.powf(i as f64 / n_log as f64)));
    }
    positive.extend((1..=n_uni).map(|j| c * j as f64 / n_uni as f64 * (1.0 - 1e-9)));
    let mut grid: Vec<f64> = positive.iter().rev().map(|t| -t).collect();
    grid.extend(positive);
    grid
}

pub fn quadratic_certificate(
    pgf: &RootedPgf,
    summary: &CumulantSummary,
    grid_points: usize,
) -> Result<QuadraticCertificate> {
    let class = pgf.classify();
    if !(class.is_real_rooted() || class.is_cyclotomic()) {
        return Err(Error::UnsupportedRootClass(class.class.to_string()));
    }
    if summary.sigma2 <= DEGENERATE_VARIANCE {
        return Err(Error::DegenerateVariance(summary.sigma2));
    }
    let sigma = summary.sigma();
    let delta = summary.delta;
    let a = 5.0 * PI.powi(3) / (2.0 * sigma * delta);
    let c = sigma * delta / 2.0;
    let ratios: Vec<f64> = certificate_grid(c, grid_points)
        .par_iter()
        .filter_map(|&t| {
            // colliding points form a measure-zero set and are skipped
            alpha_remainder(pgf, sigma, t).ok().map(|al| al.norm() / (t * t))
        })
        .collect();
    let grid_max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(QuadraticCertificate {
        a,
        c,
        grid_max_ratio,
        pass: grid_max_ratio <= a + 1e-9,
        points_evaluated: ratios.len(),
    })
}

/// Inputs of the generic Stein–Tikhomirov bound: `phi'(t) = -t (1 + a(t)) phi(t) + b(t)`
/// with `|a(t)| <= A0 + A1 |t|` and `|b(t)| <= B0 + B1 |t| + B2 t^2` on `(-C, C)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinTikhomirovInputs {
    pub a0: f64,
    pub a1: f64,
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub c: f64,
}

impl SteinTikhomirovInputs {
    /// `max{2 A1 / (1 - 2 A0), 1 / C}`, the smallest admissible `s`.
    pub fn min_s(&self) -> f64 {
        (2.0 * self.a1 / (1.0 - 2.0 * self.a0)).max(1.0 / self.c)
    }
}

/// `(2/pi) A0 + 4/(3 sqrt pi) A1 + sqrt(pi) B0 + (2/pi)(1 + 2 max{0, -ln 2s}) B1
///  + 4/(pi s) B2 + 24 s / (pi sqrt(2 pi))`.
pub fn stein_tikhomirov_bound(inputs: &SteinTikhomirovInputs, s: f64) -> Result<f64> {
    let SteinTikhomirovInputs { a0, a1, b0, b1, b2, c } = *inputs;
    for (name, v) in [("A0", a0), ("A1", a1), ("B0", b0), ("B1", b1), ("B2", b2)] {
        if !(v >= 0.0) {
            return Err(Error::InvalidParameter(format!("{name} = {v} must be nonnegative")));
        }
    }
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(format!("C = {c} must be positive")));
    }
    if !(a0 < 0.5) {
        return Err(Error::InvalidA0(a0));
    }
    let min = inputs.min_s();
    if !(s >= min) {
        return Err(Error::InvalidS { s, min });
    }
    let log_factor = 1.0 + 2.0 * (-(2.0 * s).ln()).max(0.0);
    Ok(2.0 / PI * a0
        + 4.0 / (3.0 * PI.sqrt()) * a1
        + PI.sqrt() * b0
        + 2.0 / PI * log_factor * b1
        + 4.0 / (PI * s) * b2
        + 24.0 * s / (PI * (2.0 * PI).sqrt()))
}

fn require_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma * sigma > DEGENERATE_VARIANCE {
        Ok(())
    } else {
        Err(Error::DegenerateVariance(sigma * sigma.abs()))
    }
}

/// `c1 / sigma`, valid for real-rooted generating functions.
pub fn bound_real_rooted(sigma: f64) -> Result<f64> {
    require_sigma(sigma)?;
    Ok(constants().c1 / sigma)
}

/// `c2 |kappa|^{1/4} / sigma`, valid for root-unitary generating functions.
pub fn bound_cyclotomic(sigma: f64, kappa: f64) -> Result<f64> {
    require_sigma(sigma)?;
    Ok(constants().c2 * kappa.abs().powf(0.25) / sigma)
}

/// `c0 / (sigma delta)`, valid whenever the certificate constant holds.
pub fn bound_generic(sigma: f64, delta: f64) -> Result<f64> {
    require_sigma(sigma)?;
    if !(delta > 0.0 && delta <= PI) {
        return Err(Error::InvalidParameter(format!("delta = {delta} outside (0, pi]")));
    }
    Ok(constants().c0 / (sigma * delta))
}

/// `-kappa >= sum_k 2 / phi_k^4 >= 2 / delta^4`, each side with slack
/// `1e-9 * max(1, rhs)`.
pub fn kappa_delta_inequality(kappa: f64, angles: &[f64]) -> bool {
    if angles.is_empty() {
        return false;
    }
    let delta = angles.iter().map(|a| a.abs()).fold(f64::INFINITY, f64::min);
    let angle_sum: f64 = angles.iter().map(|a| 2.0 / a.powi(4)).sum();
    let gap_term = 2.0 / delta.powi(4);
    let holds = |rhs: f64| -kappa >= rhs - 1e-9 * rhs.max(1.0);
    holds(angle_sum) && holds(gap_term)
}

/// Residual of the factorization of `(1 - zeta e^{-is})^2 e^{i(s - phi)}` and
/// the lower bound `|1 - zeta e^{-is}| >= (1 + r)|phi| / (2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub residual: f64,
    pub modulus: f64,
    pub lower_bound: f64,
    /// `|s| < |phi| / 2`, where the lower bound is claimed.
    pub lower_bound_applies: bool,
    pub lower_bound_holds: bool,
}

/// Compares `(1 - zeta e^{-is})^2 e^{i(s - phi)}` with
/// `-1/2 [(1 + r) sqrt(1 - cos x) + i sgn(sin x) (1 - r) sqrt(1 + cos x)]^2`,
/// `x = phi - s`.
pub fn unit_circle_identity_check(zeta: &Root, s: f64) -> IdentityCheck {
    let (r, phi) = (zeta.radius(), zeta.angle());
    let factor = one() - rotated(zeta.value(), s);
    let lhs = factor * factor * Complex64::from_polar(1.0, s - phi);

    let x = phi - s;
    let sgn = match x.sin() {
        v if v > 0.0 => 1.0,
        v if v < 0.0 => -1.0,
        _ => 0.0,
    };
    let sqrt_one_minus_cos = SQRT2 * (x / 2.0).sin().abs();
    let sqrt_one_plus_cos = SQRT2 * (x / 2.0).cos().abs();
    let bracket = Complex64::new(
        (1.0 + r) * sqrt_one_minus_cos,
        sgn * (1.0 - r) * sqrt_one_plus_cos,
    );
    let rhs = -0.5 * bracket * bracket;

    let modulus = factor.norm();
    let lower_bound = (1.0 + r) * phi.abs() / (2.0 * PI);
    let lower_bound_applies = s.abs() < phi.abs() / 2.0;
    IdentityCheck {
        residual: (lhs - rhs).norm(),
        modulus,
        lower_bound,
        lower_bound_applies,
        lower_bound_holds: !lower_bound_applies || modulus >= lower_bound,
    }
}

const SQRT2: f64 = std::f64::consts::SQRT_2;
