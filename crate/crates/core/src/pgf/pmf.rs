//! Probability mass functions: the coefficient view of a generating function.

use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{exact, CharacteristicFunction, RootedPgf, NONNEG_TOL};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    /// `p_k = counts[k] / total`.
    Exact { counts: Vec<BigUint>, total: BigUint },
    Float(Vec<f64>),
}

/// Probabilities `p_0, ..., p_d`, either exact rationals with a common
/// denominator or floating-point values.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    repr: Repr,
}

/// Mean, variance and fourth cumulant computed from the probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentCumulants {
    pub mu: f64,
    pub sigma2: f64,
    pub kappa: f64,
}

/// `num / den` rounded to double precision, valid far beyond the `f64` range
/// of either operand.
pub(crate) fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let scaled = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let mantissa = scaled.to_f64().unwrap_or(f64::INFINITY);
    let exp = (-shift).clamp(i32::MIN as i64, i32::MAX as i64) as i32;
    libm::ldexp(mantissa, exp)
}

fn signed_ratio_to_f64(num: &BigInt, den: &BigUint) -> f64 {
    let magnitude = ratio_to_f64(num.magnitude(), den);
    if num.sign() == Sign::Minus {
        -magnitude
    } else {
        magnitude
    }
}

impl Pmf {
    /// Exact distribution proportional to nonnegative integer weights.
    pub fn from_counts(counts: Vec<BigUint>) -> Result<Self> {
        let total: BigUint = counts.iter().sum();
        if total.is_zero() {
            return Err(Error::InvalidParameter(
                "all weights are zero".to_string(),
            ));
        }
        Ok(Pmf {
            repr: Repr::Exact { counts, total },
        })
    }

    /// Floating-point distribution; negative entries down to `-1e-9` are
    /// clamped to zero and the vector is renormalized.
    pub fn from_probs(mut probs: Vec<f64>) -> Result<Self> {
        for (index, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() || *p < -NONNEG_TOL {
                return Err(Error::NegativeCoefficient { index, value: *p });
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let total: f64 = probs.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidParameter(
                "probabilities sum to zero".to_string(),
            ));
        }
        probs.iter_mut().for_each(|p| *p /= total);
        Ok(Pmf {
            repr: Repr::Float(probs),
        })
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            Repr::Exact { counts, .. } => counts.len(),
            Repr::Float(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest index in the support vector (the polynomial degree).
    pub fn degree(&self) -> usize {
        self.len().saturating_sub(1)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact { .. })
    }

    /// Integer weights and their total, in exact mode.
    pub fn counts(&self) -> Option<(&[BigUint], &BigUint)> {
        match &self.repr {
            Repr::Exact { counts, total } => Some((counts, total)),
            Repr::Float(_) => None,
        }
    }

    pub fn exact_probability(&self, k: usize) -> Option<BigRational> {
        match &self.repr {
            Repr::Exact { counts, total } => Some(BigRational::new(
                BigInt::from(counts.get(k)?.clone()),
                BigInt::from(total.clone()),
            )),
            Repr::Float(_) => None,
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Exact { counts, total } => {
                counts.iter().map(|c| ratio_to_f64(c, total)).collect()
            }
            Repr::Float(p) => p.clone(),
        }
    }

    /// `P(X <= k)` for every `k`; cumulated exactly in exact mode.
    pub fn cdf(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Exact { counts, total } => {
                let mut acc = BigUint::zero();
                counts
                    .iter()
                    .map(|c| {
                        acc += c;
                        ratio_to_f64(&acc, total)
                    })
                    .collect()
            }
            Repr::Float(p) => {
                let mut acc = 0.0;
                let mut out: Vec<f64> = p
                    .iter()
                    .map(|x| {
                        acc += x;
                        acc.min(1.0)
                    })
                    .collect();
                if let Some(last) = out.last_mut() {
                    *last = 1.0;
                }
                out
            }
        }
    }

    /// Moments straight from the probabilities: `mu = sum k p_k`,
    /// `sigma2 = sum (k - mu)^2 p_k`, `kappa = sum (k - mu)^4 p_k - 3 sigma2^2`.
    /// Exact mode evaluates all three in integer arithmetic before rounding.
    pub fn moments(&self) -> MomentCumulants {
        match &self.repr {
            Repr::Exact { counts, total } => exact_moments(counts, total),
            Repr::Float(p) => {
                let mu: f64 = p.iter().enumerate().map(|(k, x)| k as f64 * x).sum();
                let (mut m2, mut m4) = (0.0, 0.0);
                for (k, x) in p.iter().enumerate() {
                    let d = k as f64 - mu;
                    let d2 = d * d;
                    m2 += d2 * x;
                    m4 += d2 * d2 * x;
                }
                MomentCumulants {
                    mu,
                    sigma2: m2,
                    kappa: m4 - 3.0 * m2 * m2,
                }
            }
        }
    }

    /// Decimal strings, or reduced `p/q` rationals in exact mode.
    pub fn to_strings(&self) -> Vec<String> {
        match &self.repr {
            Repr::Exact { counts, total } => counts
                .iter()
                .map(|c| {
                    if c.is_zero() {
                        return "0".to_string();
                    }
                    let g = c.gcd(total);
                    let (p, q) = (c / &g, total / &g);
                    if q == BigUint::from(1u8) {
                        p.to_string()
                    } else {
                        format!("{p}/{q}")
                    }
                })
                .collect(),
            Repr::Float(p) => p.iter().map(|x| format!("{x}")).collect(),
        }
    }
}

fn exact_moments(counts: &[BigUint], total: &BigUint) -> MomentCumulants {
    let mut s = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
    for (k, c) in counts.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let c = BigInt::from(c.clone());
        let k = BigInt::from(k);
        let mut term = c;
        s[0] += &term;
        for acc in &mut s[1..5] {
            term *= &k;
            *acc += &term;
        }
    }
    let n = &s[0];
    let n2 = n * n;
    let n3 = &n2 * n;
    let n4 = &n2 * &n2;
    // sigma2 * N^2 and kappa * N^4 as exact integers
    let var_num = &s[2] * n - &s[1] * &s[1];
    let s1_2 = &s[1] * &s[1];
    let kappa_num = &s[4] * &n3 - BigInt::from(4) * &s[3] * &s[1] * &n2
        - BigInt::from(3) * &s[2] * &s[2] * &n2
        + BigInt::from(12) * &s[2] * &s1_2 * n
        - BigInt::from(6) * &s1_2 * &s1_2;
    let total_big = total.clone();
    MomentCumulants {
        mu: signed_ratio_to_f64(&s[1], &total_big),
        sigma2: signed_ratio_to_f64(&var_num, &(&total_big * &total_big)),
        kappa: signed_ratio_to_f64(&kappa_num, n4.magnitude()),
    }
}

impl CharacteristicFunction for Pmf {
    /// `sum_k p_k e^{ikt}` by Horner's scheme on the unit circle.
    fn cf(&self, t: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, t);
        self.probabilities()
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &p| acc * z + p)
    }
}

/// Floating-point expansion of `prod_k (z - zeta_k) / (1 - zeta_k)`.
///
/// Each real root contributes a normalized linear factor and each conjugate
/// pair the real quadratic `(z^2 - 2 Re(zeta) z + |zeta|^2) / |1 - zeta|^2`,
/// so every intermediate coefficient vector is real and sums to one.
pub fn expand_pmf(pgf: &RootedPgf) -> Result<Pmf> {
    let mut coeffs = Vec::with_capacity(pgf.degree() + 1);
    coeffs.push(1.0);
    let roots = pgf.roots();
    let mut i = 0;
    while i < roots.len() {
        let z = roots[i].value();
        if roots[i].is_real() {
            let scale = 1.0 - z.re;
            multiply(&mut coeffs, &[-z.re / scale, 1.0 / scale]);
            i += 1;
        } else {
            let scale = (Complex64::new(1.0, 0.0) - z).norm_sqr();
            multiply(
                &mut coeffs,
                &[z.norm_sqr() / scale, -2.0 * z.re / scale, 1.0 / scale],
            );
            i += 2;
        }
    }
    Pmf::from_probs(coeffs)
}

fn multiply(coeffs: &mut Vec<f64>, factor: &[f64]) {
    let old_len = coeffs.len();
    coeffs.resize(old_len + factor.len() - 1, 0.0);
    for k in (0..coeffs.len()).rev() {
        let mut acc = 0.0;
        for (j, f) in factor.iter().enumerate() {
            if k >= j && k - j < old_len {
                acc += f * coeffs[k - j];
            }
        }
        coeffs[k] = acc;
    }
}

/// Exact expansion when every root is a non-positive integer, otherwise floating point.
pub fn expand_pmf_auto(pgf: &RootedPgf) -> Result<Pmf> {
    match exact::expand_integer_roots(pgf) {
        Some(pmf) => pmf,
        None => expand_pmf(pgf),
    }
}
