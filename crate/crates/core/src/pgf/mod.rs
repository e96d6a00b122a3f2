//! Probability generating functions represented by their roots.
//!
//! A random variable on `{0, ..., d}` with generating function
//! `g(z) = P(X = d) * prod_k (z - zeta_k)` is stored as the multiset of roots
//! `zeta_k` plus the normalization `P(X = d) = 1 / prod_k (1 - zeta_k)`, which
//! makes `g(1) = 1` hold by construction. The coefficient view lives in
//! [`pmf`], the exact big-integer expansions in [`exact`].

pub mod exact;
pub mod pmf;

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub use exact::{expand_integer_roots, expand_pmf_exact};
pub use pmf::{expand_pmf, expand_pmf_auto, MomentCumulants, Pmf};

/// Distance from the unit circle below which a root counts as root-unitary.
pub const CLASSIFY_TOL: f64 = 1e-10;
/// Tolerance for algebraic identities evaluated in floating point.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Most negative coefficient accepted from a floating-point expansion.
pub const NONNEG_TOL: f64 = 1e-9;

/// A single root in Cartesian and polar form.
///
/// The angle lies in `(-pi, pi]`; the zero root carries the polar pair `(0, pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    value: Complex64,
    radius: f64,
    angle: f64,
}

impl Root {
    /// Validates a root of a generating function with nonnegative coefficients.
    pub fn new(value: Complex64) -> Result<Self> {
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::NonFiniteRoot {
                re: value.re,
                im: value.im,
            });
        }
        if value.im == 0.0 && value.re > 0.0 {
            return Err(Error::PositiveAxisRoot {
                re: value.re,
                im: value.im,
            });
        }
        Ok(Self::from_value(value))
    }

    fn from_value(value: Complex64) -> Self {
        if value.im == 0.0 {
            // Normalizes -0.0 imaginary parts, whose `arg` would be -pi.
            return Root {
                value: Complex64::new(value.re, 0.0),
                radius: value.re.abs(),
                angle: PI,
            };
        }
        Root {
            value,
            radius: value.norm(),
            angle: value.arg(),
        }
    }

    /// The non-positive real root `x`.
    pub fn real(x: f64) -> Result<Self> {
        Self::new(Complex64::new(x, 0.0))
    }

    /// The root `e^{i angle}` on the unit circle, `angle` in `(-pi, pi]` and nonzero.
    pub(crate) fn unit(angle: f64) -> Self {
        debug_assert!(angle != 0.0 && angle > -PI && angle <= PI);
        if angle == PI {
            return Root {
                value: Complex64::new(-1.0, 0.0),
                radius: 1.0,
                angle: PI,
            };
        }
        Root {
            value: Complex64::new(angle.cos(), angle.sin()),
            radius: 1.0,
            angle,
        }
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn is_real(&self) -> bool {
        self.value.im == 0.0
    }

    pub fn conj(&self) -> Self {
        if self.is_real() {
            *self
        } else {
            Root {
                value: self.value.conj(),
                radius: self.radius,
                angle: -self.angle,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RootClass {
    RealRooted,
    Cyclotomic,
    General,
}

impl RootClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            RootClass::RealRooted => "RealRooted",
            RootClass::Cyclotomic => "Cyclotomic",
            RootClass::General => "General",
        }
    }
}

impl std::fmt::Display for RootClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of [`RootedPgf::classify`]. A root set that is both real-rooted and
/// root-unitary (all roots equal to -1) reports `RealRooted` with `also_cyclotomic`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub class: RootClass,
    pub also_cyclotomic: bool,
}

impl Classification {
    pub fn is_real_rooted(&self) -> bool {
        self.class == RootClass::RealRooted
    }

    pub fn is_cyclotomic(&self) -> bool {
        self.class == RootClass::Cyclotomic || self.also_cyclotomic
    }
}

/// A generating function given by its root multiset.
///
/// Real roots come first, followed by the non-real roots as adjacent
/// `(zeta, conj(zeta))` pairs with `Im(zeta) > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootedPgf {
    roots: Vec<Root>,
    log_norm: f64,
}

fn cmp_complex(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Builds a generating function from an arbitrary root multiset.
///
/// Non-real roots must come in conjugate pairs (matched to within `1e-12`
/// relative); the stored lower member is replaced by the exact conjugate of
/// the upper one.
pub fn make_pgf(roots: &[Complex64]) -> Result<RootedPgf> {
    let mut reals = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for &z in roots {
        let root = Root::new(z)?;
        if root.is_real() {
            reals.push(root);
        } else if root.value.im > 0.0 {
            upper.push(root.value);
        } else {
            lower.push(root.value.conj());
        }
    }
    upper.sort_by(cmp_complex);
    lower.sort_by(cmp_complex);
    if upper.len() != lower.len() {
        let unmatched = if upper.len() > lower.len() {
            upper[lower.len()]
        } else {
            lower[upper.len()].conj()
        };
        return Err(Error::UnpairedConjugate {
            re: unmatched.re,
            im: unmatched.im,
        });
    }
    let mut pairs = Vec::with_capacity(upper.len());
    for (u, l) in upper.iter().zip(&lower) {
        if (u - l).norm() > IDENTITY_TOL * u.norm().max(1.0) {
            return Err(Error::UnpairedConjugate { re: u.re, im: u.im });
        }
        pairs.push(Root::from_value(*u));
    }
    Ok(RootedPgf::from_parts(reals, pairs))
}

impl RootedPgf {
    /// Assembles validated real roots and upper half-plane representatives.
    pub(crate) fn from_parts(reals: Vec<Root>, upper: Vec<Root>) -> Self {
        let mut roots = reals;
        roots.reserve(2 * upper.len());
        for u in upper {
            roots.push(u);
            roots.push(u.conj());
        }
        let log_norm = -roots
            .iter()
            .map(|r| (Complex64::new(1.0, 0.0) - r.value).norm().ln())
            .sum::<f64>();
        RootedPgf { roots, log_norm }
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// `ln P(X = d)`, i.e. `-ln prod_k (1 - zeta_k)`.
    pub fn log_norm(&self) -> f64 {
        self.log_norm
    }

    /// `P(X = d) = 1 / prod_k (1 - zeta_k)`; underflows to zero for very large degrees.
    pub fn norm(&self) -> f64 {
        self.log_norm.exp()
    }

    pub fn angles(&self) -> Vec<f64> {
        self.roots.iter().map(Root::angle).collect()
    }

    pub fn classify(&self) -> Classification {
        let real_rooted = self
            .roots
            .iter()
            .all(|r| r.value.im == 0.0 && r.value.re <= 0.0);
        let cyclotomic = self
            .roots
            .iter()
            .all(|r| (r.radius - 1.0).abs() <= CLASSIFY_TOL);
        match (real_rooted, cyclotomic) {
            (true, both) => Classification {
                class: RootClass::RealRooted,
                also_cyclotomic: both,
            },
            (false, true) => Classification {
                class: RootClass::Cyclotomic,
                also_cyclotomic: false,
            },
            (false, false) => Classification {
                class: RootClass::General,
                also_cyclotomic: false,
            },
        }
    }

    /// Smallest absolute root angle. A root-free (constant) generating function reports `pi`.
    pub fn delta(&self) -> f64 {
        self.roots
            .iter()
            .map(|r| r.angle.abs())
            .fold(PI, f64::min)
    }

    /// Generating function of the sum of two independent variables: the root union.
    pub fn independent_sum(&self, other: &RootedPgf) -> RootedPgf {
        let (mut reals, mut upper) = self.split();
        let (r2, u2) = other.split();
        reals.extend(r2);
        upper.extend(u2);
        RootedPgf::from_parts(reals, upper)
    }

    fn split(&self) -> (Vec<Root>, Vec<Root>) {
        let reals = self.roots.iter().filter(|r| r.is_real()).copied().collect();
        let upper = self
            .roots
            .iter()
            .filter(|r| r.value.im > 0.0)
            .copied()
            .collect();
        (reals, upper)
    }

    /// `g(z) = prod_k (z - zeta_k) / (1 - zeta_k)`, accumulated in log-polar form.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let mut log_mod = 0.0;
        let mut arg = 0.0;
        for r in &self.roots {
            let f = (z - r.value) / (one - r.value);
            if f == Complex64::new(0.0, 0.0) {
                return Complex64::new(0.0, 0.0);
            }
            log_mod += f.norm().ln();
            arg += f.arg();
        }
        Complex64::from_polar(log_mod.exp(), arg)
    }
}

/// Anything with a characteristic function `t -> E[e^{itX}]`.
pub trait CharacteristicFunction {
    fn cf(&self, t: f64) -> Complex64;
}

impl CharacteristicFunction for RootedPgf {
    fn cf(&self, t: f64) -> Complex64 {
        self.eval(Complex64::from_polar(1.0, t))
    }
}

impl<C: CharacteristicFunction + ?Sized> CharacteristicFunction for &C {
    fn cf(&self, t: f64) -> Complex64 {
        (**self).cf(t)
    }
}

pub fn evaluate_cf<C: CharacteristicFunction + ?Sized>(source: &C, t: f64) -> Complex64 {
    source.cf(t)
}
