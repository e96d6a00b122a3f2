//! Closed-form constructors for the standard real-rooted and root-unitary families.
//!
//! Real-rooted families (sums of independent Bernoulli variables, cycle counts
//! of uniform permutations) are returned as root multisets. Root-unitary
//! families are quotients of q-integers,
//! `f(z) = prod_j (1 - z^{b_j}) / (1 - z^{a_j})`, and are returned as a
//! [`ProductFormSpec`]; their roots are generated from cyclotomic factor
//! counts, never by numerical root finding.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::pgf::{Root, RootedPgf};

/// The `(a_j, b_j)` data of a product of q-integer quotients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductFormSpec {
    pairs: Vec<(u64, u64)>,
}

impl ProductFormSpec {
    pub fn new(pairs: Vec<(u64, u64)>) -> Result<Self> {
        if let Some(&(a, b)) = pairs.iter().find(|(a, b)| *a == 0 || *b == 0) {
            return Err(Error::InvalidPair { a, b });
        }
        Ok(ProductFormSpec { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    /// `sum_j (b_j - a_j)`, the degree of the quotient polynomial.
    pub fn degree(&self) -> Result<usize> {
        let d: i128 = self
            .pairs
            .iter()
            .map(|&(a, b)| b as i128 - a as i128)
            .sum();
        usize::try_from(d).map_err(|_| {
            Error::NonPolynomialQuotient(format!("total degree {d} is negative"))
        })
    }

    /// Net multiplicity of each cyclotomic factor `Phi_m`, `m >= 2`, in `f`.
    ///
    /// `1 - z^b = -prod_{m | b} Phi_m(z)` and the `Phi_m` are irreducible, so the
    /// quotient is a polynomial exactly when no net multiplicity is negative.
    pub fn cyclotomic_multiplicities(&self) -> Result<BTreeMap<u64, usize>> {
        let mut net: BTreeMap<u64, i64> = BTreeMap::new();
        for &(a, b) in &self.pairs {
            for m in divisors(b).into_iter().filter(|&m| m > 1) {
                *net.entry(m).or_default() += 1;
            }
            for m in divisors(a).into_iter().filter(|&m| m > 1) {
                *net.entry(m).or_default() -= 1;
            }
        }
        let mut out = BTreeMap::new();
        for (m, c) in net {
            match c {
                c if c < 0 => {
                    return Err(Error::NonPolynomialQuotient(format!(
                        "cyclotomic factor Phi_{m} appears with net multiplicity {c}"
                    )))
                }
                0 => {}
                c => {
                    out.insert(m, c as usize);
                }
            }
        }
        Ok(out)
    }

    /// Root multiset: every primitive `m`-th root of unity, with the net
    /// multiplicity of `Phi_m`.
    pub fn to_pgf(&self) -> Result<RootedPgf> {
        let mut reals = Vec::new();
        let mut upper = Vec::new();
        for (m, mult) in self.cyclotomic_multiplicities()? {
            if m == 2 {
                reals.extend(std::iter::repeat_n(Root::unit(PI), mult));
                continue;
            }
            for k in (1..m).take_while(|k| 2 * k < m).filter(|k| k.gcd(&m) == 1) {
                let root = Root::unit(2.0 * PI * k as f64 / m as f64);
                upper.extend(std::iter::repeat_n(root, mult));
            }
        }
        Ok(RootedPgf::from_parts(reals, upper))
    }

    /// `f(e^{it}) / f(1)` from the sine-ratio form
    /// `(1 - e^{ibt}) / (1 - e^{iat}) = e^{i(b-a)t/2} sin(bt/2) / sin(at/2)`.
    ///
    /// Returns `None` near the removable singularities `at/2 in pi Z \ {0}`,
    /// where the ratio form loses accuracy.
    pub fn cf_closed_form(&self, t: f64) -> Option<Complex64> {
        let mut modulus = 1.0;
        let mut phase = 0.0;
        for &(a, b) in &self.pairs {
            let (a, b) = (a as f64, b as f64);
            let half_a = a * t / 2.0;
            let turns = (half_a / PI).round();
            if turns != 0.0 && (half_a - turns * PI).abs() < 1e-4 {
                return None;
            }
            let ratio = if t == 0.0 {
                1.0
            } else {
                a * (b * t / 2.0).sin() / (b * half_a.sin())
            };
            modulus *= ratio;
            phase += (b - a) * t / 2.0;
        }
        Some(Complex64::from_polar(modulus, phase))
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Sum of independent Bernoulli(`p_k`) variables: roots `-(1 - p_k) / p_k`.
pub fn bernoulli_sum(ps: &[f64]) -> Result<RootedPgf> {
    let roots = ps
        .iter()
        .map(|&p| {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::InvalidProbability(p));
            }
            Root::real(-(1.0 - p) / p)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RootedPgf::from_parts(roots, Vec::new()))
}

pub fn binomial(n: usize, p: f64) -> Result<RootedPgf> {
    bernoulli_sum(&vec![p; n])
}

/// Number of cycles of a uniform permutation of `n` elements:
/// `prod_{k=0}^{n-1} (z + k) / (1 + k)`.
pub fn stirling_cycles(n: usize) -> Result<RootedPgf> {
    if n == 0 {
        return Err(Error::InvalidParameter("stirling_cycles needs n >= 1".into()));
    }
    let roots = (0..n)
        .map(|k| Root::real(-(k as f64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RootedPgf::from_parts(roots, Vec::new()))
}

/// Number of inversions of a uniform permutation of `n` elements:
/// `prod_{j=2}^n (1 - z^j) / (1 - z)`.
pub fn mahonian(n: usize) -> Result<ProductFormSpec> {
    if n == 0 {
        return Err(Error::InvalidParameter("mahonian needs n >= 1".into()));
    }
    ProductFormSpec::new((2..=n as u64).map(|j| (1, j)).collect())
}

/// Normalized Gaussian binomial coefficient `[n choose k]_q / binom(n, k)`.
pub fn gaussian_binomial(n: usize, k: usize) -> Result<ProductFormSpec> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "gaussian_binomial needs 1 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    let (n, k) = (n as u64, k as u64);
    ProductFormSpec::new((1..=k).map(|j| (j, n - k + j)).collect())
}
