//! Exact expansion of product-form and integer-root generating functions
//! with big-integer polynomial arithmetic.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use super::{Pmf, RootedPgf};
use crate::error::{Error, Result};
use crate::families::ProductFormSpec;

/// Dense integer polynomial, lowest degree first.
pub(crate) type IntPoly = Vec<BigInt>;

/// Multiplies in place by `1 + z^step + ... + z^((terms - 1) step)`.
pub(crate) fn mul_geometric(poly: &mut IntPoly, step: usize, terms: usize) {
    if terms <= 1 {
        return;
    }
    let span = step * terms;
    let old = std::mem::take(poly);
    let new_len = old.len() + span - step;
    let mut out: IntPoly = Vec::with_capacity(new_len);
    for k in 0..new_len {
        // out[k] = old[k] + out[k - step] - old[k - span]
        let mut v = old.get(k).cloned().unwrap_or_default();
        if k >= step {
            v += &out[k - step];
        }
        if k >= span {
            if let Some(o) = old.get(k - span) {
                v -= o;
            }
        }
        out.push(v);
    }
    *poly = out;
}

/// Multiplies in place by `1 - z^power`.
pub(crate) fn mul_one_minus_power(poly: &mut IntPoly, power: usize) {
    let old_len = poly.len();
    poly.resize(old_len + power, BigInt::zero());
    for k in (power..poly.len()).rev() {
        let (lo, hi) = poly.split_at_mut(k);
        hi[0] -= &lo[k - power];
    }
}

/// Divides in place by `1 - z^power`, failing if the division leaves a remainder.
///
/// The quotient is first formed as the power series `q_k = p_k + q_{k-power}`;
/// the division is exact precisely when that series vanishes beyond
/// `deg(p) - power`.
pub(crate) fn div_one_minus_power(poly: &mut IntPoly, power: usize) -> Result<()> {
    trim(poly);
    if poly.is_empty() {
        return Ok(());
    }
    let len = poly.len();
    if len <= power {
        return Err(Error::NonPolynomialQuotient(format!(
            "degree {} numerator is not divisible by 1 - z^{power}",
            len - 1
        )));
    }
    for k in power..len {
        let (lo, hi) = poly.split_at_mut(k);
        hi[0] += &lo[k - power];
    }
    let quotient_len = len - power;
    if let Some(k) = (quotient_len..len).find(|&k| !poly[k].is_zero()) {
        return Err(Error::NonPolynomialQuotient(format!(
            "division by 1 - z^{power} leaves a remainder (series term z^{k} nonzero)"
        )));
    }
    poly.truncate(quotient_len);
    Ok(())
}

fn trim(poly: &mut IntPoly) {
    while poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
    }
}

fn into_counts(poly: IntPoly) -> Result<Vec<BigUint>> {
    poly.into_iter()
        .enumerate()
        .map(|(index, c)| match c.sign() {
            Sign::Minus => Err(Error::NegativeCoefficient {
                index,
                value: c.to_f64().unwrap_or(f64::NEG_INFINITY),
            }),
            _ => Ok(c.into_parts().1),
        })
        .collect()
}

/// Exact coefficients of `f(z) = prod_j (1 - z^{b_j}) / (1 - z^{a_j})`, as
/// integer weights whose total is `f(1) = prod_j b_j / a_j`.
///
/// Pairs with `a | b` are applied directly as geometric sums; the remaining
/// numerators are multiplied out and then divided exactly by the remaining
/// denominators.
pub fn product_form_coefficients(spec: &ProductFormSpec) -> Result<Vec<BigUint>> {
    spec.degree()?;
    let mut poly: IntPoly = vec![BigInt::one()];
    let mut rest = Vec::new();
    for &(a, b) in spec.pairs() {
        if b % a == 0 {
            mul_geometric(&mut poly, a as usize, (b / a) as usize);
        } else {
            rest.push((a as usize, b as usize));
        }
    }
    for &(_, b) in &rest {
        mul_one_minus_power(&mut poly, b);
    }
    for &(a, _) in &rest {
        div_one_minus_power(&mut poly, a)?;
    }
    trim(&mut poly);
    into_counts(poly)
}

/// Exact rational PMF of a product-form generating function.
pub fn expand_pmf_exact(spec: &ProductFormSpec) -> Result<Pmf> {
    Pmf::from_counts(product_form_coefficients(spec)?)
}

/// Exact expansion of `prod_k (z + m_k) / (1 + m_k)` when every root is a
/// non-positive integer `-m_k`; `None` when some root is not.
pub fn expand_integer_roots(pgf: &RootedPgf) -> Option<Result<Pmf>> {
    let mut shifts = Vec::with_capacity(pgf.degree());
    for r in pgf.roots() {
        let z = r.value();
        if z.im != 0.0 || z.re.fract() != 0.0 || z.re > 0.0 || -z.re > u32::MAX as f64 {
            return None;
        }
        shifts.push((-z.re) as u32);
    }
    let mut counts: Vec<BigUint> = vec![BigUint::one()];
    for m in shifts {
        counts.push(BigUint::zero());
        for k in (0..counts.len()).rev() {
            let (lo, hi) = counts.split_at_mut(k);
            let cur = &mut hi[0];
            *cur *= m;
            if k > 0 {
                *cur += &lo[k - 1];
            }
        }
    }
    Some(Pmf::from_counts(counts))
}
