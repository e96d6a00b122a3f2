//! Normal approximation of lattice random variables through the roots of
//! their probability generating functions.
//!
//! A generating function is represented by its root multiset
//! ([`pgf::RootedPgf`]). Cumulants are read off the roots, the Kolmogorov
//! distance to the standard normal law is computed from the exact or
//! floating-point PMF, and explicit Berry–Esseen-type bounds are derived
//! from a quadratic certificate on the logarithmic derivative of the
//! characteristic function.

// `!(x > 0.0)` style checks are how parameters reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificate;
pub mod cumulants;
pub mod distance;
pub mod error;
pub mod families;
pub mod harness;
pub mod pgf;

pub use error::{Error, Result};
