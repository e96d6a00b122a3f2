//! Experiment plumbing: pgf documents, analysed instances, sweeps and emission.

pub mod config;
pub mod emit;
pub mod record;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::ProductFormSpec;
use crate::pgf::{expand_integer_roots, expand_pmf, expand_pmf_exact, make_pgf};
use crate::pgf::{CharacteristicFunction, Pmf, RootedPgf};

pub use config::{EsseenPolicy, FamilyRun, SweepConfig};
pub use emit::{emit, emit_to_string, format_sig12, Format, CSV_HEADER};
pub use record::{run_sweep, verify, VerificationRecord, VerifyOptions};

/// A root multiset `{"roots": [[re, im], ...]}` or a product form
/// `{"product": [[a, b], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum PgfDocument {
    Roots(Vec<[f64; 2]>),
    Product(Vec<[u64; 2]>),
}

impl PgfDocument {
    pub fn from_pgf(pgf: &RootedPgf) -> Self {
        PgfDocument::Roots(
            pgf.roots()
                .iter()
                .map(|r| [r.value().re, r.value().im])
                .collect(),
        )
    }

    pub fn from_product(spec: &ProductFormSpec) -> Self {
        PgfDocument::Product(spec.pairs().iter().map(|&(a, b)| [a, b]).collect())
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::config(format!("line {}, column {}", e.line(), e.column()), e.to_string())
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents always serialize")
    }
}

/// How PMFs are expanded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Exact for product forms and integer roots within the exact cap, float otherwise.
    #[default]
    Auto,
    Exact,
    Float,
}

/// Desk-scale degree limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DegreeCaps {
    pub exact: usize,
    pub float: usize,
}

impl Default for DegreeCaps {
    fn default() -> Self {
        DegreeCaps {
            exact: 20_000,
            float: 10_000,
        }
    }
}

/// A generating function together with its expanded PMF.
#[derive(Debug, Clone)]
pub struct Instance {
    pub pgf: RootedPgf,
    pub product: Option<ProductFormSpec>,
    pub pmf: Pmf,
}

impl Instance {
    pub fn from_pgf(pgf: RootedPgf, mode: Mode, caps: DegreeCaps) -> Result<Self> {
        let d = pgf.degree();
        let float = |pgf: &RootedPgf| {
            if d > caps.float {
                return Err(cap_error("float", d, caps.float));
            }
            expand_pmf(pgf)
        };
        let pmf = match mode {
            Mode::Float => float(&pgf)?,
            Mode::Exact => {
                if d > caps.exact {
                    return Err(cap_error("exact", d, caps.exact));
                }
                expand_integer_roots(&pgf).ok_or_else(|| {
                    Error::InvalidParameter(
                        "exact mode needs non-positive integer roots or a product form".into(),
                    )
                })??
            }
            Mode::Auto => match (d <= caps.exact).then(|| expand_integer_roots(&pgf)).flatten() {
                Some(pmf) => pmf?,
                None => float(&pgf)?,
            },
        };
        Ok(Instance {
            pgf,
            product: None,
            pmf,
        })
    }

    pub fn from_product(spec: ProductFormSpec, mode: Mode, caps: DegreeCaps) -> Result<Self> {
        let d = spec.degree()?;
        let pgf = spec.to_pgf()?;
        let use_exact = match mode {
            Mode::Exact => true,
            Mode::Float => false,
            Mode::Auto => d <= caps.exact,
        };
        let pmf = if use_exact {
            if d > caps.exact {
                return Err(cap_error("exact", d, caps.exact));
            }
            expand_pmf_exact(&spec)?
        } else {
            if d > caps.float {
                return Err(cap_error("float", d, caps.float));
            }
            expand_pmf(&pgf)?
        };
        Ok(Instance {
            pgf,
            product: Some(spec),
            pmf,
        })
    }

    pub fn from_document(doc: &PgfDocument, mode: Mode, caps: DegreeCaps) -> Result<Self> {
        match doc {
            PgfDocument::Roots(pts) => {
                let zs: Vec<Complex64> = pts.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
                Self::from_pgf(make_pgf(&zs)?, mode, caps)
            }
            PgfDocument::Product(pairs) => {
                let spec = ProductFormSpec::new(pairs.iter().map(|&[a, b]| (a, b)).collect())?;
                Self::from_product(spec, mode, caps)
            }
        }
    }
}

fn cap_error(kind: &str, d: usize, cap: usize) -> Error {
    Error::InvalidParameter(format!("degree {d} exceeds the {kind} cap {cap}"))
}

impl CharacteristicFunction for Instance {
    /// Sine-ratio closed form for product forms away from its singular points,
    /// the root product otherwise.
    fn cf(&self, t: f64) -> Complex64 {
        self.product
            .as_ref()
            .and_then(|spec| spec.cf_closed_form(t))
            .unwrap_or_else(|| self.pgf.cf(t))
    }
}

/// Default Esseen truncation `T = sigma delta / 2`.
pub fn default_esseen_t(sigma: f64, delta: f64) -> f64 {
    sigma * delta.min(PI) / 2.0
}
