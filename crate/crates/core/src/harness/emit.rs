//! CSV and JSON emission of verification records.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::record::VerificationRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Frozen CSV header; columns follow the [`VerificationRecord`] field order.
pub const CSV_HEADER: &str = "family,n,degree,class,mu,sigma,kappa,delta,ks_exact,\
bound_i,bound_ii,bound_generic,esseen,certificate_pass,inequalities_pass,\
param,exact_pmf,sigma2,kappa_over_sigma4,ks_sigma_ratio,ks_kappa_ratio,\
certificate_max_ratio,certificate_a,esseen_t4,esseen_t8";

/// `x` with 12 significant digits, trailing zeros removed, in scientific
/// notation outside `[1e-5, 1e12)`.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_sig12).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_row(r: &VerificationRecord) -> String {
    [
        csv_field(&r.family),
        r.n.to_string(),
        r.degree.to_string(),
        r.class.clone(),
        format_sig12(r.mu),
        format_sig12(r.sigma),
        format_sig12(r.kappa),
        format_sig12(r.delta),
        format_sig12(r.ks_exact),
        opt(r.bound_i),
        opt(r.bound_ii),
        format_sig12(r.bound_generic),
        format_sig12(r.esseen),
        r.certificate_pass.to_string(),
        r.inequalities_pass.to_string(),
        csv_field(&r.param),
        r.exact_pmf.to_string(),
        format_sig12(r.sigma2),
        format_sig12(r.kappa_over_sigma4),
        opt(r.ks_sigma_ratio),
        opt(r.ks_kappa_ratio),
        format_sig12(r.certificate_max_ratio),
        format_sig12(r.certificate_a),
        opt(r.esseen_t4),
        opt(r.esseen_t8),
    ]
    .join(",")
}

pub fn emit_to_string(records: &[VerificationRecord], format: Format) -> Result<String> {
    if records.is_empty() {
        return Err(Error::InvalidParameter("no records to emit".into()));
    }
    Ok(match format {
        Format::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for r in records {
                out.push_str(&csv_row(r));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records).map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            s
        }
    })
}

pub fn emit(records: &[VerificationRecord], format: Format, path: &Path) -> Result<()> {
    std::fs::write(path, emit_to_string(records, format)?)?;
    Ok(())
}
