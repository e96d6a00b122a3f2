//! Verification records: one row per `(family, n)` holding the exact distance,
//! the bounds that apply to its root class, and the pass flags.

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Job, JobSource, SweepConfig, DEFAULT_ESSEEN_STEPS};
use super::{default_esseen_t, DegreeCaps, Instance, Mode};
use crate::certificate::{
    bound_cyclotomic, bound_generic, bound_real_rooted, constants, kappa_delta_inequality,
    quadratic_certificate, DEFAULT_GRID_POINTS,
};
use crate::cumulants::cumulant_summary;
use crate::distance::{esseen_bound, kolmogorov_distance, Standardized};
use crate::error::{Error, Result};
use crate::pgf::RootClass;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationRecord {
    pub family: String,
    pub n: u64,
    pub degree: usize,
    pub class: String,
    pub mu: f64,
    pub sigma: f64,
    pub kappa: f64,
    pub delta: f64,
    pub ks_exact: f64,
    /// `c1 / sigma`, real-rooted instances only.
    pub bound_i: Option<f64>,
    /// `c2 |kappa|^{1/4} / sigma`, root-unitary instances only.
    pub bound_ii: Option<f64>,
    pub bound_generic: f64,
    /// Esseen bound at `T = sigma delta / 2`.
    pub esseen: f64,
    pub certificate_pass: bool,
    pub inequalities_pass: bool,
    pub param: String,
    pub exact_pmf: bool,
    pub sigma2: f64,
    pub kappa_over_sigma4: f64,
    /// `ks_exact * sigma`, to compare against `c1`.
    pub ks_sigma_ratio: Option<f64>,
    /// `ks_exact * sigma / |kappa|^{1/4}`, to compare against `c2`.
    pub ks_kappa_ratio: Option<f64>,
    pub certificate_max_ratio: f64,
    pub certificate_a: f64,
    pub esseen_t4: Option<f64>,
    pub esseen_t8: Option<f64>,
}

impl VerificationRecord {
    pub fn passed(&self) -> bool {
        self.certificate_pass && self.inequalities_pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub grid_points: usize,
    pub esseen_steps: usize,
    pub t_sweep: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            grid_points: DEFAULT_GRID_POINTS,
            esseen_steps: DEFAULT_ESSEEN_STEPS,
            t_sweep: false,
        }
    }
}

/// Computes every column of a record for one instance.
///
/// `inequalities_pass` requires `ks_exact` below the generic bound, below the
/// Esseen bound, and below the class bound; root-unitary instances must also
/// have `kappa < 0` and satisfy the angle inequality.
pub fn verify(
    family: &str,
    n: u64,
    param: &str,
    inst: &Instance,
    opts: VerifyOptions,
) -> Result<VerificationRecord> {
    let summary = cumulant_summary(&inst.pgf);
    if summary.is_degenerate() {
        return Err(Error::DegenerateVariance(summary.sigma2));
    }
    let sigma = summary.sigma();
    let class = inst.pgf.classify();
    let ks = kolmogorov_distance(&inst.pmf, summary.mu, sigma)?;

    let bound_i = class.is_real_rooted().then(|| bound_real_rooted(sigma)).transpose()?;
    let bound_ii = class
        .is_cyclotomic()
        .then(|| bound_cyclotomic(sigma, summary.kappa))
        .transpose()?;
    let generic = bound_generic(sigma, summary.delta)?;

    let cf = Standardized::new(inst, summary.mu, sigma);
    let t_full = default_esseen_t(sigma, summary.delta);
    let esseen = esseen_bound(&cf, t_full, opts.esseen_steps)?;
    let (esseen_t4, esseen_t8) = if opts.t_sweep {
        (
            Some(esseen_bound(&cf, t_full / 2.0, opts.esseen_steps)?),
            Some(esseen_bound(&cf, t_full / 4.0, opts.esseen_steps)?),
        )
    } else {
        (None, None)
    };

    let (certificate_pass, certificate_max_ratio, certificate_a) =
        match quadratic_certificate(&inst.pgf, &summary, opts.grid_points) {
            Ok(cert) => (cert.pass, cert.grid_max_ratio, cert.a),
            Err(Error::UnsupportedRootClass(_)) => (false, f64::NAN, f64::NAN),
            Err(e) => return Err(e),
        };

    let mut ok = ks <= generic && ks <= esseen;
    if let Some(b) = bound_i {
        ok &= ks <= b;
    }
    if let Some(b) = bound_ii {
        ok &= ks <= b && summary.kappa < 0.0 && kappa_delta_inequality(summary.kappa, &inst.pgf.angles());
    }
    if class.class == RootClass::General {
        ok = false;
    }

    let kappa_root = summary.kappa.abs().powf(0.25);
    Ok(VerificationRecord {
        family: family.to_string(),
        n,
        degree: inst.pgf.degree(),
        class: class.class.to_string(),
        mu: summary.mu,
        sigma,
        kappa: summary.kappa,
        delta: summary.delta,
        ks_exact: ks,
        bound_i,
        bound_ii,
        bound_generic: generic,
        esseen,
        certificate_pass,
        inequalities_pass: ok,
        param: param.to_string(),
        exact_pmf: inst.pmf.is_exact(),
        sigma2: summary.sigma2,
        kappa_over_sigma4: summary.kappa / (summary.sigma2 * summary.sigma2),
        ks_sigma_ratio: bound_i.map(|_| ks * sigma),
        ks_kappa_ratio: bound_ii.and_then(|_| (kappa_root > 0.0).then(|| ks * sigma / kappa_root)),
        certificate_max_ratio,
        certificate_a,
        esseen_t4,
        esseen_t8,
    })
}

fn run_job(job: &Job, mode: Mode, caps: DegreeCaps, opts: VerifyOptions) -> Result<VerificationRecord> {
    let inst = match &job.source {
        JobSource::Roots(pgf) => Instance::from_pgf(pgf.clone(), mode, caps)?,
        JobSource::Product(spec) => Instance::from_product(spec.clone(), mode, caps)?,
    };
    verify(job.family, job.n, &job.param, &inst, opts)
}

/// One record per job, ordered by `(family, n)` with ties kept in config order.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<VerificationRecord>> {
    constants();
    let jobs = config.jobs()?;
    let opts = VerifyOptions {
        grid_points: config.grid_points,
        esseen_steps: config.esseen.steps,
        t_sweep: config.esseen.t_sweep,
    };
    let mut records = jobs
        .par_iter()
        .map(|job| {
            run_job(job, config.mode, config.caps, opts).map_err(|e| {
                Error::config(format!("{}(n = {}{})", job.family, job.n, param_suffix(&job.param)), e.to_string())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| a.family.cmp(&b.family).then(a.n.cmp(&b.n)));
    Ok(records)
}

fn param_suffix(param: &str) -> String {
    if param.is_empty() {
        String::new()
    } else {
        format!(", {param}")
    }
}
