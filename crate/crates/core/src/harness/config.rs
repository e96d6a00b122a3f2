//! JSON sweep configurations.
//!
//! ```json
//! {
//!   "runs": [
//!     {"family": "binomial", "n": [10, 100, 1000], "p": 0.5},
//!     {"family": "mahonian", "n": {"from": 4, "to": 64}},
//!     {"family": "qbinom", "n": {"from": 4, "to": 20, "step": 2}, "k": 2},
//!     {"family": "stirling", "n": [10, 100]},
//!     {"family": "bernoulli", "probs": [0.1, 0.5, 0.9]}
//!   ],
//!   "grid_points": 4096,
//!   "esseen": {"steps": 4096, "t_sweep": true},
//!   "mode": "auto",
//!   "caps": {"exact": 20000, "float": 10000}
//! }
//! ```

use serde::{Deserialize, Serialize};

use super::{DegreeCaps, Mode};
use crate::certificate::DEFAULT_GRID_POINTS;
use crate::error::{Error, Result};
use crate::families::{bernoulli_sum, binomial, gaussian_binomial, mahonian, stirling_cycles};
use crate::families::ProductFormSpec;
use crate::pgf::RootedPgf;

/// Default Simpson panel count for the Esseen integral.
pub const DEFAULT_ESSEEN_STEPS: usize = 4096;

/// Sizes as an explicit list or an inclusive range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sizes {
    List(Vec<u64>),
    Range {
        from: u64,
        to: u64,
        #[serde(default = "one")]
        step: u64,
    },
}

fn one() -> u64 {
    1
}

impl Sizes {
    pub fn values(&self) -> Vec<u64> {
        match *self {
            Sizes::List(ref v) => v.clone(),
            Sizes::Range { from, to, step } => (from..=to).step_by(step.max(1) as usize).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum FamilyRun {
    Bernoulli { probs: Vec<f64> },
    Binomial { n: Sizes, p: f64 },
    Stirling { n: Sizes },
    Mahonian { n: Sizes },
    Qbinom { n: Sizes, k: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EsseenPolicy {
    pub steps: usize,
    /// Also evaluate at `T = sigma delta / 8` and `sigma delta / 4`.
    pub t_sweep: bool,
}

impl Default for EsseenPolicy {
    fn default() -> Self {
        EsseenPolicy {
            steps: DEFAULT_ESSEEN_STEPS,
            t_sweep: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub runs: Vec<FamilyRun>,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    #[serde(default)]
    pub esseen: EsseenPolicy,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub caps: DegreeCaps,
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default)]
    pub format: Option<super::Format>,
}

fn default_grid_points() -> usize {
    DEFAULT_GRID_POINTS
}

/// Where a [`Job`]'s generating function comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum JobSource {
    Roots(RootedPgf),
    Product(ProductFormSpec),
}

/// One `(family, n)` cell of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub family: &'static str,
    pub n: u64,
    /// Extra family parameters, e.g. `p=0.5`.
    pub param: String,
    pub source: JobSource,
}

impl FamilyRun {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyRun::Bernoulli { .. } => "bernoulli",
            FamilyRun::Binomial { .. } => "binomial",
            FamilyRun::Stirling { .. } => "stirling",
            FamilyRun::Mahonian { .. } => "mahonian",
            FamilyRun::Qbinom { .. } => "qbinom",
        }
    }

    fn sizes(&self) -> Option<&Sizes> {
        match self {
            FamilyRun::Bernoulli { .. } => None,
            FamilyRun::Binomial { n, .. }
            | FamilyRun::Stirling { n }
            | FamilyRun::Mahonian { n }
            | FamilyRun::Qbinom { n, .. } => Some(n),
        }
    }

    fn validate(&self, at: &str) -> Result<Vec<u64>> {
        let sizes = match self.sizes() {
            None => vec![0],
            Some(s) => {
                if let Sizes::Range { from, to, step } = *s {
                    if step == 0 {
                        return Err(Error::config(format!("{at}.n.step"), "step must be at least 1"));
                    }
                    if from > to {
                        return Err(Error::config(
                            format!("{at}.n"),
                            format!("empty range: from = {from} exceeds to = {to}"),
                        ));
                    }
                }
                let v = s.values();
                if v.is_empty() {
                    return Err(Error::config(format!("{at}.n"), "empty size list"));
                }
                v
            }
        };
        match self {
            FamilyRun::Bernoulli { probs } => {
                if probs.is_empty() {
                    return Err(Error::config(format!("{at}.probs"), "empty probability list"));
                }
                if probs.iter().all(|&p| p == 1.0) {
                    return Err(Error::config(format!("{at}.probs"), "all probabilities are 1, variance is zero"));
                }
                if let Some(i) = probs.iter().position(|&p| !(p > 0.0 && p <= 1.0)) {
                    return Err(Error::config(format!("{at}.probs[{i}]"), "probability must lie in (0, 1]"));
                }
            }
            FamilyRun::Binomial { p, .. } => {
                if !(*p > 0.0 && *p < 1.0) {
                    return Err(Error::config(format!("{at}.p"), "p must lie in (0, 1)"));
                }
            }
            FamilyRun::Qbinom { k, .. } => {
                if *k == 0 {
                    return Err(Error::config(format!("{at}.k"), "k must be at least 1"));
                }
            }
            FamilyRun::Stirling { .. } | FamilyRun::Mahonian { .. } => {}
        }
        let min_n = match self {
            FamilyRun::Bernoulli { .. } => 0,
            FamilyRun::Binomial { .. } => 1,
            FamilyRun::Stirling { .. } | FamilyRun::Mahonian { .. } => 2,
            FamilyRun::Qbinom { k, .. } => k + 1,
        };
        for (i, &n) in sizes.iter().enumerate() {
            if n < min_n {
                return Err(Error::config(
                    size_location(self, at, i),
                    format!("n = {n} is below the minimum {min_n} for {}", self.name()),
                ));
            }
        }
        Ok(sizes)
    }

    /// Cheap degree formula, checked before any roots are built.
    fn degree(&self, n: u64) -> u64 {
        match self {
            FamilyRun::Bernoulli { probs } => probs.len() as u64,
            FamilyRun::Binomial { .. } | FamilyRun::Stirling { .. } => n,
            FamilyRun::Mahonian { .. } => n * n.saturating_sub(1) / 2,
            FamilyRun::Qbinom { k, .. } => k * n.saturating_sub(*k),
        }
    }

    fn job(&self, n: u64) -> Result<Job> {
        let (param, source) = match self {
            FamilyRun::Bernoulli { probs } => {
                let label = probs.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(";");
                (format!("probs={label}"), JobSource::Roots(bernoulli_sum(probs)?))
            }
            FamilyRun::Binomial { p, .. } => (format!("p={p}"), JobSource::Roots(binomial(n as usize, *p)?)),
            FamilyRun::Stirling { .. } => (String::new(), JobSource::Roots(stirling_cycles(n as usize)?)),
            FamilyRun::Mahonian { .. } => (String::new(), JobSource::Product(mahonian(n as usize)?)),
            FamilyRun::Qbinom { k, .. } => (
                format!("k={k}"),
                JobSource::Product(gaussian_binomial(n as usize, *k as usize)?),
            ),
        };
        let n = match self {
            FamilyRun::Bernoulli { probs } => probs.len() as u64,
            _ => n,
        };
        Ok(Job {
            family: self.name(),
            n,
            param,
            source,
        })
    }
}

fn size_location(run: &FamilyRun, at: &str, i: usize) -> String {
    match run.sizes() {
        Some(Sizes::List(_)) => format!("{at}.n[{i}]"),
        _ => format!("{at}.n"),
    }
}

/// The cap that applies to a job: the exact cap where the exact path will be
/// taken, the float cap otherwise.
fn applicable_cap(source: Option<&JobSource>, mode: Mode, caps: DegreeCaps) -> usize {
    let exact_capable = match source {
        None => true,
        Some(JobSource::Product(_)) => true,
        Some(JobSource::Roots(pgf)) => pgf
            .roots()
            .iter()
            .all(|r| r.value().im == 0.0 && r.value().re.fract() == 0.0),
    };
    match mode {
        Mode::Float => caps.float,
        Mode::Exact => caps.exact,
        Mode::Auto if exact_capable => caps.exact.max(caps.float),
        Mode::Auto => caps.float,
    }
}

impl SweepConfig {
    /// Parses and validates a configuration, locating errors by line and
    /// column for syntax and by field path for content.
    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: SweepConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let at = format!("line {}, column {}", inner.line(), inner.column());
            let location = if path.is_empty() || path == "." {
                at
            } else {
                format!("{path} ({at})")
            };
            Error::config(location, inner.to_string())
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.jobs().map(|_| ())
    }

    /// Expands the runs into jobs, in run order and then size order.
    pub fn jobs(&self) -> Result<Vec<Job>> {
        if self.runs.is_empty() {
            return Err(Error::config("runs", "no runs given"));
        }
        if self.grid_points < 2 {
            return Err(Error::config("grid_points", "at least 2 grid points are needed"));
        }
        if self.esseen.steps < 2 {
            return Err(Error::config("esseen.steps", "at least 2 steps are needed"));
        }
        let mut jobs = Vec::new();
        for (i, run) in self.runs.iter().enumerate() {
            let at = format!("runs[{i}]");
            for (j, n) in run.validate(&at)?.into_iter().enumerate() {
                let here = size_location(run, &at, j);
                let d = run.degree(n) as usize;
                let too_big = |cap: usize| {
                    Error::config(here.clone(), format!("degree {d} at n = {n} exceeds the cap {cap}"))
                };
                // a generous pre-check keeps absurd sizes from being materialized
                let loose = applicable_cap(None, self.mode, self.caps);
                if d > loose {
                    return Err(too_big(loose));
                }
                let job = run.job(n).map_err(|e| Error::config(here.clone(), e.to_string()))?;
                let cap = applicable_cap(Some(&job.source), self.mode, self.caps);
                if d > cap {
                    return Err(too_big(cap));
                }
                jobs.push(job);
            }
        }
        Ok(jobs)
    }
}
