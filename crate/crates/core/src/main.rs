use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use rooted_clt::certificate::{
    bound_cyclotomic, bound_generic, bound_real_rooted, constants, quadratic_certificate,
    DEFAULT_GRID_POINTS,
};
use rooted_clt::cumulants::cumulant_summary;
use rooted_clt::distance::{esseen_bound, kolmogorov_distance, Standardized};
use rooted_clt::families::{bernoulli_sum, binomial, gaussian_binomial, mahonian, stirling_cycles};
use rooted_clt::harness::config::DEFAULT_ESSEEN_STEPS;
use rooted_clt::harness::{
    default_esseen_t, emit, emit_to_string, run_sweep, DegreeCaps, Format, Instance, Mode,
    PgfDocument, SweepConfig,
};
use rooted_clt::{Error, Result};

#[derive(Parser)]
#[command(name = "rooted-clt", version, about = "Normal approximation bounds from generating-function roots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sum of independent Bernoulli variables with the given probabilities.
    Bernoulli {
        #[arg(required = true)]
        probs: Vec<f64>,
    },
    /// Binomial(n, p).
    Binomial {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Number of cycles of a uniform permutation of n elements.
    Stirling {
        #[arg(long)]
        n: usize,
    },
    /// Number of inversions of a uniform permutation of n elements.
    Mahonian {
        #[arg(long)]
        n: usize,
    },
    /// Normalized Gaussian binomial coefficient [n choose k]_q.
    Qbinom {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Expand the PMF of a pgf document.
    Pmf(InputArgs),
    /// Root-formula cumulants of a pgf document.
    Cumulants(InputArgs),
    /// Kolmogorov distance of the standardized variable to the standard normal.
    Ks(InputArgs),
    /// Numeric Esseen smoothing bound.
    Esseen {
        #[command(flatten)]
        input: InputArgs,
        /// Truncation point; defaults to sigma delta / 2.
        #[arg(long = "T")]
        t: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_ESSEEN_STEPS)]
        steps: usize,
    },
    /// Quadratic certificate and the explicit bounds.
    Certify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
    },
    /// Run a sweep configuration and emit verification records.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output file; the config's `out`, else standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Args)]
struct InputArgs {
    /// pgf JSON document; standard input when omitted or `-`.
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Auto,
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Auto => Mode::Auto,
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

impl InputArgs {
    fn load(&self) -> Result<Instance> {
        let text = match &self.input {
            Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)?,
            _ => {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s)?;
                s
            }
        };
        Instance::from_document(&PgfDocument::parse(&text)?, self.mode.into(), DegreeCaps::default())
    }
}

fn print(value: &serde_json::Value) -> Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "{value}")?;
    Ok(())
}

/// `Ok(true)` when every pass flag held.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Bernoulli { probs } => print_doc(PgfDocument::from_pgf(&bernoulli_sum(&probs)?)),
        Command::Binomial { n, p } => print_doc(PgfDocument::from_pgf(&binomial(n, p)?)),
        Command::Stirling { n } => print_doc(PgfDocument::from_pgf(&stirling_cycles(n)?)),
        Command::Mahonian { n } => print_doc(PgfDocument::from_product(&mahonian(n)?)),
        Command::Qbinom { n, k } => print_doc(PgfDocument::from_product(&gaussian_binomial(n, k)?)),
        Command::Pmf(input) => {
            let inst = input.load()?;
            print(&json!(inst.pmf.to_strings()))?;
            Ok(true)
        }
        Command::Cumulants(input) => {
            let inst = input.load()?;
            let s = cumulant_summary(&inst.pgf);
            print(&json!({
                "mu": s.mu,
                "sigma2": s.sigma2,
                "kappa": s.kappa,
                "delta": s.delta,
                "class": inst.pgf.classify().class.as_str(),
            }))?;
            Ok(true)
        }
        Command::Ks(input) => {
            let inst = input.load()?;
            let s = cumulant_summary(&inst.pgf);
            let ks = kolmogorov_distance(&inst.pmf, s.mu, s.sigma())?;
            print(&json!({"ks": ks, "mu": s.mu, "sigma": s.sigma()}))?;
            Ok(true)
        }
        Command::Esseen { input, t, steps } => {
            let inst = input.load()?;
            let s = cumulant_summary(&inst.pgf);
            if s.is_degenerate() {
                return Err(Error::DegenerateVariance(s.sigma2));
            }
            let t = t.unwrap_or_else(|| default_esseen_t(s.sigma(), s.delta));
            let cf = Standardized::new(&inst, s.mu, s.sigma());
            let bound = esseen_bound(&cf, t, steps)?;
            print(&json!({"esseen": bound, "T": t, "steps": steps, "mu": s.mu, "sigma": s.sigma()}))?;
            Ok(true)
        }
        Command::Certify { input, grid_points } => {
            let inst = input.load()?;
            let s = cumulant_summary(&inst.pgf);
            let cert = quadratic_certificate(&inst.pgf, &s, grid_points)?;
            let sigma = s.sigma();
            let class = inst.pgf.classify();
            let theorem = if class.is_real_rooted() {
                bound_real_rooted(sigma)?
            } else {
                bound_cyclotomic(sigma, s.kappa)?
            };
            let generic = bound_generic(sigma, s.delta)?;
            let ks = kolmogorov_distance(&inst.pmf, s.mu, sigma)?;
            print(&json!({
                "A": cert.a,
                "C": cert.c,
                "grid_max_ratio": cert.grid_max_ratio,
                "pass": cert.pass,
                "bound_generic": generic,
                "bound_theorem": theorem,
                "ks_exact": ks,
            }))?;
            Ok(cert.pass && ks <= generic && ks <= theorem)
        }
        Command::Sweep { config, out, format } => {
            let cfg = SweepConfig::from_file(&config)?;
            let records = run_sweep(&cfg)?;
            let format = format.or(cfg.format).unwrap_or(Format::Csv);
            match out.or_else(|| cfg.out.as_ref().map(PathBuf::from)) {
                Some(path) => emit(&records, format, &path)?,
                None => io::stdout().lock().write_all(emit_to_string(&records, format)?.as_bytes())?,
            }
            Ok(records.iter().all(|r| r.passed()))
        }
    }
}

fn print_doc(doc: PgfDocument) -> Result<bool> {
    println!("{}", doc.to_json());
    Ok(true)
}

fn main() -> ExitCode {
    if let Err(e) = constants().self_test() {
        eprintln!("rooted-clt: {e}");
        return ExitCode::from(2);
    }
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("rooted-clt: {e}");
            ExitCode::from(2)
        }
    }
}
