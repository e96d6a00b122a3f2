//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rooted_clt::certificate::{
    bound_cyclotomic, bound_generic, bound_real_rooted, constants, kappa_delta_inequality,
    q_derivatives, q_value, quadratic_certificate, stein_tikhomirov_bound,
    unit_circle_identity_check, Constants, SteinTikhomirovInputs,
};
use rooted_clt::cumulants::{cumulant_summary, strophoid_inequality, strophoid_region, CumulantSummary};
use rooted_clt::distance::{esseen_bound, kolmogorov_distance, Standardized};
use rooted_clt::families::{bernoulli_sum, binomial, gaussian_binomial, mahonian, stirling_cycles};
use rooted_clt::harness::{default_esseen_t, DegreeCaps, Instance, Mode};
use rooted_clt::pgf::{expand_pmf_exact, Root, RootedPgf};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * b.abs()
}

struct Case {
    label: String,
    inst: Instance,
    summary: CumulantSummary,
}

fn case(label: String, inst: Instance) -> Case {
    let summary = cumulant_summary(&inst.pgf);
    Case { label, inst, summary }
}

fn real_rooted_cases() -> Vec<Case> {
    let caps = DegreeCaps::default();
    let mut out = Vec::new();
    for n in [10, 100, 1000] {
        let inst = Instance::from_pgf(binomial(n, 0.5).unwrap(), Mode::Auto, caps).unwrap();
        out.push(case(format!("binomial({n}, 1/2)"), inst));
    }
    for n in [10, 100, 1000] {
        let inst = Instance::from_pgf(stirling_cycles(n).unwrap(), Mode::Auto, caps).unwrap();
        out.push(case(format!("stirling_cycles({n})"), inst));
    }
    out
}

fn mahonian_cases() -> Vec<Case> {
    (5..=200)
        .map(|n| {
            let inst = Instance::from_product(mahonian(n).unwrap(), Mode::Exact, DegreeCaps::default()).unwrap();
            case(format!("mahonian({n})"), inst)
        })
        .collect()
}

fn ks(c: &Case) -> f64 {
    kolmogorov_distance(&c.inst.pmf, c.summary.mu, c.summary.sigma()).unwrap()
}

/// Inversion counts of all permutations of `0..n`, by Heap's algorithm.
fn brute_inversions(n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n * n.saturating_sub(1) / 2 + 1];
    let mut perm: Vec<usize> = (0..n).collect();
    let inversions = |p: &[usize]| (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    counts[inversions(&perm)] += 1;
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            counts[inversions(&perm)] += 1;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    counts
}

fn criterion_1() -> Outcome {
    for n in 2..=8usize {
        let pmf = expand_pmf_exact(&mahonian(n).unwrap()).map_err(|e| e.to_string())?;
        let brute = brute_inversions(n);
        let total: u64 = brute.iter().sum();
        check(pmf.len() == brute.len(), || format!("n = {n}: support length {} vs {}", pmf.len(), brute.len()))?;
        for (k, &count) in brute.iter().enumerate() {
            let expect = BigRational::new(count.into(), total.into());
            let got = pmf.exact_probability(k).ok_or("PMF is not exact")?;
            check(got == expect, || format!("n = {n}, k = {k}: {got} vs {expect}"))?;
        }
    }
    Ok("mahonian(2..=8) equals brute-force inversion counts".into())
}

fn cumulant_match(label: &str, pgf: &RootedPgf, inst: &Instance) -> Result<(), String> {
    let s = cumulant_summary(pgf);
    let m = inst.pmf.moments();
    for (name, root, pmf) in [("mu", s.mu, m.mu), ("sigma2", s.sigma2, m.sigma2), ("kappa", s.kappa, m.kappa)] {
        check(rel_close(root, pmf, 1e-9), || format!("{label}: {name} roots {root} vs pmf {pmf}"))?;
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let caps = DegreeCaps::default();
    let mut count = 0;
    for n in [10, 50, 200] {
        for p in [0.2, 0.5, 0.9] {
            let pgf = binomial(n, p).unwrap();
            let inst = Instance::from_pgf(pgf.clone(), Mode::Auto, caps).map_err(|e| e.to_string())?;
            cumulant_match(&format!("binomial({n}, {p})"), &pgf, &inst)?;
            count += 1;
        }
    }
    for n in 1..=100 {
        let pgf = stirling_cycles(n).unwrap();
        let inst = Instance::from_pgf(pgf.clone(), Mode::Exact, caps).map_err(|e| e.to_string())?;
        cumulant_match(&format!("stirling_cycles({n})"), &pgf, &inst)?;
        count += 1;
    }
    for n in 2..=100 {
        let inst = Instance::from_product(mahonian(n).unwrap(), Mode::Exact, caps).map_err(|e| e.to_string())?;
        cumulant_match(&format!("mahonian({n})"), &inst.pgf, &inst)?;
        count += 1;
    }
    for n in 2..=40 {
        for k in 1..n {
            let inst = Instance::from_product(gaussian_binomial(n, k).unwrap(), Mode::Exact, caps)
                .map_err(|e| e.to_string())?;
            cumulant_match(&format!("gaussian_binomial({n}, {k})"), &inst.pgf, &inst)?;
            count += 1;
        }
    }
    Ok(format!("{count} instances match to 1e-9 relative"))
}

fn criterion_3(cases: &[Case]) -> Outcome {
    let k = constants();
    check(k.c1 < 169.0, || format!("c1 = {}", k.c1))?;
    let mut worst: f64 = 0.0;
    for c in cases {
        let d = ks(c);
        let b = bound_real_rooted(c.summary.sigma()).map_err(|e| e.to_string())?;
        check(c.inst.pmf.is_exact(), || format!("{}: PMF not exact", c.label))?;
        check(d <= b, || format!("{}: ks {d} > c1/sigma {b}", c.label))?;
        worst = worst.max(d / b);
    }
    Ok(format!("{} instances, max ks / bound = {worst:.3e}", cases.len()))
}

fn criterion_4(cases: &[Case]) -> Outcome {
    let mut worst: f64 = 0.0;
    for (c, n) in cases.iter().zip(5..) {
        let s = &c.summary;
        let delta_expect = 2.0 * PI / n as f64;
        check((s.delta - delta_expect).abs() <= 1e-12, || format!("{}: delta {} vs {delta_expect}", c.label, s.delta))?;
        check(s.kappa < 0.0, || format!("{}: kappa = {}", c.label, s.kappa))?;
        check(-s.kappa >= 2.0 / s.delta.powi(4), || format!("{}: |kappa| < 2/delta^4", c.label))?;
        check(kappa_delta_inequality(s.kappa, &c.inst.pgf.angles()), || format!("{}: angle inequality", c.label))?;
        let d = ks(c);
        let b = bound_cyclotomic(s.sigma(), s.kappa).map_err(|e| e.to_string())?;
        check(d <= b, || format!("{}: ks {d} > bound {b}", c.label))?;
        worst = worst.max(d / b);
    }
    Ok(format!("mahonian(5..=200), max ks / bound = {worst:.3e}"))
}

fn criterion_5(real: &[Case], cyclo: &[Case]) -> Outcome {
    for c in real.iter().chain(cyclo) {
        let d = ks(c);
        let b = bound_generic(c.summary.sigma(), c.summary.delta).map_err(|e| e.to_string())?;
        check(d <= b, || format!("{}: ks {d} > c0/(sigma delta) {b}", c.label))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let sigma: f64 = rng.gen_range(0.01..1e4);
        let g = bound_generic(sigma, PI).unwrap();
        let r = bound_real_rooted(sigma).unwrap();
        check((g - r).abs() <= 1e-12 * r.max(1.0), || format!("sigma = {sigma}: {g} vs {r}"))?;
    }
    Ok(format!("{} instances dominated; bound_generic(sigma, pi) = c1/sigma", real.len() + cyclo.len()))
}

fn criterion_6(real: &[Case], cyclo: &[Case]) -> Outcome {
    let mut count = 0;
    let mut worst: f64 = 0.0;
    for c in real.iter().chain(cyclo).filter(|c| c.inst.pgf.degree() <= 500) {
        let cert = quadratic_certificate(&c.inst.pgf, &c.summary, 4096).map_err(|e| e.to_string())?;
        check(cert.grid_max_ratio <= cert.a + 1e-9, || {
            format!("{}: max |alpha|/t^2 = {} > A = {}", c.label, cert.grid_max_ratio, cert.a)
        })?;
        check(cert.pass && cert.points_evaluated == 4096, || format!("{}: {cert:?}", c.label))?;
        worst = worst.max(cert.grid_max_ratio / cert.a);
        count += 1;
    }
    Ok(format!("{count} instances, max ratio / A = {worst:.3e}"))
}

fn derivative_cases() -> Vec<(String, RootedPgf)> {
    let mut out = vec![
        ("binomial(5, 0.3)".to_string(), binomial(5, 0.3).unwrap()),
        ("binomial(12, 0.7)".to_string(), binomial(12, 0.7).unwrap()),
        ("binomial(20, 0.5)".to_string(), binomial(20, 0.5).unwrap()),
        ("bernoulli(0.1, 0.5, 0.8)".to_string(), bernoulli_sum(&[0.1, 0.5, 0.8]).unwrap()),
        ("bernoulli(0.25 x 4, 0.6)".to_string(), bernoulli_sum(&[0.25, 0.25, 0.25, 0.25, 0.6]).unwrap()),
        ("bernoulli(0.05, 0.95)".to_string(), bernoulli_sum(&[0.05, 0.95]).unwrap()),
    ];
    for n in [3, 6, 10, 15] {
        out.push((format!("stirling_cycles({n})"), stirling_cycles(n).unwrap()));
    }
    for n in 3..=8 {
        out.push((format!("mahonian({n})"), mahonian(n).unwrap().to_pgf().unwrap()));
    }
    for (n, k) in [(6, 2), (8, 3), (9, 4), (10, 5)] {
        out.push((format!("gaussian_binomial({n}, {k})"), gaussian_binomial(n, k).unwrap().to_pgf().unwrap()));
    }
    out
}

fn criterion_7() -> Outcome {
    let cases = derivative_cases();
    check(cases.len() == 20, || format!("{} instances", cases.len()))?;
    let h = 1e-6;
    let fd_ok = |approx: Complex64, exact: Complex64| (approx - exact).norm() <= 1e-6 * exact.norm().max(1.0);
    for (label, pgf) in &cases {
        let s = cumulant_summary(pgf);
        let q0 = q_value(pgf, 0.0).map_err(|e| e.to_string())?;
        let d0 = q_derivatives(pgf, 0.0).map_err(|e| e.to_string())?;
        let near = |a: Complex64, b: Complex64| (a - b).norm() <= 1e-9 * b.norm().max(1.0);
        check(near(q0, Complex64::new(0.0, s.mu)), || format!("{label}: Q(0) = {q0}, mu = {}", s.mu))?;
        check(near(d0.d1, Complex64::new(-s.sigma2, 0.0)), || format!("{label}: Q'(0) = {}", d0.d1))?;
        check(near(d0.d3, Complex64::new(s.kappa, 0.0)), || format!("{label}: Q'''(0) = {}", d0.d3))?;
        let delta = s.delta;
        for j in -8..=8 {
            let t = 0.9 * delta * j as f64 / 16.0 + 1e-3;
            let d = q_derivatives(pgf, t).map_err(|e| e.to_string())?;
            let dp = q_derivatives(pgf, t + h).map_err(|e| e.to_string())?;
            let dm = q_derivatives(pgf, t - h).map_err(|e| e.to_string())?;
            let qp = q_value(pgf, t + h).map_err(|e| e.to_string())?;
            let qm = q_value(pgf, t - h).map_err(|e| e.to_string())?;
            check(fd_ok((qp - qm) / (2.0 * h), d.d1), || format!("{label}, t = {t}: Q'"))?;
            check(fd_ok((dp.d1 - dm.d1) / (2.0 * h), d.d2), || format!("{label}, t = {t}: Q''"))?;
            check(fd_ok((dp.d2 - dm.d2) / (2.0 * h), d.d3), || format!("{label}, t = {t}: Q'''"))?;
        }
    }
    Ok(format!("{} instances, 17 points each", cases.len()))
}

fn criterion_8(real: &[Case], cyclo: &[Case]) -> Outcome {
    let mut tightest = f64::INFINITY;
    for c in real.iter().chain(cyclo) {
        let s = &c.summary;
        let t = default_esseen_t(s.sigma(), s.delta);
        let cf = Standardized::new(&c.inst, s.mu, s.sigma());
        let bound = esseen_bound(&cf, t, 4096).map_err(|e| e.to_string())?;
        let d = ks(c);
        check(d <= bound, || format!("{}: ks {d} > esseen {bound}", c.label))?;
        tightest = tightest.min(bound - d);
    }
    Ok(format!("{} instances, min slack {tightest:.3e}", real.len() + cyclo.len()))
}

fn random_zeta(rng: &mut ChaCha8Rng) -> Complex64 {
    match rng.gen_range(0..4) {
        0 => Complex64::from_polar(1.0, rng.gen_range(-PI..PI)),
        1 => Complex64::new(rng.gen_range(-4.0..4.0), 0.0),
        2 => Complex64::from_polar(rng.gen_range(0.0f64..6.0).powi(2) / 4.0, rng.gen_range(-PI..PI)),
        _ => Complex64::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)),
    }
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    while checked < 10_000 {
        let z = random_zeta(&mut rng);
        if z == Complex64::new(1.0, 0.0) {
            continue;
        }
        let region = strophoid_region(z).map_err(|e| e.to_string())?;
        let u = (Complex64::new(1.0, 0.0) - z).inv();
        let v = -z * u * u;
        let re_direct = v.re >= 0.0;
        let im_direct = v.im.abs() <= 1e-9 * v.norm();
        check(region.re_nonneg == re_direct, || format!("zeta = {z}: Re predicate {} vs {v}", region.re_nonneg))?;
        check(region.im_zero == im_direct, || format!("zeta = {z}: Im predicate {} vs {v}", region.im_zero))?;
        if z.re < 2.0 {
            let ineq = strophoid_inequality(z).ok_or("inequality undefined for Re < 2")?;
            check(ineq == re_direct, || format!("zeta = {z}: inequality {ineq} vs {v}"))?;
        }
        checked += 1;
    }
    Ok("10000 samples, zero failures".into())
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut bounded, mut worst) = (0, 0.0f64);
    for i in 0..10_000 {
        let phi = loop {
            let a: f64 = rng.gen_range(-PI..=PI);
            if a != 0.0 {
                break a;
            }
        };
        let r = if i % 2 == 0 { 1.0 } else { rng.gen_range(0.0..3.0) };
        let zeta = Root::new(Complex64::from_polar(r, phi)).map_err(|e| e.to_string())?;
        let phi = zeta.angle();
        let s = if i % 5 == 4 {
            rng.gen_range(-PI..PI)
        } else {
            rng.gen_range(-0.5..0.5) * phi.abs()
        };
        let chk = unit_circle_identity_check(&zeta, s);
        check(chk.residual <= 1e-10, || format!("zeta = {}, s = {s}: residual {}", zeta.value(), chk.residual))?;
        worst = worst.max(chk.residual);
        if s.abs() < phi.abs() / 2.0 {
            bounded += 1;
            check(chk.lower_bound_applies && chk.modulus >= chk.lower_bound, || {
                format!("zeta = {}, s = {s}: {} < {}", zeta.value(), chk.modulus, chk.lower_bound)
            })?;
        }
    }
    Ok(format!("10000 samples, max residual {worst:.2e}, lower bound on {bounded}"))
}

fn criterion_11() -> Outcome {
    Constants::compute().self_test().map_err(|e| e.to_string())?;
    let k = constants();
    check(k.c0 < 531.0 && k.c1 < 169.0 && k.c2 < 447.0, || format!("{k:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let sigma: f64 = rng.gen_range(0.05..1e3);
        let delta: f64 = rng.gen_range(1e-3..PI);
        let a = 5.0 * PI.powi(3) / (2.0 * sigma * delta);
        let c = sigma * delta / 2.0;
        let inputs = SteinTikhomirovInputs { a0: 0.0, a1: a, b0: 0.0, b1: 0.0, b2: 0.0, c };
        let s = (2.0 * a).max(1.0 / c);
        let value = stein_tikhomirov_bound(&inputs, s).map_err(|e| e.to_string())?;
        let direct = 4.0 * a / (3.0 * PI.sqrt()) + 24.0 * s / (PI * (2.0 * PI).sqrt());
        let closed = k.c0 / (sigma * delta);
        check(rel_close(value, direct, 1e-12), || format!("sigma = {sigma}, delta = {delta}: {value} vs {direct}"))?;
        check(rel_close(value, closed, 1e-12), || format!("sigma = {sigma}, delta = {delta}: {value} vs c0/(sigma delta) = {closed}"))?;
    }
    Ok(format!("c0 = {:.4}, c1 = {:.4}, c2 = {:.4}; 100 specializations", k.c0, k.c1, k.c2))
}

fn report(results: &mut Vec<bool>, id: u32, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let outcome = match (outcome, limit) {
        (Ok(msg), Some(lim)) if elapsed > lim => Err(format!("{msg}; took {elapsed:.2?}, limit {lim:?}")),
        (o, _) => o,
    };
    match &outcome {
        Ok(msg) => println!("PASS  {id:>2} {name}: {msg} [{elapsed:.2?}]"),
        Err(msg) => println!("FAIL  {id:>2} {name}: {msg} [{elapsed:.2?}]"),
    }
    results.push(outcome.is_ok());
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let mut results = Vec::new();
    report(&mut results, 1, "oracle PMFs", secs(10), criterion_1);
    report(&mut results, 2, "cumulant oracle", secs(60), criterion_2);

    // building the cases is part of each criterion's runtime budget
    let mut real = Vec::new();
    report(&mut results, 3, "real-rooted bound", secs(60), || {
        real = real_rooted_cases();
        criterion_3(&real)
    });
    let mut cyclo = Vec::new();
    report(&mut results, 4, "root-unitary bound", secs(120), || {
        cyclo = mahonian_cases();
        criterion_4(&cyclo)
    });

    report(&mut results, 5, "generic bound", None, || criterion_5(&real, &cyclo));
    report(&mut results, 6, "quadratic certificate", None, || criterion_6(&real, &cyclo));
    report(&mut results, 7, "derivative chain", None, criterion_7);
    report(&mut results, 8, "Esseen domination", None, || criterion_8(&real, &cyclo));
    report(&mut results, 9, "strophoid property", None, criterion_9);
    report(&mut results, 10, "identity check", None, criterion_10);
    report(&mut results, 11, "constants", None, criterion_11);

    let failed = results.iter().filter(|ok| !**ok).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
