//! End-to-end acceptance checks, one line per criterion.
//!
//! Run with `cargo test -p ramanujan-core --test acceptance`. Exits nonzero if
//! any criterion fails.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use ramanujan_core::arith::{sigma, SieveTable};
use ramanujan_core::local::{recurrence_residual, sigma0_local, sigma1_local};
use ramanujan_core::rsum::{csum_int, main_term_factor, thm1_report, RealArgument, Stride};
use ramanujan_core::series::{
    divergence_slope, divisor_count_series, fit_line, geometric_grid, partial_sum_trace,
    totient_series, zeta, Abscissa, CoefficientRule,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `∑_{(k,q)=1} cos(2πkn/q)`, with `kn mod q` reduced first.
fn naive_int(q: u64, n: u64) -> f64 {
    (1..=q)
        .filter(|&k| gcd(k, q) == 1)
        .map(|k| (TAU * ((k * n) % q) as f64 / q as f64).cos())
        .sum()
}

/// Möbius function by trial division.
fn brute_mobius(mut n: u64) -> i64 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

fn sigma_f64(k: u32, n: u64) -> f64 {
    sigma(k, n).unwrap().to_string().parse().unwrap()
}

fn exact_oracle() -> Outcome {
    let start = Instant::now();
    let mut mismatches = 0;
    let mut worst: f64 = 0.0;
    for q in 1..=512u64 {
        for n in 0..=256u64 {
            let direct = naive_int(q, n);
            let closed = csum_int(q, n as i64, None).unwrap();
            worst = worst.max((direct - direct.round()).abs());
            if direct.round() as i64 != closed {
                mismatches += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches == 0 && worst < 1e-8 && elapsed < Duration::from_secs(30),
        format!("closed form vs direct sum, q<=512, n<=256: {mismatches} mismatches, max deviation {worst:.2e}, {elapsed:.1?}"),
    )
}

fn sigma1_bound() -> Outcome {
    let mut violations = 0;
    for q in 1..=512u64 {
        for n in 1..=256u64 {
            let c = csum_int(q, n as i64, None).unwrap();
            if c.unsigned_abs() as f64 > sigma_f64(1, n) {
                violations += 1;
            }
        }
    }
    outcome(
        violations == 0,
        format!("|c_q(n)| <= sigma_1(n), q<=512, 1<=n<=256: {violations} violations"),
    )
}

fn integer_expansion(table: &SieveTable) -> Outcome {
    let start = Instant::now();
    let q_max = 100_000u64;
    let mut worst_ratio: f64 = 0.0;
    for k in 1..=3u32 {
        for n in 1..=48u64 {
            let x = RealArgument::new(n as f64).unwrap();
            let trace = partial_sum_trace(CoefficientRule::SigmaK(k), &x, &[q_max], table).unwrap();
            let s = trace.last().unwrap().value;
            let exact = sigma_f64(k, n);
            let bound =
                (n as f64).powi(k as i32) * zeta(f64::from(k) + 1.0).unwrap() * sigma_f64(1, n)
                    / (f64::from(k) * (q_max as f64).powi(k as i32));
            worst_ratio = worst_ratio.max((s - exact).norm() / (bound * 1.001));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst_ratio <= 1.0 && elapsed < Duration::from_secs(120),
        format!("sigma_k(n) from Q=1e5 partial sums, n<=48, k=1..3: worst error/bound {worst_ratio:.3}, {elapsed:.1?}"),
    )
}

fn divisor_count_dirichlet(table: &SieveTable) -> Outcome {
    let s = divisor_count_series(2, 1_000_000, table).unwrap();
    let z2 = zeta(2.0).unwrap();
    let target = z2 * z2;
    let tolerance = 2.0 * ((1e6f64).ln() + 2.0) / 1e6;
    let error = (s - target).abs();
    outcome(
        error <= tolerance,
        format!("sum sigma_0(q)/q^2 to 1e6 = {s:.9}, zeta(2)^2 = {target:.9}, error {error:.2e} <= {tolerance:.2e}"),
    )
}

fn totient_dirichlet(table: &SieveTable) -> Outcome {
    let s = totient_series(3, 1_000_000, table).unwrap();
    let target = zeta(2.0).unwrap() / zeta(3.0).unwrap();
    let error = (s - target).abs();
    outcome(
        error <= 1e-5,
        format!("sum phi(q)/q^3 to 1e6 = {s:.9}, zeta(2)/zeta(3) = {target:.9}, error {error:.2e}"),
    )
}

fn residual_stability(table: &SieveTable) -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for x in [0.5, 1.3, std::f64::consts::SQRT_2, 10.7] {
        let arg = RealArgument::new(x).unwrap();
        let q_min = (TAU * x).floor() as u64 + 1;
        let report = thm1_report(&arg, q_min, 100_000, &Stride::All, table).unwrap();
        let early = report.max_ratio(q_min..=10_000).unwrap();
        let late = report.max_ratio(10_001..=100_000).unwrap();
        pass &= late <= 2.0 * early;
        parts.push(format!("x={x:.4}: {late:.3}/{early:.3}"));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(180);
    outcome(
        pass,
        format!(
            "residual/sigma_0 late vs early max ({}), {elapsed:.1?}",
            parts.join(", ")
        ),
    )
}

fn sigma1_divergence(table: &SieveTable) -> Outcome {
    let x = RealArgument::new(0.5).unwrap();
    let grid = geometric_grid(1_000, 1_000_000, 12).unwrap();
    let fit = divergence_slope(CoefficientRule::SigmaK(1), &x, &grid, table).unwrap();
    let expected = Complex64::new(0.0, 1.0 / PI);
    let relative = (fit.slope - expected).norm() / expected.norm();
    let rms_limit = 0.15 * (fit.slope * (1e3f64).ln()).norm();
    outcome(
        relative <= 0.10 && fit.rms_residual <= rms_limit,
        format!(
            "sigma:1 at x=0.5 vs log Q: slope {:.4}{:+.4}i (expected {:.4}i), relative error {relative:.3}, rms {:.3e} <= {rms_limit:.3e}",
            fit.slope.re, fit.slope.im, expected.im, fit.rms_residual
        ),
    )
}

fn hardy_growth(table: &SieveTable) -> Outcome {
    let x = RealArgument::new(0.5).unwrap();
    let grid = geometric_grid(1_000, 100_000, 12).unwrap();
    let trace = partial_sum_trace(CoefficientRule::ZeroHardy, &x, &grid, table).unwrap();
    let fit = fit_line(Abscissa::Q, &trace).unwrap();
    let expected = main_term_factor(&x);
    let relative = (fit.slope - expected).norm() / expected.norm();
    outcome(
        relative <= 0.05,
        format!(
            "zero-hardy at x=0.5 vs Q: slope {:.4}{:+.4}i (expected {:.4}{:+.4}i), relative error {relative:.4}",
            fit.slope.re, fit.slope.im, expected.re, expected.im
        ),
    )
}

fn mobius_zero(table: &SieveTable) -> Outcome {
    let mut brute = 0.0;
    let mut sieve = 0.0;
    let mut disagreements = 0;
    for q in 1..=1_000_000u64 {
        let mu = brute_mobius(q);
        if mu != i64::from(table.mobius(q).unwrap()) {
            disagreements += 1;
        }
        brute += mu as f64 / q as f64;
        sieve += f64::from(table.mobius(q).unwrap()) / q as f64;
    }
    outcome(
        disagreements == 0 && sieve.abs() <= 0.05,
        format!("sum mu(q)/q to 1e6 = {sieve:.7} (trial-division oracle {brute:.7}, {disagreements} disagreements)"),
    )
}

fn recurrence_identities() -> Outcome {
    let start = Instant::now();
    let mut ok = 0;
    let mut total = 0;
    for alpha in 2..=2000i64 {
        for k in 0..=4 {
            total += 1;
            if recurrence_residual(alpha, k).unwrap() == 0.into() {
                ok += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        ok == total && elapsed < Duration::from_secs(60),
        format!(
            "divisor recurrence, 2<=alpha<=2000, 0<=k<=4: {ok}/{total} exact zeros, {elapsed:.1?}"
        ),
    )
}

fn locality(table: &SieveTable) -> Outcome {
    let at = |x: f64| {
        let x = RealArgument::new(x).unwrap();
        sigma1_local(&x, 6, 1e-6, table).unwrap()
    };
    let six = at(6.0);
    let two = at(2.0);
    let four = at(4.0);
    let count = sigma0_local(&RealArgument::new(6.0).unwrap(), 6, 1e-6, table).unwrap();
    let within = |v: Complex64, err: f64, target: f64| err <= 1e-6 && (v - target).norm() <= err;
    let pass = within(six.value, six.certified_error, 12.0)
        && within(two.value, two.certified_error, 3.0)
        && (four.value.re - 25.0 / 3.0).abs() <= 1e-6
        && four.value.im.abs() <= 1e-6
        && (four.value.re - 7.0).abs() > 1e-6
        && within(count.value, count.certified_error, 4.0);
    outcome(
        pass,
        format!(
            "alpha=6: sigma1 at 6, 2, 4 = {:.9}, {:.9}, {:.9}; sigma0 at 6 = {:.9} (max certified error {:.1e})",
            six.value.re,
            two.value.re,
            four.value.re,
            count.value.re,
            six.certified_error
                .max(two.certified_error)
                .max(four.certified_error)
                .max(count.certified_error)
        ),
    )
}

type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() -> ExitCode {
    let table = SieveTable::new(1_000_000).unwrap();
    let criteria: Vec<(&str, Check)> = vec![
        ("exact oracle", Box::new(exact_oracle)),
        ("sigma_1 bound", Box::new(sigma1_bound)),
        ("integer expansion", Box::new(|| integer_expansion(&table))),
        (
            "divisor-count series",
            Box::new(|| divisor_count_dirichlet(&table)),
        ),
        ("totient series", Box::new(|| totient_dirichlet(&table))),
        (
            "residual stability",
            Box::new(|| residual_stability(&table)),
        ),
        ("sigma_1 divergence", Box::new(|| sigma1_divergence(&table))),
        ("hardy growth", Box::new(|| hardy_growth(&table))),
        ("zero expansion", Box::new(|| mobius_zero(&table))),
        ("recurrence", Box::new(recurrence_identities)),
        ("locality", Box::new(|| locality(&table))),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        if !result.pass {
            failures += 1;
        }
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} {name}: {}", i + 1, result.detail);
    }
    println!("{} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
