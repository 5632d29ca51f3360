//! Ramanujan sums `c_q(n)` and their real-variable analogue `c̃_q(x)`.
//!
//! `c̃_q(x) = ∑ e^{2πikx/q}` over `1 ≤ k ≤ q` with `gcd(k, q) = 1`. Two
//! evaluators are provided: the direct `O(q)` sum, and the divisor form
//!
//! ```text
//! c̃_q(x) = (1 − e^{2πix}) ∑_{d|q} μ(q/d) / (e^{−2πix/d} − 1)
//! ```
//!
//! which costs `O(2^ω(q))`. Using `1/(e^{−iθ} − 1) = −1/2 + (i/2)·cot(θ/2)`
//! each term reduces to a cotangent of a small, exactly reduced argument.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::ops::RangeInclusive;

use crate::arith::{factorize, gcd, PrimeFactorization, SieveTable};
use crate::error::{domain, precondition, Error, Result};
use crate::sum::ComplexSum;
use crate::{ensure_finite, ComplexValue};

/// `x` counts as an integer when it is within this distance of one.
pub const INTEGER_TOLERANCE: f64 = 1e-12;

/// The divisor form refuses `q` when some `x/d` is this close to a nonzero integer.
pub const DENOMINATOR_TOLERANCE: f64 = 1e-6;

const MAX_ABS_ARGUMENT: f64 = 4_503_599_627_370_496.0; // 2^52

/// A finite real argument classified as integer or not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealArgument {
    x: f64,
    nearest: i64,
    integer: bool,
}

impl RealArgument {
    pub fn new(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(domain!("x must be finite, got {x}"));
        }
        if x.abs() >= MAX_ABS_ARGUMENT {
            return Err(domain!("|x| must be below 2^52, got {x}"));
        }
        let nearest = libm::round(x);
        Ok(Self {
            x,
            nearest: nearest as i64,
            integer: (x - nearest).abs() <= INTEGER_TOLERANCE,
        })
    }

    pub fn value(&self) -> f64 {
        self.x
    }

    pub fn is_integer(&self) -> bool {
        self.integer
    }

    /// The integer `x` stands for, when it is flagged as one.
    pub fn as_integer(&self) -> Option<i64> {
        self.integer.then_some(self.nearest)
    }

    /// `x − round(x)`, exact, in `[−1/2, 1/2]`.
    fn centered_fraction(&self) -> f64 {
        self.x - self.nearest as f64
    }

    fn require_non_integer(&self) -> Result<()> {
        if self.integer {
            Err(Error::IntegerArgument(self.x))
        } else {
            Ok(())
        }
    }
}

impl TryFrom<f64> for RealArgument {
    type Error = Error;

    fn try_from(x: f64) -> Result<Self> {
        Self::new(x)
    }
}

fn cis_turns(t: f64) -> ComplexValue {
    let (s, c) = libm::sincos(TAU * t);
    ComplexValue::new(c, s)
}

fn centered(t: f64) -> f64 {
    t - libm::round(t)
}

fn lookup(q: u64, table: Option<&SieveTable>) -> Result<PrimeFactorization> {
    match table {
        Some(t) if q <= t.limit() => t.factorize(q),
        _ => factorize(q, None),
    }
}

/// `c_q(n)` through `μ(q/g)·φ(q)/φ(q/g)` with `g = gcd(n, q)`.
pub fn csum_int(q: u64, n: i64, table: Option<&SieveTable>) -> Result<i64> {
    if q == 0 {
        return Err(domain!("q must be at least 1"));
    }
    let g = gcd(n.unsigned_abs(), q);
    let m = q / g;
    let (mu, phi_q, phi_m) = match table {
        Some(t) if q <= t.limit() => (t.mobius(m)?, t.totient(q)?, t.totient(m)?),
        _ => {
            let fm = factorize(m, None)?;
            (fm.mobius(), factorize(q, None)?.totient(), fm.totient())
        }
    };
    Ok(i64::from(mu) * (phi_q / phi_m) as i64)
}

/// `c̃_q(x)` by compensated summation over the `φ(q)` units, ascending `k`.
pub fn csum_real_direct(q: u64, x: &RealArgument) -> Result<ComplexValue> {
    Ok(direct_form(q, x)?.0)
}

fn direct_form(q: u64, x: &RealArgument) -> Result<(ComplexValue, f64)> {
    if q == 0 {
        return Err(domain!("q must be at least 1"));
    }
    // kx/q = (k·⌊x⌋ mod q)/q + k·{x}/q, both parts reduced before the exponential
    let floor = libm::floor(x.x);
    let frac = x.x - floor;
    let floor = floor as i128;
    let qf = q as f64;
    let mut acc = ComplexSum::new();
    let mut count = 0u64;
    for k in 1..=q {
        if gcd(k, q) != 1 {
            continue;
        }
        let whole = (i128::from(k) * floor).rem_euclid(i128::from(q)) as f64;
        let t = centered(whole / qf + (k as f64) * frac / qf);
        acc.add(cis_turns(t));
        count += 1;
    }
    let value = ensure_finite(acc.value())?;
    Ok((value, 4.0 * f64::EPSILON * count as f64))
}

/// `c̃_q(x)` through the divisor form, for `x ∉ Z`.
///
/// Fails with [`Error::NearSingularDenominator`] when some divisor `d` puts
/// `x/d` within [`DENOMINATOR_TOLERANCE`] of a nonzero integer; callers then
/// fall back to [`csum_real_direct`].
pub fn csum_real_divisor(
    q: u64,
    x: &RealArgument,
    table: Option<&SieveTable>,
) -> Result<ComplexValue> {
    Ok(divisor_form(q, x, table)?.0)
}

/// `(d, μ(q/d))` for the divisors `d` of `q` with `q/d` squarefree, ascending.
pub(crate) fn signed_cofactors(q: u64, table: Option<&SieveTable>) -> Result<Vec<(u64, f64)>> {
    let factors = lookup(q, table)?;
    let mut terms: Vec<(u64, f64)> = Vec::with_capacity(1 << factors.factors().len());
    terms.push((q, 1.0));
    for &(p, _) in factors.factors() {
        for i in 0..terms.len() {
            let (d, s) = terms[i];
            terms.push((d / p, -s));
        }
    }
    terms.sort_unstable_by_key(|&(d, _)| d);
    Ok(terms)
}

fn divisor_form(
    q: u64,
    x: &RealArgument,
    table: Option<&SieveTable>,
) -> Result<(ComplexValue, f64)> {
    x.require_non_integer()?;
    if q == 0 {
        return Err(domain!("q must be at least 1"));
    }
    let terms = signed_cofactors(q, table)?;

    let mut cot_sum = crate::sum::NeumaierSum::new();
    let mut magnitude = 0.0;
    for &(d, sign) in &terms {
        let df = d as f64;
        let m = libm::round(x.x / df);
        // x − m·d is exact for the nearest multiple m·d
        let t = (x.x - m * df) / df;
        if m != 0.0 && t.abs() <= DENOMINATOR_TOLERANCE {
            return Err(Error::NearSingularDenominator { q, d });
        }
        let (s, c) = libm::sincos(PI * t);
        let cot = c / s;
        cot_sum.add(sign * cot);
        magnitude += cot.abs();
    }

    let phase = TAU * x.centered_fraction();
    let half = libm::sin(0.5 * phase);
    // 1 − e^{iφ} = 2 sin²(φ/2) − i sin φ
    let numerator = ComplexValue::new(2.0 * half * half, -libm::sin(phase));
    let real = if q == 1 { -0.5 } else { 0.0 };
    let bracket = ComplexValue::new(real, 0.5 * cot_sum.value());
    let value = ensure_finite(numerator * bracket)?;
    let scale = numerator.norm() * (0.5 + 0.5 * magnitude);
    Ok((value, (8.0 + terms.len() as f64) * f64::EPSILON * scale))
}

/// `c̃_q(x)` by the cheapest valid route: the closed form at integers, the
/// divisor form otherwise, falling back to the direct sum near singularities.
pub fn csum_real(q: u64, x: &RealArgument, table: Option<&SieveTable>) -> Result<ComplexValue> {
    Ok(csum_real_with_error(q, x, table)?.0)
}

/// As [`csum_real`], also returning an estimate of the absolute rounding error.
pub fn csum_real_with_error(
    q: u64,
    x: &RealArgument,
    table: Option<&SieveTable>,
) -> Result<(ComplexValue, f64)> {
    if let Some(n) = x.as_integer() {
        let c = csum_int(q, n, table)?;
        return Ok((ComplexValue::new(c as f64, 0.0), 0.0));
    }
    match divisor_form(q, x, table) {
        Err(Error::NearSingularDenominator { .. }) => direct_form(q, x),
        other => other,
    }
}

/// The main-term factor `(e^{2πix} − 1)/(2πix)`: 1 at `x = 0`, 0 at other integers.
pub fn main_term_factor(x: &RealArgument) -> ComplexValue {
    match x.as_integer() {
        Some(0) if x.x == 0.0 => return ComplexValue::new(1.0, 0.0),
        Some(0) => {}
        Some(_) => return ComplexValue::new(0.0, 0.0),
        None => {}
    }
    // (e^{2πix} − 1)/(2πix) = e^{iπx}·sin(πx)/(πx), with the phase reduced
    let t = x.centered_fraction();
    let (s, c) = libm::sincos(PI * t);
    let ratio = if x.nearest == 0 {
        sinc_pi(x.x)
    } else {
        s / (PI * x.x)
    };
    ComplexValue::new(c * ratio, s * ratio)
}

fn sinc_pi(x: f64) -> f64 {
    let y = PI * x;
    if y.abs() < 1e-4 {
        let y2 = y * y;
        1.0 - y2 / 6.0 + y2 * y2 / 120.0
    } else {
        libm::sin(y) / y
    }
}

/// `1/(e^{−2πix/d} − 1) + d/(2πix)`, for `x ∉ Z` and `d > 2π|x|`.
///
/// The real part is exactly `−1/2`; the imaginary part is `(cot v − 1/v)/2`
/// with `v = πx/d`, which tends to 0 as `d` grows.
pub fn lemma1_residual(x: &RealArgument, d: u64) -> Result<ComplexValue> {
    x.require_non_integer()?;
    if (d as f64) <= TAU * x.x.abs() {
        return Err(precondition!(
            "d = {d} must exceed 2π|x| = {}",
            TAU * x.x.abs()
        ));
    }
    let v = PI * x.x / d as f64;
    let g = if v.abs() < 0.05 {
        let v2 = v * v;
        -v * (1.0 / 3.0 + v2 * (1.0 / 45.0 + v2 * (2.0 / 945.0 + v2 / 4725.0)))
    } else {
        let (s, c) = libm::sincos(v);
        c / s - 1.0 / v
    };
    ensure_finite(ComplexValue::new(-0.5, 0.5 * g))
}

/// Which `q` a residual sweep samples.
#[derive(Debug, Clone, PartialEq)]
pub enum Stride {
    All,
    Every(u64),
    /// Roughly `count` geometrically spaced values, deduplicated.
    Geometric(usize),
}

impl Stride {
    pub fn samples(&self, q_min: u64, q_max: u64) -> Vec<u64> {
        match *self {
            Stride::All => (q_min..=q_max).collect(),
            Stride::Every(step) => (q_min..=q_max).step_by(step.max(1) as usize).collect(),
            Stride::Geometric(count) => {
                let mut out: Vec<u64> = Vec::with_capacity(count);
                if count <= 1 {
                    out.push(q_min);
                    return out;
                }
                let ratio = libm::pow(q_max as f64 / q_min as f64, 1.0 / (count - 1) as f64);
                for i in 0..count {
                    let q = (libm::round(q_min as f64 * libm::pow(ratio, i as f64)) as u64)
                        .clamp(q_min, q_max);
                    if out.last() != Some(&q) {
                        out.push(q);
                    }
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub q: u64,
    /// `c̃_q(x) − factor(x)·φ(q)`
    pub residual: ComplexValue,
    pub sigma0: u64,
    pub phi: u64,
}

impl Residual {
    pub fn ratio(&self) -> f64 {
        self.residual.norm() / self.sigma0 as f64
    }
}

/// Main-term/residual decomposition of `c̃_q(x)` over a range of `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Report {
    pub x: f64,
    pub q_range: (u64, u64),
    pub factor: ComplexValue,
    pub residuals: Vec<Residual>,
    /// `max |r(q)|/σ₀(q)` over the sampled `q`.
    pub c_estimate: f64,
}

impl Theorem1Report {
    /// Builds the report from precomputed `(q, c̃_q(x))` pairs in ascending `q`.
    pub fn from_values<I>(
        x: &RealArgument,
        q_min: u64,
        q_max: u64,
        values: I,
        table: &SieveTable,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, ComplexValue)>,
    {
        check_thm1_range(x, q_min, q_max)?;
        let factor = main_term_factor(x);
        let mut residuals = Vec::new();
        let mut c_estimate: f64 = 0.0;
        for (q, value) in values {
            let f = table.factorize(q)?;
            let phi = f.totient();
            let r = Residual {
                q,
                residual: value - factor * phi as f64,
                sigma0: f.divisor_count(),
                phi,
            };
            c_estimate = c_estimate.max(r.ratio());
            residuals.push(r);
        }
        Ok(Self {
            x: x.x,
            q_range: (q_min, q_max),
            factor,
            residuals,
            c_estimate,
        })
    }

    /// `max |r(q)|/σ₀(q)` over the sampled `q` inside `range`.
    pub fn max_ratio(&self, range: RangeInclusive<u64>) -> Option<f64> {
        self.residuals
            .iter()
            .filter(|r| range.contains(&r.q))
            .map(Residual::ratio)
            .reduce(f64::max)
    }
}

fn check_thm1_range(x: &RealArgument, q_min: u64, q_max: u64) -> Result<()> {
    x.require_non_integer()?;
    let threshold = TAU * x.x.abs();
    if (q_min as f64) <= threshold {
        return Err(precondition!(
            "q_min = {q_min} must exceed 2π|x| = {threshold}"
        ));
    }
    if q_min > q_max {
        return Err(precondition!("q_min = {q_min} exceeds q_max = {q_max}"));
    }
    Ok(())
}

/// Residuals `c̃_q(x) − factor(x)·φ(q)` over the sampled `q ∈ [q_min, q_max]`.
pub fn thm1_report(
    x: &RealArgument,
    q_min: u64,
    q_max: u64,
    stride: &Stride,
    table: &SieveTable,
) -> Result<Theorem1Report> {
    check_thm1_range(x, q_min, q_max)?;
    if q_max > table.limit() {
        return Err(Error::OutsideSieve {
            n: q_max,
            limit: table.limit(),
        });
    }
    let values = stride
        .samples(q_min, q_max)
        .into_iter()
        .map(|q| csum_real(q, x, Some(table)).map(|c| (q, c)))
        .collect::<Result<Vec<_>>>()?;
    Theorem1Report::from_values(x, q_min, q_max, values, table)
}
