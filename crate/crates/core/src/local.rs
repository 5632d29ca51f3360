//! Local real-variable interpolants of the divisor function around a fixed `α`.
//!
//! With `d_1 < … < d_N` the divisors of `|α|` and
//! `P_α(x) = ∏ (x − d_i) = ∑ a_n x^n`, every divisor is a root, so for all `k`
//!
//! ```text
//! a_N σ_{k+N}(α) + ⋯ + a_1 σ_{k+1}(α) + a_0 σ_k(α) = 0.
//! ```
//!
//! Solving for `σ_k(α)` and replacing each `σ_{k+n}(α)` by the real-variable
//! expansion `σ̃_{k+n}(x)` gives functions of `x` that agree with `σ_k` near
//! `α`. For `k = 1` every constituent has order at least 2, so the result
//! converges absolutely for all real `x`; `σ̃₀(x, α)` substitutes
//! `σ̃₁(x, α)` for the one divergent constituent.
//!
//! All polynomial data is exact (`BigInt`/`BigRational`). Numerical
//! evaluation sums `∑_q w(q) c̃_q(x)`, with the whole inner combination
//! folded into one weight `w(q)` before multiplying by `c̃_q(x)`.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{factorize, DivisorList, SieveTable};
use crate::error::{domain, Error, Result};
use crate::extended::{ComplexFixed, Fixed, FixedContext};
use crate::rsum::{csum_int, csum_real_with_error, RealArgument};
use crate::series::sigma_tilde::TRUNCATION_SHARE;
use crate::series::tail::{TailModel, TruncationSearch};
use crate::series::{sigma_tilde, zeta, ZETA_RELATIVE_ERROR};
use crate::sum::{ComplexSum, NeumaierSum};
use crate::{ensure_finite, powi, ComplexValue};

/// Default cap on `σ₀(|α|)` for double-precision evaluation.
pub const DEFAULT_N_MAX: usize = 16;

/// `P_α(x) = ∏_{d | α} (x − d)` with exact coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct DivisorPolynomial {
    alpha: i64,
    divisors: DivisorList,
    /// `a_0, …, a_N`
    coefficients: Vec<BigInt>,
    /// `e_0, …, e_N` of the divisors
    symmetric: Vec<BigInt>,
}

impl DivisorPolynomial {
    pub fn new(alpha: i64) -> Result<Self> {
        if alpha == 0 {
            return Err(domain!("alpha must be a nonzero integer"));
        }
        let divisors = factorize(alpha.unsigned_abs(), None)?.divisors();
        let roots: Vec<BigInt> = divisors.iter().map(|&d| BigInt::from(d)).collect();
        let symmetric = crate::arith::elementary_symmetric(&roots);
        let n = roots.len();
        // a_n = (−1)^{N−n} e_{N−n}
        let coefficients = (0..=n)
            .map(|i| {
                let e = symmetric[n - i].clone();
                if (n - i) % 2 == 1 {
                    -e
                } else {
                    e
                }
            })
            .collect();
        let poly = Self {
            alpha,
            divisors,
            coefficients,
            symmetric,
        };
        poly.check_invariants()?;
        Ok(poly)
    }

    fn check_invariants(&self) -> Result<()> {
        let n = self.degree();
        let product: BigInt = self.divisors.iter().map(|&d| BigInt::from(d)).product();
        let expected_a0 = if n % 2 == 1 { -product } else { product };
        let ok = self.coefficients[n].is_one()
            && self.coefficients[0] == expected_a0
            && self
                .divisors
                .iter()
                .all(|&d| self.eval(&BigInt::from(d)).is_zero());
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(alloc::format!(
                "divisor polynomial of {} failed its invariants",
                self.alpha
            )))
        }
    }

    pub fn alpha(&self) -> i64 {
        self.alpha
    }

    /// `N = σ₀(|α|)`
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn divisors(&self) -> &DivisorList {
        &self.divisors
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn elementary_symmetric(&self) -> &[BigInt] {
        &self.symmetric
    }

    /// `a_0 = (−1)^N ∏ d_i`, never zero.
    pub fn a0(&self) -> &BigInt {
        &self.coefficients[0]
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coefficients
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, a| acc * x + a)
    }

    /// Weights `w_m` with `∑_m w_m σ_m(α) = σ_k(α)`, that is
    /// `m = k + n`, `w_m = −a_n/a_0` for `n = 1..=N`.
    fn recurrence_weights(&self, k: u32) -> Combination {
        let a0 = self.a0();
        let terms = (1..=self.degree())
            .map(|n| {
                let w = BigRational::new(-self.coefficients[n].clone(), a0.clone());
                (k + n as u32, w)
            })
            .collect();
        Combination { terms }
    }
}

/// `a_N σ_{k+N}(|α|) + ⋯ + a_0 σ_k(|α|)`, which vanishes identically.
pub fn recurrence_residual(alpha: i64, k: u32) -> Result<BigInt> {
    let poly = DivisorPolynomial::new(alpha)?;
    let factors = factorize(alpha.unsigned_abs(), None)?;
    Ok(poly
        .coefficients()
        .iter()
        .enumerate()
        .map(|(n, a)| a * BigInt::from(factors.sigma(k + n as u32)))
        .sum())
}

/// `σ_k(α) = −(1/a_0)(a_N σ_{k+N}(α) + ⋯ + a_1 σ_{k+1}(α))`, evaluated exactly.
pub fn sigma_via_recurrence(alpha: i64, k: u32) -> Result<BigRational> {
    let poly = DivisorPolynomial::new(alpha)?;
    let factors = factorize(alpha.unsigned_abs(), None)?;
    let combination = poly.recurrence_weights(k);
    combination.exact(|m| Ok(BigInt::from(factors.sigma(m))))
}

/// One inner term of the impure expansion of `σ_k(α)`:
/// `factor · ζ(zeta_order) · x^{power_of_x} / q^{zeta_order}` multiplying `c̃_q(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpureTerm {
    pub j: usize,
    /// `(−1)^{j+1} e_j / a_0`
    pub factor: BigRational,
    pub zeta_order: u32,
    pub power_of_x: u32,
}

/// The `α`-dependent Ramanujan coefficients of `σ_k(α)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpureCoefficients {
    pub alpha: i64,
    pub k: u32,
    /// `j = 0..N−1`
    pub terms: Vec<ImpureTerm>,
}

pub fn impure_coefficients(alpha: i64, k: u32) -> Result<ImpureCoefficients> {
    let poly = DivisorPolynomial::new(alpha)?;
    let n = poly.degree();
    let a0 = poly.a0();
    let terms = (0..n)
        .map(|j| {
            let e = poly.elementary_symmetric()[j].clone();
            let signed = if j % 2 == 0 { -e } else { e };
            let power = (n + k as usize - j) as u32;
            ImpureTerm {
                j,
                factor: BigRational::new(signed, a0.clone()),
                zeta_order: power + 1,
                power_of_x: power,
            }
        })
        .collect();
    Ok(ImpureCoefficients { alpha, k, terms })
}

impl ImpureCoefficients {
    fn combination(&self) -> Combination {
        Combination {
            terms: self
                .terms
                .iter()
                .map(|t| (t.power_of_x, t.factor.clone()))
                .collect(),
        }
    }

    /// Sums the induced expansion at `x`; at `x = α` this is `σ_k(α)`.
    ///
    /// Terms of order 2 (present when `k = 0`) only converge at integers.
    pub fn evaluate(
        &self,
        x: &RealArgument,
        target_error: f64,
        table: &SieveTable,
    ) -> Result<LocalValue> {
        self.combination()
            .evaluate(x, target_error, table, &LocalOptions::unbounded())
    }
}

/// Arithmetic used for the per-`q` weights and sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    /// Software fixed point with this many fractional bits.
    Extended { bits: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalOptions {
    /// Largest `σ₀(|α|)` accepted in [`Precision::Double`]; extended precision ignores it.
    pub n_max: usize,
    pub precision: Precision,
}

impl Default for LocalOptions {
    fn default() -> Self {
        Self {
            n_max: DEFAULT_N_MAX,
            precision: Precision::Double,
        }
    }
}

impl LocalOptions {
    pub fn extended(bits: u32) -> Self {
        Self {
            n_max: DEFAULT_N_MAX,
            precision: Precision::Extended { bits },
        }
    }

    fn unbounded() -> Self {
        Self {
            n_max: usize::MAX,
            precision: Precision::Double,
        }
    }

    fn check(&self, poly: &DivisorPolynomial) -> Result<()> {
        if self.precision == Precision::Double && poly.degree() > self.n_max {
            return Err(Error::NTooLarge {
                divisors: poly.degree(),
                max: self.n_max,
            });
        }
        Ok(())
    }
}

/// A certified evaluation of a local expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalValue {
    pub value: ComplexValue,
    /// Truncation bound plus rounding estimate, at most the requested target.
    pub certified_error: f64,
    /// Last `q` included.
    pub truncation: u64,
}

/// `∑_m w_m σ̃_m(x)` with exact rational weights, `m` strictly increasing.
#[derive(Debug, Clone, PartialEq)]
struct Combination {
    terms: Vec<(u32, BigRational)>,
}

impl Combination {
    fn sigma1(poly: &DivisorPolynomial) -> Self {
        poly.recurrence_weights(1)
    }

    /// `−(1/a_0)(a_N σ̃_N + ⋯ + a_2 σ̃_2 + a_1 σ̃₁(x, α))`
    fn sigma0(poly: &DivisorPolynomial) -> Self {
        let a0 = poly.a0();
        let a1_weight = BigRational::new(-poly.coefficients()[1].clone(), a0.clone());
        let mut by_order: Vec<(u32, BigRational)> = (2..=poly.degree())
            .map(|n| {
                let w = BigRational::new(-poly.coefficients()[n].clone(), a0.clone());
                (n as u32, w)
            })
            .collect();
        for (m, w) in Self::sigma1(poly).terms {
            let w = w * &a1_weight;
            match by_order.iter_mut().find(|(order, _)| *order == m) {
                Some((_, existing)) => *existing += w,
                None => by_order.push((m, w)),
            }
        }
        by_order.sort_by_key(|(m, _)| *m);
        by_order.retain(|(_, w)| !w.is_zero());
        Self { terms: by_order }
    }

    /// Exact value given exact `σ̃_m` values.
    fn exact(&self, mut sigma: impl FnMut(u32) -> Result<BigInt>) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for (m, w) in &self.terms {
            total += w * BigRational::from_integer(sigma(*m)?);
        }
        Ok(total)
    }

    fn min_order(&self) -> u32 {
        self.terms.iter().map(|(m, _)| *m).min().unwrap_or(2)
    }

    fn evaluate(
        &self,
        x: &RealArgument,
        target_error: f64,
        table: &SieveTable,
        options: &LocalOptions,
    ) -> Result<LocalValue> {
        if !(target_error > 0.0 && target_error.is_finite()) {
            return Err(domain!(
                "target error must be positive and finite, got {target_error}"
            ));
        }
        if !x.is_integer() && self.min_order() < 2 {
            return Err(Error::DivergentRequest {
                k: self.min_order(),
            });
        }
        let weights: Vec<f64> = self
            .terms
            .iter()
            .map(|(_, w)| rational_to_f64(w))
            .collect::<Result<_>>()?;
        let zetas: Vec<f64> = self
            .terms
            .iter()
            .map(|(m, _)| zeta(f64::from(*m) + 1.0))
            .collect::<Result<_>>()?;
        // c_m = w_m x^m ζ(m+1)
        let coefficients: Vec<f64> = self
            .terms
            .iter()
            .zip(&weights)
            .zip(&zetas)
            .map(|(((m, _), w), z)| w * powi(x.value(), *m) * z)
            .collect();

        let truncation = self.truncation(x, &coefficients, target_error, table)?;
        let model = TailModel::for_argument(x)?;
        let mut truncation_error = 0.0;
        for ((m, _), c) in self.terms.iter().zip(&coefficients) {
            truncation_error += c.abs() * model.bound(*m, truncation)?;
        }

        let (value, rounding) = match options.precision {
            Precision::Double => self.sum_double(x, &coefficients, truncation, table)?,
            Precision::Extended { bits } => self.sum_extended(x, bits, truncation, table)?,
        };
        let certified_error = truncation_error + rounding;
        if certified_error > target_error {
            return Err(Error::PrecisionLoss {
                rounding,
                target: target_error,
            });
        }
        Ok(LocalValue {
            value,
            certified_error,
            truncation,
        })
    }

    /// Each term gets an equal share of the truncation budget.
    fn truncation(
        &self,
        x: &RealArgument,
        coefficients: &[f64],
        target_error: f64,
        table: &SieveTable,
    ) -> Result<u64> {
        let model = TailModel::for_argument(x)?;
        let budget = TRUNCATION_SHARE * target_error / self.terms.len().max(1) as f64;
        let mut q = 1;
        for ((m, _), c) in self.terms.iter().zip(coefficients) {
            match model.truncation(*m, c.abs(), budget, table.limit())? {
                TruncationSearch::Found(found) => q = q.max(found),
                TruncationSearch::Beyond(required) => {
                    return Err(Error::TruncationExceedsSieve {
                        required,
                        limit: table.limit(),
                    })
                }
            }
        }
        Ok(q)
    }

    fn sum_double(
        &self,
        x: &RealArgument,
        coefficients: &[f64],
        truncation: u64,
        table: &SieveTable,
    ) -> Result<(ComplexValue, f64)> {
        let u = f64::EPSILON;
        let max_order = self.terms.iter().map(|(m, _)| *m).max().unwrap_or(0);
        // relative error of each c_m/q^{m+1}: ζ, the rational weight, x^m, q^{m+1}
        let term_error = ZETA_RELATIVE_ERROR + f64::from(2 * max_order + 8) * u;
        let fold_error = self.terms.len() as f64 * u;

        let mut acc = ComplexSum::new();
        let mut rounding = NeumaierSum::new();
        for q in 1..=truncation {
            let (c, c_error) = csum_real_with_error(q, x, Some(table))?;
            let qf = q as f64;
            let mut weight = NeumaierSum::new();
            let mut magnitude = 0.0;
            for ((m, _), coefficient) in self.terms.iter().zip(coefficients) {
                let t = coefficient / powi(qf, m + 1);
                weight.add(t);
                magnitude += t.abs();
            }
            let w = weight.value();
            let term = c * w;
            acc.add(term);
            let c_abs = c.norm();
            rounding.add(
                (term_error + fold_error) * magnitude * (c_abs + c_error)
                    + w.abs() * c_error
                    + 2.0 * u * term.norm(),
            );
        }
        let value = ensure_finite(acc.value())?;
        Ok((value, rounding.value() + u * value.norm()))
    }

    fn sum_extended(
        &self,
        x: &RealArgument,
        bits: u32,
        truncation: u64,
        table: &SieveTable,
    ) -> Result<(ComplexValue, f64)> {
        let ctx = FixedContext::new(bits)?;
        let xf = ctx.from_f64(x.value())?;
        // c_m = w_m x^m ζ(m+1), highest order first for Horner in 1/q
        let mut orders: Vec<u32> = Vec::new();
        let mut coefficients: Vec<Fixed> = Vec::new();
        for (m, w) in self.terms.iter().rev() {
            let c = ctx.mul(
                &ctx.mul(&ctx.from_rational(w), &ctx.powi(&xf, *m)),
                &ctx.zeta(*m + 1)?,
            );
            orders.push(*m);
            coefficients.push(c);
        }
        let lowest = *orders.last().unwrap_or(&2);

        let mut re = Fixed::zero();
        let mut im = Fixed::zero();
        let mut error_units = 0.0;
        for q in 1..=truncation {
            // ∑_m c_m q^{−m−1} = q^{−lowest−1} · (c_low + (c_next + …)/q^{gap})
            let mut acc = Fixed::zero();
            let mut previous = orders[0];
            for (m, c) in orders.iter().zip(&coefficients) {
                for _ in *m..previous {
                    acc = ctx.div_u64(&acc, q);
                }
                acc = acc + c.clone();
                previous = *m;
            }
            for _ in 0..=lowest {
                acc = ctx.div_u64(&acc, q);
            }
            let weight_units = (orders.len() + orders[0] as usize + 2) as f64;

            let (c, c_units) = match x.as_integer() {
                Some(n) => {
                    let c = csum_int(q, n, Some(table))?;
                    (ComplexFixed::from_real(ctx.from_int(&BigInt::from(c))), 0.0)
                }
                None => ctx.csum_real(q, &xf, table)?,
            };
            let term = ctx.mul_complex_real(&c, &acc);
            re = re + term.re;
            im = im + term.im;
            let w_abs = ctx.to_f64(&acc).abs();
            let c_abs = ctx.to_f64(&c.re).abs() + ctx.to_f64(&c.im).abs();
            error_units += weight_units * (c_abs + 1.0) + c_units * (w_abs + 1.0) + 4.0;
        }
        let value = ensure_finite(ComplexValue::new(ctx.to_f64(&re), ctx.to_f64(&im)))?;
        let rounding = error_units * ctx.ulp() + f64::EPSILON * value.norm();
        Ok((value, rounding))
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> Result<f64> {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return Ok(v);
        }
    }
    Err(Error::NonFinite)
}

/// `σ̃₁(x, α) = −(1/a_0)(a_N σ̃_{N+1}(x) + ⋯ + a_1 σ̃_2(x))`.
pub fn sigma1_local(
    x: &RealArgument,
    alpha: i64,
    target_error: f64,
    table: &SieveTable,
) -> Result<LocalValue> {
    sigma1_local_with(x, alpha, target_error, table, &LocalOptions::default())
}

pub fn sigma1_local_with(
    x: &RealArgument,
    alpha: i64,
    target_error: f64,
    table: &SieveTable,
    options: &LocalOptions,
) -> Result<LocalValue> {
    let poly = DivisorPolynomial::new(alpha)?;
    options.check(&poly)?;
    Combination::sigma1(&poly).evaluate(x, target_error, table, options)
}

/// `σ̃₀(x, α) = −(1/a_0)(a_N σ̃_N(x) + ⋯ + a_2 σ̃_2(x) + a_1 σ̃₁(x, α))`.
pub fn sigma0_local(
    x: &RealArgument,
    alpha: i64,
    target_error: f64,
    table: &SieveTable,
) -> Result<LocalValue> {
    sigma0_local_with(x, alpha, target_error, table, &LocalOptions::default())
}

pub fn sigma0_local_with(
    x: &RealArgument,
    alpha: i64,
    target_error: f64,
    table: &SieveTable,
    options: &LocalOptions,
) -> Result<LocalValue> {
    let poly = DivisorPolynomial::new(alpha)?;
    options.check(&poly)?;
    Combination::sigma0(&poly).evaluate(x, target_error, table, options)
}

/// `σ̃₁(x, α)` assembled from separately certified `σ̃_m(x)` values.
///
/// This is the term-by-term route; it suffers the full cancellation between
/// the `a_n σ̃_{n+1}` and serves as a cross-check of [`sigma1_local`].
pub fn sigma1_local_combined(
    x: &RealArgument,
    alpha: i64,
    target_error: f64,
    table: &SieveTable,
) -> Result<LocalValue> {
    let poly = DivisorPolynomial::new(alpha)?;
    LocalOptions::default().check(&poly)?;
    let combination = Combination::sigma1(&poly);
    let share = target_error / combination.terms.len() as f64;
    let mut acc = ComplexSum::new();
    let mut error = 0.0;
    let mut magnitude = 0.0;
    let mut truncation = 0;
    for (m, w) in &combination.terms {
        let w = rational_to_f64(w)?;
        let part = sigma_tilde(*m, x, share / w.abs(), table)?;
        acc.add(part.value * w);
        error += w.abs() * part.achieved_bound;
        magnitude += w.abs() * part.value.norm();
        truncation = truncation.max(part.truncation);
    }
    let value = ensure_finite(acc.value())?;
    Ok(LocalValue {
        value,
        certified_error: error + 4.0 * f64::EPSILON * magnitude,
        truncation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalFunction {
    Sigma1,
    Sigma0,
}

/// Exact value of `σ̃₁(m, α)` or `σ̃₀(m, α)` at an integer point `m`, using
/// `σ̃_j(m) = sign(m)^j σ_j(|m|)`.
pub fn exact_local_value(point: i64, alpha: i64, function: LocalFunction) -> Result<BigRational> {
    let poly = DivisorPolynomial::new(alpha)?;
    let combination = match function {
        LocalFunction::Sigma1 => Combination::sigma1(&poly),
        LocalFunction::Sigma0 => Combination::sigma0(&poly),
    };
    if point == 0 {
        return Ok(BigRational::zero());
    }
    let factors = factorize(point.unsigned_abs(), None)?;
    combination.exact(|m| {
        let s = BigInt::from(factors.sigma(m));
        Ok(if point < 0 && m % 2 == 1 { -s } else { s })
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalitySample {
    pub point: f64,
    pub value: ComplexValue,
    pub certified_error: f64,
    /// `σ₁(point)` at positive integer probes.
    pub reference: Option<BigUint>,
    /// The exact value the expansion takes at integer probes.
    pub exact_expansion: Option<BigRational>,
    /// Whether `value` agrees with `reference` within `certified_error`.
    pub matches: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalityReport {
    pub alpha: i64,
    pub target_error: f64,
    pub samples: Vec<LocalitySample>,
}

/// Evaluates `σ̃₁(·, α)` at each probe (plus `α ± 1/2`) and compares integer
/// probes against the exact `σ₁`.
pub fn locality_report(
    alpha: i64,
    probe_points: &[f64],
    target_error: f64,
    table: &SieveTable,
) -> Result<LocalityReport> {
    locality_report_with(
        alpha,
        probe_points,
        target_error,
        table,
        &LocalOptions::default(),
    )
}

pub fn locality_report_with(
    alpha: i64,
    probe_points: &[f64],
    target_error: f64,
    table: &SieveTable,
    options: &LocalOptions,
) -> Result<LocalityReport> {
    let mut points: Vec<f64> = probe_points.to_vec();
    for offset in [-0.5, 0.5] {
        let p = alpha as f64 + offset;
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let mut samples = Vec::with_capacity(points.len());
    for point in points {
        let x = RealArgument::new(point)?;
        samples.push(locality_sample(&x, alpha, target_error, table, options)?);
    }
    Ok(LocalityReport {
        alpha,
        target_error,
        samples,
    })
}

fn locality_sample(
    x: &RealArgument,
    alpha: i64,
    target_error: f64,
    table: &SieveTable,
    options: &LocalOptions,
) -> Result<LocalitySample> {
    let local = sigma1_local_with(x, alpha, target_error, table, options)?;
    let (reference, exact_expansion, matches) = match x.as_integer() {
        Some(m) => {
            let exact = exact_local_value(m, alpha, LocalFunction::Sigma1)?;
            if m > 0 {
                let reference = crate::arith::sigma(1, m as u64)?;
                let r = reference.to_f64().ok_or(Error::NonFinite)?;
                let ok = (local.value.re - r).abs() <= local.certified_error
                    && local.value.im.abs() <= local.certified_error;
                (Some(reference), Some(exact), Some(ok))
            } else {
                (None, Some(exact), None)
            }
        }
        None => (None, None, None),
    };
    Ok(LocalitySample {
        point: x.value(),
        value: local.value,
        certified_error: local.certified_error,
        reference,
        exact_expansion,
        matches,
    })
}
