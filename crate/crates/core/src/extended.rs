//! Binary fixed-point arithmetic for evaluations whose double-precision
//! rounding error would swamp the requested accuracy.
//!
//! A [`Fixed`] is an integer `r` standing for `r / 2^bits`; the scale lives
//! in a [`FixedContext`], and every value passed to a context must have been
//! produced by it. Multiplication and division truncate, so each costs at
//! most one unit in the last place (see [`FixedContext::ulp`]).

use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::float::FloatCore;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::SieveTable;
use crate::error::{domain, Error, Result};
use crate::rsum::signed_cofactors;

pub const MIN_BITS: u32 = 64;
pub const MAX_BITS: u32 = 1 << 14;

const GUARD_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn zero() -> Self {
        Self(BigInt::zero())
    }

    pub fn raw(&self) -> &BigInt {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl Add for Fixed {
    type Output = Fixed;
    fn add(self, rhs: Fixed) -> Fixed {
        Fixed(self.0 + rhs.0)
    }
}

impl Sub for Fixed {
    type Output = Fixed;
    fn sub(self, rhs: Fixed) -> Fixed {
        Fixed(self.0 - rhs.0)
    }
}

impl Neg for Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed(-self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexFixed {
    pub re: Fixed,
    pub im: Fixed,
}

impl ComplexFixed {
    pub fn from_real(re: Fixed) -> Self {
        Self {
            re,
            im: Fixed::zero(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FixedContext {
    bits: u32,
    pi: Fixed,
}

impl FixedContext {
    pub fn new(bits: u32) -> Result<Self> {
        if !(MIN_BITS..=MAX_BITS).contains(&bits) {
            return Err(domain!(
                "fixed-point precision must be within {MIN_BITS}..={MAX_BITS} bits, got {bits}"
            ));
        }
        let pi = Fixed(machin_pi(bits + GUARD_BITS) >> GUARD_BITS);
        Ok(Self { bits, pi })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `2^{−bits}`
    pub fn ulp(&self) -> f64 {
        libm::scalbn(1.0, -(self.bits as i32))
    }

    pub fn pi(&self) -> &Fixed {
        &self.pi
    }

    pub fn one(&self) -> Fixed {
        Fixed(BigInt::one() << self.bits)
    }

    pub fn from_int(&self, n: &BigInt) -> Fixed {
        Fixed(n << self.bits)
    }

    /// Exact whenever `x` has no bits below `2^{−bits}`.
    pub fn from_f64(&self, x: f64) -> Result<Fixed> {
        if !x.is_finite() {
            return Err(Error::NonFinite);
        }
        let (mantissa, exponent, sign) = FloatCore::integer_decode(x);
        let m = BigInt::from(mantissa) * BigInt::from(sign);
        let shift = i64::from(exponent) + i64::from(self.bits);
        Ok(Fixed(if shift >= 0 {
            m << shift as u64
        } else {
            m >> (-shift) as u64
        }))
    }

    pub fn from_rational(&self, r: &BigRational) -> Fixed {
        Fixed((r.numer() << self.bits) / r.denom())
    }

    pub fn to_f64(&self, a: &Fixed) -> f64 {
        let shift = a.0.bits().saturating_sub(64);
        let top = (&a.0 >> shift).to_f64().unwrap_or(0.0);
        libm::scalbn(top, shift as i32 - self.bits as i32)
    }

    pub fn mul(&self, a: &Fixed, b: &Fixed) -> Fixed {
        Fixed((&a.0 * &b.0) >> self.bits)
    }

    pub fn div(&self, a: &Fixed, b: &Fixed) -> Result<Fixed> {
        if b.is_zero() {
            return Err(Error::NonFinite);
        }
        Ok(Fixed((&a.0 << self.bits) / &b.0))
    }

    pub fn div_u64(&self, a: &Fixed, q: u64) -> Fixed {
        Fixed(&a.0 / q)
    }

    pub fn powi(&self, x: &Fixed, n: u32) -> Fixed {
        let mut result = self.one();
        let mut base = x.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul(&result, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// `(sin πt, cos πt)` for `|t| ≤ 1`.
    pub fn sin_cos_pi(&self, t: &Fixed) -> Result<(Fixed, Fixed)> {
        if t.0.abs() > self.one().0 {
            return Err(domain!("sin_cos_pi needs |t| <= 1"));
        }
        let theta = self.mul(&self.pi, t);
        let theta2 = self.mul(&theta, &theta);
        // sin: θ − θ³/3! + …, cos: 1 − θ²/2! + …
        let mut sin = theta.clone();
        let mut cos = self.one();
        let mut s_term = theta;
        let mut c_term = self.one();
        let mut k: u64 = 1;
        loop {
            c_term = -self.div_u64(&self.mul(&c_term, &theta2), (2 * k - 1) * (2 * k));
            s_term = -self.div_u64(&self.mul(&s_term, &theta2), (2 * k) * (2 * k + 1));
            if c_term.is_zero() && s_term.is_zero() {
                break;
            }
            cos = cos + c_term.clone();
            sin = sin + s_term.clone();
            k += 1;
        }
        Ok((sin, cos))
    }

    /// `ζ(s)` for integer `s ≥ 2` by the Borwein alternating-series method.
    pub fn zeta(&self, s: u32) -> Result<Fixed> {
        if s < 2 {
            return Err(domain!("extended zeta needs an integer s >= 2, got {s}"));
        }
        let working = self.bits + GUARD_BITS;
        // |error| ≤ 6/(3+√8)^n, and log2(3+√8) > 2.54
        let n = (u64::from(working) + 3) * 100 / 254 + 2;
        let d = borwein_weights(n);
        let d_n = &d[n as usize];
        let mut sum = BigInt::zero();
        for k in 0..n {
            let power = BigInt::from(k + 1).pow(s);
            let inverse = (BigInt::one() << working) / power;
            let term = (&d[k as usize] - d_n) * inverse;
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        let half = BigInt::one() << (s - 1);
        let denominator = d_n * (&half - 1u32);
        let value = -(sum * half) / denominator;
        Ok(Fixed(value >> GUARD_BITS))
    }

    pub fn mul_complex_real(&self, z: &ComplexFixed, w: &Fixed) -> ComplexFixed {
        ComplexFixed {
            re: self.mul(&z.re, w),
            im: self.mul(&z.im, w),
        }
    }

    pub fn mul_complex(&self, a: &ComplexFixed, b: &ComplexFixed) -> ComplexFixed {
        ComplexFixed {
            re: self.mul(&a.re, &b.re) - self.mul(&a.im, &b.im),
            im: self.mul(&a.re, &b.im) + self.mul(&a.im, &b.re),
        }
    }

    /// `c̃_q(x)` for non-integer `x` through the cotangent divisor form.
    ///
    /// Also returns an error bound in units of [`Self::ulp`].
    pub fn csum_real(&self, q: u64, x: &Fixed, table: &SieveTable) -> Result<(ComplexFixed, f64)> {
        if q == 0 {
            return Err(domain!("q must be at least 1"));
        }
        let xf = self.to_f64(x);
        let nearest = self.from_int(&BigInt::from(libm::round(xf) as i64));
        let fraction = x.clone() - nearest;
        if fraction.is_zero() {
            return Err(Error::IntegerArgument(xf));
        }

        let mut cot_sum = Fixed::zero();
        let mut units = 16.0;
        for (d, sign) in signed_cofactors(q, Some(table))? {
            let m = libm::round(xf / d as f64) as i64;
            let shifted = x.clone() - self.from_int(&(BigInt::from(m) * BigInt::from(d)));
            let t = self.div_u64(&shifted, d);
            let (s, c) = self.sin_cos_pi(&t)?;
            let cot = self.div(&c, &s)?;
            let magnitude = self.to_f64(&cot).abs();
            units += f64::from(2 * self.bits) * (1.0 + magnitude * magnitude) + 4.0;
            cot_sum = if sign > 0.0 {
                cot_sum + cot
            } else {
                cot_sum - cot
            };
        }

        let two_fraction = fraction.clone() + fraction;
        let (s, c) = self.sin_cos_pi(&two_fraction)?;
        // 1 − e^{2πix}
        let numerator = ComplexFixed {
            re: self.one() - c,
            im: -s,
        };
        let half_one = Fixed(BigInt::one() << (self.bits - 1));
        let bracket = ComplexFixed {
            re: if q == 1 { -half_one } else { Fixed::zero() },
            im: Fixed(cot_sum.0 >> 1u32),
        };
        let value = self.mul_complex(&numerator, &bracket);
        let units = 2.0 * units + f64::from(4 * self.bits) * (1.0 + self.to_f64(&bracket.im).abs());
        Ok((value, units))
    }
}

/// `d_k = n ∑_{i≤k} (n+i−1)! 4^i / ((n−i)! (2i)!)` for `k = 0..=n`.
fn borwein_weights(n: u64) -> Vec<BigInt> {
    let mut factorial = Vec::with_capacity(2 * n as usize + 1);
    factorial.push(BigInt::one());
    for i in 1..=2 * n {
        let next = factorial.last().unwrap() * BigInt::from(i);
        factorial.push(next);
    }
    let nn = BigInt::from(n);
    let mut weights = Vec::with_capacity(n as usize + 1);
    let mut acc = BigInt::zero();
    for i in 0..=n {
        let numerator = (&nn * &factorial[(n + i) as usize - 1]) << (2 * i);
        let denominator = &factorial[(n - i) as usize] * &factorial[2 * i as usize];
        let (term, rest) = numerator.div_rem(&denominator);
        debug_assert!(rest.is_zero());
        acc += term;
        weights.push(acc.clone());
    }
    weights
}

/// `π · 2^bits` by `π = 16 arctan(1/5) − 4 arctan(1/239)`.
fn machin_pi(bits: u32) -> BigInt {
    let working = bits + 16;
    let pi = (arctan_inverse(5, working) << 4u32) - (arctan_inverse(239, working) << 2u32);
    pi >> 16u32
}

/// `arctan(1/k) · 2^bits`
fn arctan_inverse(k: u64, bits: u32) -> BigInt {
    let k2 = BigInt::from(k * k);
    let mut power = (BigInt::one() << bits) / k;
    let mut sum = power.clone();
    let mut j: u64 = 1;
    loop {
        power /= &k2;
        if power.is_zero() {
            break;
        }
        let term = &power / (2 * j + 1);
        if j % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        j += 1;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rsum::{csum_real_direct, RealArgument};
    use crate::series::zeta;
    use core::f64::consts::PI;

    #[test]
    fn pi_digits() {
        let ctx = FixedContext::new(256).unwrap();
        assert_eq!(ctx.to_f64(ctx.pi()), PI);
        // π·2^64 = 57952155664616982739.03...
        let ctx64 = FixedContext::new(64).unwrap();
        assert_eq!(ctx64.pi().raw().to_string(), "57952155664616982739");
    }

    #[test]
    fn zeta_values() {
        let ctx = FixedContext::new(200).unwrap();
        let z2 = ctx.to_f64(&ctx.zeta(2).unwrap());
        assert!((z2 - PI * PI / 6.0).abs() < 1e-15);
        for s in [3u32, 5, 7, 12, 40] {
            let a = ctx.to_f64(&ctx.zeta(s).unwrap());
            let b = zeta(f64::from(s)).unwrap();
            assert!((a - b).abs() <= 2e-14 * b, "s={s}: {a} vs {b}");
        }
        // ζ(2) = π²/6 well beyond double precision
        let exact = ctx.div_u64(&ctx.mul(ctx.pi(), ctx.pi()), 6);
        let diff = ctx.zeta(2).unwrap() - exact;
        assert!(diff.raw().abs() < BigInt::from(1u64 << 12));
        assert!(ctx.zeta(1).is_err());
    }

    #[test]
    fn trig_identities() {
        let ctx = FixedContext::new(128).unwrap();
        for t in [-1.0, -0.75, -0.1, 0.0, 1.0 / 3.0, 0.5, 0.999] {
            let (s, c) = ctx.sin_cos_pi(&ctx.from_f64(t).unwrap()).unwrap();
            assert!((ctx.to_f64(&s) - libm::sin(PI * t)).abs() < 1e-15);
            assert!((ctx.to_f64(&c) - libm::cos(PI * t)).abs() < 1e-15);
            let one = ctx.mul(&s, &s) + ctx.mul(&c, &c) - ctx.one();
            assert!(one.raw().abs() < BigInt::from(1u64 << 16));
        }
        assert!(ctx.sin_cos_pi(&ctx.from_int(&BigInt::from(2))).is_err());
    }

    #[test]
    fn conversions() {
        let ctx = FixedContext::new(96).unwrap();
        for x in [0.0, 1.5, -3.25, 1e10, -1e-9, 123456.789] {
            assert_eq!(ctx.to_f64(&ctx.from_f64(x).unwrap()), x);
        }
        let r = BigRational::new(BigInt::from(-25), BigInt::from(3));
        assert!((ctx.to_f64(&ctx.from_rational(&r)) + 25.0 / 3.0).abs() < 1e-15);
        assert!(ctx.from_f64(f64::NAN).is_err());
        assert!(FixedContext::new(8).is_err());
    }

    #[test]
    fn ramanujan_sums_match_double() {
        let ctx = FixedContext::new(160).unwrap();
        let table = SieveTable::new(1000).unwrap();
        for x in [0.5, 3.3, -2.75, 6.001] {
            let xf = ctx.from_f64(x).unwrap();
            let arg = RealArgument::new(x).unwrap();
            for q in [1u64, 2, 6, 12, 30, 97, 360] {
                let (c, units) = ctx.csum_real(q, &xf, &table).unwrap();
                let reference = csum_real_direct(q, &arg).unwrap();
                let re = ctx.to_f64(&c.re);
                let im = ctx.to_f64(&c.im);
                assert!((re - reference.re).abs() < 1e-11, "q={q} x={x}");
                assert!((im - reference.im).abs() < 1e-11, "q={q} x={x}");
                assert!(units * ctx.ulp() < 1e-20);
            }
        }
        assert!(ctx
            .csum_real(3, &ctx.from_int(&BigInt::from(4)), &table)
            .is_err());
    }
}
