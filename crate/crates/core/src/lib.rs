//! Ramanujan sums of integer and real arguments.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! - [`arith`]: exact arithmetic functions (factorization, Möbius, totient,
//!   divisors, `σ_k`) and elementary symmetric polynomials, plus a
//!   smallest-prime-factor sieve for batch work.
//! - [`rsum`]: `c_q(n)` for integers and `c̃_q(x)` for reals (direct and
//!   divisor forms), the main-term factor `(e^{2πix}−1)/(2πix)` and the
//!   residual reports built on it.
//! - [`series`]: expansions `∑ f̂(q) c̃_q(x)` under named coefficient rules,
//!   partial-sum traces, tail bounds, slope fits and a real zeta function.
//! - [`local`]: the divisor polynomial of a fixed `α`, the exact linear
//!   recurrence between `σ_k(α)`, and the locally interpolating real-variable
//!   divisor functions `σ̃₁(x, α)` and `σ̃₀(x, α)`.
//! - [`extended`]: a software fixed-point number used when the local
//!   expansions need more than double precision.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
pub mod error;
pub mod extended;
pub mod local;
pub mod rsum;
pub mod series;
pub mod sum;

pub use error::{Error, Result};

/// Complex values produced by every evaluator. Components are always finite.
pub type ComplexValue = num_complex::Complex64;

pub(crate) fn ensure_finite(z: ComplexValue) -> Result<ComplexValue> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite)
    }
}

/// `x^n` by repeated squaring (`f64::powi` is not available without `std`).
pub(crate) fn powi(mut x: f64, mut n: u32) -> f64 {
    let mut acc = 1.0;
    while n > 0 {
        if n & 1 == 1 {
            acc *= x;
        }
        x *= x;
        n >>= 1;
    }
    acc
}
