//! Exact arithmetic functions on the naturals.
//!
//! Isolated inputs are factored by trial division (up to `2^63`); batch work
//! over `1..=limit` goes through [`SieveTable`], a linear sieve that stores
//! the smallest prime factor together with `μ` and `φ`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::error::{domain, Error, Result};

/// Largest input accepted by the trial-division factorizer.
pub const FACTORIZER_MAX: u64 = 1 << 63;

/// Largest limit accepted by [`SieveTable::new`].
pub const SIEVE_MAX: u64 = 1 << 31;

/// Prime-exponent decomposition of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mobius(&self) -> i8 {
        if self.factors.iter().any(|&(_, e)| e >= 2) {
            0
        } else if self.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn totient(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// `σ₀(n)`, the number of divisors.
    pub fn divisor_count(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(_, e)| u64::from(e) + 1)
            .product()
    }

    pub fn divisors(&self) -> DivisorList {
        let mut divisors = vec![1u64];
        for &(p, e) in &self.factors {
            let current = divisors.len();
            let mut power = 1u64;
            for _ in 0..e {
                power *= p;
                for i in 0..current {
                    divisors.push(divisors[i] * power);
                }
            }
        }
        divisors.sort_unstable();
        DivisorList {
            n: self.n,
            divisors,
        }
    }

    /// Divisors `d` of `n` with `n/d` squarefree, ascending. These are the
    /// only divisors with `μ(n/d) ≠ 0`.
    pub fn cosquarefree_divisors(&self) -> Vec<u64> {
        let mut out = vec![self.n];
        for &(p, _) in &self.factors {
            let current = out.len();
            for i in 0..current {
                out.push(out[i] / p);
            }
        }
        out.sort_unstable();
        out
    }

    /// `σ_k(n)` computed multiplicatively, exactly.
    pub fn sigma(&self, k: u32) -> BigUint {
        let mut total = BigUint::one();
        for &(p, e) in &self.factors {
            if k == 0 {
                total *= BigUint::from(e + 1);
                continue;
            }
            let step = BigUint::from(p).pow(k);
            let mut term = BigUint::one();
            let mut local = BigUint::one();
            for _ in 0..e {
                term *= &step;
                local += &term;
            }
            total *= local;
        }
        total
    }
}

/// Sorted list of the positive divisors of `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorList {
    n: u64,
    divisors: Vec<u64>,
}

impl DivisorList {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.divisors
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, u64> {
        self.divisors.iter()
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.divisors
    }
}

impl<'a> IntoIterator for &'a DivisorList {
    type Item = &'a u64;
    type IntoIter = core::slice::Iter<'a, u64>;

    fn into_iter(self) -> Self::IntoIter {
        self.divisors.iter()
    }
}

/// Linear sieve over `1..=limit` holding the smallest prime factor, `μ` and `φ`.
///
/// Immutable after construction.
#[derive(Debug, Clone)]
pub struct SieveTable {
    spf: Vec<u32>,
    mobius: Vec<i8>,
    totient: Vec<u32>,
}

impl SieveTable {
    pub fn new(limit: u64) -> Result<Self> {
        if limit == 0 {
            return Err(domain!("sieve limit must be at least 1"));
        }
        if limit > SIEVE_MAX {
            return Err(Error::SieveTooLarge(limit));
        }
        let len = limit as usize + 1;
        let mut spf = vec![0u32; len];
        let mut mobius = vec![0i8; len];
        let mut totient = vec![0u32; len];
        let mut primes: Vec<u32> = Vec::new();
        spf[1] = 1;
        mobius[1] = 1;
        totient[1] = 1;
        for i in 2..len {
            if spf[i] == 0 {
                spf[i] = i as u32;
                mobius[i] = -1;
                totient[i] = i as u32 - 1;
                primes.push(i as u32);
            }
            let low = spf[i];
            for &p in &primes {
                let m = i as u64 * u64::from(p);
                if p > low || m > limit {
                    break;
                }
                let m = m as usize;
                spf[m] = p;
                if p == low {
                    mobius[m] = 0;
                    totient[m] = totient[i] * p;
                } else {
                    mobius[m] = -mobius[i];
                    totient[m] = totient[i] * (p - 1);
                }
            }
        }
        Ok(Self {
            spf,
            mobius,
            totient,
        })
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    fn index(&self, n: u64) -> Result<usize> {
        if n == 0 {
            return Err(domain!("n = 0"));
        }
        if n > self.limit() {
            return Err(Error::OutsideSieve {
                n,
                limit: self.limit(),
            });
        }
        Ok(n as usize)
    }

    pub fn smallest_prime_factor(&self, n: u64) -> Result<u64> {
        Ok(u64::from(self.spf[self.index(n)?]))
    }

    pub fn mobius(&self, n: u64) -> Result<i8> {
        Ok(self.mobius[self.index(n)?])
    }

    pub fn totient(&self, n: u64) -> Result<u64> {
        Ok(u64::from(self.totient[self.index(n)?]))
    }

    pub fn factorize(&self, n: u64) -> Result<PrimeFactorization> {
        let mut rest = self.index(n)?;
        let mut factors: Vec<(u64, u32)> = Vec::new();
        while rest > 1 {
            let p = self.spf[rest] as usize;
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p as u64, e));
        }
        Ok(PrimeFactorization { n, factors })
    }

    pub fn divisor_count(&self, n: u64) -> Result<u64> {
        Ok(self.factorize(n)?.divisor_count())
    }
}

/// Factors `n` using `table` when given, trial division otherwise.
pub fn factorize(n: u64, table: Option<&SieveTable>) -> Result<PrimeFactorization> {
    if n == 0 {
        return Err(domain!("cannot factor 0"));
    }
    if let Some(table) = table {
        return table.factorize(n);
    }
    if n > FACTORIZER_MAX {
        return Err(Error::TooLarge { n });
    }
    Ok(PrimeFactorization {
        n,
        factors: trial_division(n),
    })
}

fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
    let mut factors = Vec::new();
    let mut take = |n: &mut u64, p: u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    take(&mut n, 2);
    take(&mut n, 3);
    let mut d = 5u64;
    while d <= n / d {
        take(&mut n, d);
        take(&mut n, d + 2);
        d += 6;
    }
    if n > 1 {
        factors.push((n, 1));
    }
    factors
}

pub fn mobius(n: u64) -> Result<i8> {
    Ok(factorize(n, None)?.mobius())
}

pub fn totient(n: u64) -> Result<u64> {
    Ok(factorize(n, None)?.totient())
}

pub fn divisors(n: u64) -> Result<DivisorList> {
    Ok(factorize(n, None)?.divisors())
}

/// `σ_k(n) = ∑_{d|n} d^k`, exact.
pub fn sigma(k: u32, n: u64) -> Result<BigUint> {
    Ok(factorize(n, None)?.sigma(k))
}

/// `e_0, …, e_N` of `values`, built by multiplying in one root at a time.
pub fn elementary_symmetric(values: &[BigInt]) -> Vec<BigInt> {
    let mut e = vec![BigInt::one()];
    for v in values {
        e.push(BigInt::default());
        for j in (1..e.len()).rev() {
            let add = &e[j - 1] * v;
            e[j] += add;
        }
    }
    e
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}
