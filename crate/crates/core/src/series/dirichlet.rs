//! Partial sums of Dirichlet series of arithmetic functions, read off the sieve.

use crate::arith::SieveTable;
use crate::error::{Error, Result};
use crate::powi;
use crate::sum::NeumaierSum;

fn series(q_max: u64, table: &SieveTable, mut term: impl FnMut(u64) -> Result<f64>) -> Result<f64> {
    if q_max > table.limit() {
        return Err(Error::OutsideSieve {
            n: q_max,
            limit: table.limit(),
        });
    }
    let mut acc = NeumaierSum::new();
    for q in 1..=q_max {
        acc.add(term(q)?);
    }
    Ok(acc.value())
}

/// `∑_{q≤Q} φ(q)/q^s`
pub fn totient_series(s: u32, q_max: u64, table: &SieveTable) -> Result<f64> {
    series(q_max, table, |q| {
        Ok(table.totient(q)? as f64 / powi(q as f64, s))
    })
}

/// `∑_{q≤Q} σ₀(q)/q^s`
pub fn divisor_count_series(s: u32, q_max: u64, table: &SieveTable) -> Result<f64> {
    series(q_max, table, |q| {
        Ok(table.divisor_count(q)? as f64 / powi(q as f64, s))
    })
}

/// `∑_{q≤Q} μ(q)/q^s`
pub fn mobius_series(s: u32, q_max: u64, table: &SieveTable) -> Result<f64> {
    series(q_max, table, |q| {
        Ok(f64::from(table.mobius(q)?) / powi(q as f64, s))
    })
}
