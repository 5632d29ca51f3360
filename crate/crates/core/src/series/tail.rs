use num_traits::ToPrimitive;

use crate::error::{domain, Error, Result};
use crate::powi;
use crate::rsum::RealArgument;

/// Upper bound on `∑_{q>Q} φ(q)/q^{k+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBound {
    pub k: u32,
    pub q: u64,
    pub bound: f64,
}

/// `Q^{1−k}/(k−1) + Q^{−k}`, which dominates `∑_{q>Q} q^{−k} ≥ ∑_{q>Q} φ(q)/q^{k+1}`.
pub fn tail_bound(k: u32, q: u64) -> Result<TailBound> {
    if k < 2 {
        return Err(domain!("tail bound needs k ≥ 2, got {k}"));
    }
    if q == 0 {
        return Err(domain!("Q must be at least 1"));
    }
    Ok(TailBound {
        k,
        q,
        bound: totient_tail(k, q as f64),
    })
}

fn totient_tail(k: u32, q: f64) -> f64 {
    let qk = powi(q, k);
    q / (qk * f64::from(k - 1)) + 1.0 / qk
}

/// How large `|c̃_q(x)|` can be, which decides the tail of `∑ |c̃_q(x)|/q^{m+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum TailModel {
    /// `|c̃_q(x)| ≤ φ(q)`.
    Totient,
    /// `|c_q(n)| ≤ σ₁(|n|)` for a nonzero integer `n`.
    Integer { sigma1: f64 },
}

impl TailModel {
    pub(crate) fn for_argument(x: &RealArgument) -> Result<Self> {
        match x.as_integer() {
            Some(0) | None => Ok(TailModel::Totient),
            Some(n) => {
                let s = crate::arith::sigma(1, n.unsigned_abs())?;
                let sigma1 = s.to_f64().ok_or(Error::NonFinite)? * (1.0 + 4.0 * f64::EPSILON);
                Ok(TailModel::Integer { sigma1 })
            }
        }
    }

    /// Bound on `∑_{q>Q} |c̃_q(x)|/q^{m+1}`.
    pub(crate) fn bound(&self, m: u32, q: u64) -> Result<f64> {
        let qf = q as f64;
        match *self {
            TailModel::Totient if m < 2 => Err(Error::DivergentRequest { k: m }),
            TailModel::Totient => Ok(totient_tail(m, qf)),
            TailModel::Integer { sigma1 } => {
                if m == 0 {
                    return Err(domain!("no tail bound for m = 0"));
                }
                // ∑_{q>Q} q^{−m−1} ≤ Q^{−m}/m
                let integer = sigma1 / (powi(qf, m) * f64::from(m));
                Ok(if m >= 2 {
                    integer.min(totient_tail(m, qf))
                } else {
                    integer
                })
            }
        }
    }

    /// Smallest `Q ≤ limit` with `scale · bound(m, Q) ≤ budget`, if any.
    pub(crate) fn truncation(
        &self,
        m: u32,
        scale: f64,
        budget: f64,
        limit: u64,
    ) -> Result<TruncationSearch> {
        let ok = |q: u64| -> Result<bool> { Ok(scale * self.bound(m, q)? <= budget) };
        if ok(1)? {
            return Ok(TruncationSearch::Found(1));
        }
        if !ok(limit)? {
            // first Q that would do, found by doubling past the limit
            let mut q = limit.max(1);
            while q < u64::MAX / 2 && !ok(q)? {
                q *= 2;
            }
            return Ok(TruncationSearch::Beyond(q));
        }
        let (mut lo, mut hi) = (1u64, limit);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if ok(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(TruncationSearch::Found(hi))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TruncationSearch {
    Found(u64),
    /// No `Q` within the limit suffices; the payload is an upper estimate of the one needed.
    Beyond(u64),
}

/// Certified bound on `∑_{q>Q} |c̃_q(x)|/q^{m+1}`, using `|c_q(n)| ≤ σ₁(|n|)`
/// at nonzero integers and `|c̃_q(x)| ≤ φ(q)` otherwise.
pub fn series_tail(m: u32, q: u64, x: &RealArgument) -> Result<f64> {
    if q == 0 {
        return Err(domain!("Q must be at least 1"));
    }
    TailModel::for_argument(x)?.bound(m, q)
}
