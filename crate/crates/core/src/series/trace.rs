use alloc::vec::Vec;

use crate::arith::SieveTable;
use crate::error::{domain, precondition, Error, Result};
use crate::rsum::{csum_real, RealArgument};
use crate::series::CoefficientRule;
use crate::sum::ComplexSum;
use crate::{ensure_finite, ComplexValue};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub q: u64,
    /// `S_Q = prefactor(x) · ∑_{q≤Q} weight(q) c̃_q(x)`
    pub value: ComplexValue,
}

/// Partial sums of an expansion at increasing truncation points.
///
/// Every checkpoint is read off one running compensated sum, so a trace over
/// a superset of checkpoints reproduces the shared ones bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSumTrace {
    pub rule: CoefficientRule,
    pub x: f64,
    pub checkpoints: Vec<Checkpoint>,
}

impl PartialSumTrace {
    /// Accumulates a trace from `c̃_q(x)` for `q = 1, 2, …` supplied by `values`.
    ///
    /// This lets callers produce the per-`q` values however they like (for
    /// instance in parallel) while the accumulation stays sequential.
    pub fn accumulate<I>(
        rule: CoefficientRule,
        x: &RealArgument,
        checkpoints: &[u64],
        values: I,
        table: &SieveTable,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = Result<ComplexValue>>,
    {
        validate_checkpoints(checkpoints, table.limit())?;
        let prefactor = rule.prefactor(x.value())?;
        let mut values = values.into_iter();
        let mut acc = ComplexSum::new();
        let mut out = Vec::with_capacity(checkpoints.len());
        let mut q = 0u64;
        for &stop in checkpoints {
            while q < stop {
                q += 1;
                let c = values
                    .next()
                    .ok_or_else(|| precondition!("value stream ended at q = {}", q - 1))??;
                let phi = if rule.needs_totient() {
                    table.totient(q)?
                } else {
                    0
                };
                acc.add(c * rule.weight(q, phi));
            }
            out.push(Checkpoint {
                q: stop,
                value: ensure_finite(acc.value() * prefactor)?,
            });
        }
        Ok(Self {
            rule,
            x: x.value(),
            checkpoints: out,
        })
    }

    pub fn last(&self) -> Option<&Checkpoint> {
        self.checkpoints.last()
    }

    pub fn value_at(&self, q: u64) -> Option<ComplexValue> {
        self.checkpoints
            .binary_search_by_key(&q, |c| c.q)
            .ok()
            .map(|i| self.checkpoints[i].value)
    }
}

pub(crate) fn validate_checkpoints(checkpoints: &[u64], limit: u64) -> Result<()> {
    let Some(&last) = checkpoints.last() else {
        return Err(precondition!("at least one checkpoint is required"));
    };
    if checkpoints[0] == 0 {
        return Err(precondition!("checkpoints start at Q = 1"));
    }
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(precondition!("checkpoints must be strictly increasing"));
    }
    if last > limit {
        return Err(Error::OutsideSieve { n: last, limit });
    }
    Ok(())
}

/// Partial sums `S_Q` of the `rule` expansion at `x` for each checkpoint `Q`.
pub fn partial_sum_trace(
    rule: CoefficientRule,
    x: &RealArgument,
    checkpoints: &[u64],
    table: &SieveTable,
) -> Result<PartialSumTrace> {
    validate_checkpoints(checkpoints, table.limit())?;
    let q_max = *checkpoints.last().unwrap_or(&0);
    let values = (1..=q_max).map(|q| csum_real(q, x, Some(table)));
    PartialSumTrace::accumulate(rule, x, checkpoints, values, table)
}

/// `count` integers from `start` to `stop`, geometrically spaced and rounded.
pub fn geometric_grid(start: u64, stop: u64, count: usize) -> Result<Vec<u64>> {
    if start == 0 || stop <= start || count < 2 {
        return Err(domain!(
            "grid needs 1 ≤ start < stop and count ≥ 2, got {start}:{stop}:{count}"
        ));
    }
    let ratio = stop as f64 / start as f64;
    let mut grid: Vec<u64> = (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            libm::round(start as f64 * libm::pow(ratio, t)) as u64
        })
        .collect();
    grid[0] = start;
    grid[count - 1] = stop;
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(domain!(
            "grid {start}:{stop}:{count} rounds to repeated checkpoints"
        ));
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::zeta;

    fn arg(x: f64) -> RealArgument {
        RealArgument::new(x).unwrap()
    }

    #[test]
    fn grid_examples() {
        assert_eq!(
            geometric_grid(10, 10_000, 4).unwrap(),
            [10, 100, 1000, 10_000]
        );
        let g = geometric_grid(1000, 1_000_000, 12).unwrap();
        assert_eq!(g.len(), 12);
        assert_eq!((g[0], g[11]), (1000, 1_000_000));
        assert!(geometric_grid(1, 3, 10).is_err());
        assert!(geometric_grid(0, 3, 2).is_err());
        assert!(geometric_grid(5, 5, 2).is_err());
    }

    #[test]
    fn sigma1_at_six_converges_to_twelve() {
        let table = SieveTable::new(100_000).unwrap();
        let trace = partial_sum_trace(
            CoefficientRule::SigmaK(1),
            &arg(6.0),
            &[10, 1000, 100_000],
            &table,
        )
        .unwrap();
        let last = trace.last().unwrap().value;
        // tail ≤ 6·ζ(2)·σ₁(6)/Q
        assert!((last.re - 12.0).abs() <= 6.0 * zeta(2.0).unwrap() * 12.0 / 100_000.0);
        assert_eq!(last.im, 0.0);
    }

    #[test]
    fn zero_ramanujan_at_one_is_mobius_sum() {
        let table = SieveTable::new(20_000).unwrap();
        let trace = partial_sum_trace(
            CoefficientRule::ZeroRamanujan,
            &arg(1.0),
            &[100, 20_000],
            &table,
        )
        .unwrap();
        let mut oracle = 0.0;
        for q in 1..=20_000u64 {
            oracle += f64::from(crate::arith::mobius(q).unwrap()) / q as f64;
        }
        let got = trace.value_at(20_000).unwrap();
        assert!((got.re - oracle).abs() < 1e-12);
        assert!(got.re.abs() < 0.01);
    }

    #[test]
    fn sigma1_at_half_grows_logarithmically() {
        let table = SieveTable::new(100_000).unwrap();
        let trace = partial_sum_trace(
            CoefficientRule::SigmaK(1),
            &arg(0.5),
            &[1000, 100_000],
            &table,
        )
        .unwrap();
        let growth = trace.checkpoints[1].value - trace.checkpoints[0].value;
        let expected = (100.0f64).ln() / core::f64::consts::PI;
        assert!((growth.im - expected).abs() < 0.05 * expected);
    }

    #[test]
    fn prefix_stability() {
        let table = SieveTable::new(5000).unwrap();
        let x = arg(2f64.sqrt());
        for rule in [
            CoefficientRule::SigmaK(2),
            CoefficientRule::ZeroHardy,
            CoefficientRule::Sigma0Log,
        ] {
            let a = partial_sum_trace(rule, &x, &[50, 5000], &table).unwrap();
            let b = partial_sum_trace(rule, &x, &[7, 50, 333, 1234, 5000], &table).unwrap();
            assert_eq!(a.value_at(50), b.value_at(50));
            assert_eq!(a.value_at(5000), b.value_at(5000));
        }
    }

    #[test]
    fn rejects_bad_checkpoints() {
        let table = SieveTable::new(100).unwrap();
        let x = arg(0.5);
        let rule = CoefficientRule::ZeroHardy;
        assert!(partial_sum_trace(rule, &x, &[], &table).is_err());
        assert!(partial_sum_trace(rule, &x, &[10, 10], &table).is_err());
        assert!(partial_sum_trace(rule, &x, &[0, 10], &table).is_err());
        assert!(matches!(
            partial_sum_trace(rule, &x, &[10, 101], &table),
            Err(Error::OutsideSieve { .. })
        ));
    }

    #[test]
    fn accumulate_matches_direct_loop() {
        let table = SieveTable::new(300).unwrap();
        let x = arg(-3.7);
        let values: Vec<ComplexValue> = (1..=300)
            .map(|q| crate::rsum::csum_real_direct(q, &x).unwrap())
            .collect();
        let trace = PartialSumTrace::accumulate(
            CoefficientRule::ZeroHardy,
            &x,
            &[300],
            values.iter().copied().map(Ok),
            &table,
        )
        .unwrap();
        let mut plain = ComplexValue::new(0.0, 0.0);
        for (i, v) in values.iter().enumerate() {
            plain += v / crate::arith::totient(i as u64 + 1).unwrap() as f64;
        }
        assert!((trace.last().unwrap().value - plain).norm() < 1e-9);
        // a short stream is an error, not a silent truncation
        assert!(PartialSumTrace::accumulate(
            CoefficientRule::ZeroHardy,
            &x,
            &[300],
            values[..10].iter().copied().map(Ok),
            &table,
        )
        .is_err());
    }
}
