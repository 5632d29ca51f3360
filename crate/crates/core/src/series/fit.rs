use core::f64::consts::PI;

use crate::arith::SieveTable;
use crate::error::{precondition, Error, Result};
use crate::rsum::{main_term_factor, RealArgument};
use crate::series::{partial_sum_trace, CoefficientRule, PartialSumTrace};
use crate::ComplexValue;

/// Fits need at least this many checkpoints.
pub const MIN_FIT_POINTS: usize = 8;

/// [`divergence_slope`] grids must span a factor of at least `10^3`.
pub const MIN_FIT_DECADES: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Abscissa {
    LogQ,
    Q,
}

impl Abscissa {
    pub fn at(&self, q: u64) -> f64 {
        match self {
            Abscissa::LogQ => libm::log(q as f64),
            Abscissa::Q => q as f64,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Abscissa::LogQ => "log_Q",
            Abscissa::Q => "Q",
        }
    }
}

/// Unweighted least-squares line `S_Q ≈ intercept + slope·t(Q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub abscissa: Abscissa,
    pub slope: ComplexValue,
    pub intercept: ComplexValue,
    /// `sqrt(mean |S_Q − fit|²)`
    pub rms_residual: f64,
    pub points: usize,
}

/// Fits the checkpoints of `trace` against `abscissa`.
pub fn fit_line(abscissa: Abscissa, trace: &PartialSumTrace) -> Result<SlopeFit> {
    let points = trace.checkpoints.len();
    if points < 2 {
        return Err(precondition!("a line fit needs at least 2 checkpoints"));
    }
    let n = points as f64;
    let ts = || trace.checkpoints.iter().map(|c| abscissa.at(c.q));
    let t_mean = ts().sum::<f64>() / n;
    let y_mean = trace
        .checkpoints
        .iter()
        .fold(ComplexValue::new(0.0, 0.0), |a, c| a + c.value)
        / n;
    let mut sxx = 0.0;
    let mut sxy = ComplexValue::new(0.0, 0.0);
    for (t, c) in ts().zip(&trace.checkpoints) {
        sxx += (t - t_mean) * (t - t_mean);
        sxy += (c.value - y_mean) * (t - t_mean);
    }
    if sxx == 0.0 {
        return Err(precondition!("checkpoints have no spread"));
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * t_mean;
    let sq: f64 = ts()
        .zip(&trace.checkpoints)
        .map(|(t, c)| (c.value - (intercept + slope * t)).norm_sqr())
        .sum();
    Ok(SlopeFit {
        abscissa,
        slope,
        intercept,
        rms_residual: libm::sqrt(sq / n),
        points,
    })
}

/// The growth law of a divergent expansion at `x ∉ Z`, when one is known.
///
/// - `SigmaK(1)` grows like `(e^{2πix}−1)/(2πi) · log Q`,
/// - `ZeroHardy` like `factor(x) · Q`,
/// - `ZeroRamanujan` like `factor(x)/ζ(2) · Q`.
pub fn expected_divergence_slope(
    rule: CoefficientRule,
    x: &RealArgument,
) -> Option<(Abscissa, ComplexValue)> {
    if x.is_integer() {
        return None;
    }
    let factor = main_term_factor(x);
    match rule {
        CoefficientRule::SigmaK(1) => Some((Abscissa::LogQ, factor * x.value())),
        CoefficientRule::ZeroHardy => Some((Abscissa::Q, factor)),
        CoefficientRule::ZeroRamanujan => Some((Abscissa::Q, factor * (6.0 / (PI * PI)))),
        _ => None,
    }
}

/// Measures the growth rate of a divergent expansion at `x ∉ Z` by fitting
/// its partial sums over `q_grid`.
pub fn divergence_slope(
    rule: CoefficientRule,
    x: &RealArgument,
    q_grid: &[u64],
    table: &SieveTable,
) -> Result<SlopeFit> {
    let abscissa = divergence_abscissa(rule, x, q_grid)?;
    let trace = partial_sum_trace(rule, x, q_grid, table)?;
    fit_line(abscissa, &trace)
}

/// Checks that `q_grid` supports a divergence fit for `rule` at `x` and
/// returns the abscissa the growth law is linear in.
pub fn divergence_abscissa(
    rule: CoefficientRule,
    x: &RealArgument,
    q_grid: &[u64],
) -> Result<Abscissa> {
    if x.is_integer() {
        return Err(Error::IntegerArgument(x.value()));
    }
    let Some((abscissa, _)) = expected_divergence_slope(rule, x) else {
        return Err(precondition!("no divergence model for rule {rule}"));
    };
    if q_grid.len() < MIN_FIT_POINTS {
        return Err(precondition!(
            "slope fits need at least {MIN_FIT_POINTS} checkpoints, got {}",
            q_grid.len()
        ));
    }
    let (first, last) = (q_grid[0].max(1), q_grid[q_grid.len() - 1]);
    if libm::log10(last as f64 / first as f64) < MIN_FIT_DECADES - 1e-9 {
        return Err(precondition!(
            "slope grid {first}..{last} spans fewer than 3 decades"
        ));
    }
    Ok(abscissa)
}

#[cfg(test)]
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;
    use crate::series::{geometric_grid, Checkpoint};
    use alloc::vec::Vec;

    fn arg(x: f64) -> RealArgument {
        RealArgument::new(x).unwrap()
    }

    #[test]
    fn expected_slopes() {
        let x = arg(0.5);
        let (a, s) = expected_divergence_slope(CoefficientRule::SigmaK(1), &x).unwrap();
        assert_eq!(a, Abscissa::LogQ);
        assert!((s - ComplexValue::new(0.0, 1.0 / PI)).norm() < 1e-15);
        let (_, s) = expected_divergence_slope(CoefficientRule::ZeroHardy, &x).unwrap();
        assert!((s.im - 0.6366).abs() < 1e-4);
        let (_, s) = expected_divergence_slope(CoefficientRule::ZeroRamanujan, &x).unwrap();
        assert!((s.im - 0.3870).abs() < 1e-4);
        assert!(expected_divergence_slope(CoefficientRule::SigmaK(2), &x).is_none());
        assert!(expected_divergence_slope(CoefficientRule::Sigma0Log, &x).is_none());
        assert!(expected_divergence_slope(CoefficientRule::ZeroHardy, &arg(3.0)).is_none());
    }

    #[test]
    fn fit_recovers_exact_line() {
        let checkpoints: Vec<Checkpoint> = [10u64, 20, 40, 80]
            .iter()
            .map(|&q| Checkpoint {
                q,
                value: ComplexValue::new(1.0, -2.0)
                    + ComplexValue::new(0.5, 3.0) * libm::log(q as f64),
            })
            .collect();
        let trace = PartialSumTrace {
            rule: CoefficientRule::SigmaK(1),
            x: 0.5,
            checkpoints,
        };
        let fit = fit_line(Abscissa::LogQ, &trace).unwrap();
        assert!((fit.slope - ComplexValue::new(0.5, 3.0)).norm() < 1e-12);
        assert!((fit.intercept - ComplexValue::new(1.0, -2.0)).norm() < 1e-12);
        assert!(fit.rms_residual < 1e-12);
    }

    #[test]
    fn hardy_slope_at_half() {
        let table = SieveTable::new(100_000).unwrap();
        let grid = geometric_grid(100, 100_000, 10).unwrap();
        let fit = divergence_slope(CoefficientRule::ZeroHardy, &arg(0.5), &grid, &table).unwrap();
        let expected = ComplexValue::new(0.0, 2.0 / PI);
        assert!((fit.slope - expected).norm() < 0.05 * expected.norm());
    }

    #[test]
    fn ramanujan_zero_slope_at_half() {
        let table = SieveTable::new(100_000).unwrap();
        let grid = geometric_grid(100, 100_000, 10).unwrap();
        let fit =
            divergence_slope(CoefficientRule::ZeroRamanujan, &arg(0.5), &grid, &table).unwrap();
        let expected = ComplexValue::new(0.0, 0.387_018_413_198_393_9);
        assert!((fit.slope - expected).norm() < 0.05 * expected.norm());
    }

    #[test]
    fn slope_preconditions() {
        let table = SieveTable::new(100_000).unwrap();
        let grid = geometric_grid(100, 100_000, 10).unwrap();
        let short = geometric_grid(1000, 100_000, 10).unwrap();
        let rule = CoefficientRule::SigmaK(1);
        assert!(divergence_slope(rule, &arg(2.0), &grid, &table).is_err());
        assert!(divergence_slope(rule, &arg(0.5), &grid[..7], &table).is_err());
        assert!(divergence_slope(rule, &arg(0.5), &short, &table).is_err());
        assert!(divergence_slope(CoefficientRule::SigmaK(3), &arg(0.5), &grid, &table).is_err());
    }
}
