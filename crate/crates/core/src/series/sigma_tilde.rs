use crate::arith::SieveTable;
use crate::error::{domain, Error, Result};
use crate::rsum::{csum_real_with_error, RealArgument};
use crate::series::tail::{TailModel, TruncationSearch};
use crate::series::{zeta, ZETA_RELATIVE_ERROR};
use crate::sum::ComplexSum;
use crate::{ensure_finite, powi, ComplexValue};

/// Share of the target error spent on truncation; rounding must fit in the rest.
pub(crate) const TRUNCATION_SHARE: f64 = 0.9;

/// A certified evaluation of `σ̃_k(x) = x^k ζ(k+1) ∑_q c̃_q(x)/q^{k+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaTilde {
    pub k: u32,
    pub x: f64,
    pub value: ComplexValue,
    /// Truncation bound plus rounding estimate; never above the requested target.
    pub achieved_bound: f64,
    /// Last `q` included in the sum.
    pub truncation: u64,
}

/// Evaluates `σ̃_k(x)` to within `target_error`.
///
/// At non-integer `x` only `k ≥ 2` converges; `k ≤ 1` is refused with
/// [`Error::DivergentRequest`]. The truncation point must lie inside `table`.
pub fn sigma_tilde(
    k: u32,
    x: &RealArgument,
    target_error: f64,
    table: &SieveTable,
) -> Result<SigmaTilde> {
    if k == 0 {
        return Err(domain!(
            "σ̃_0 has no convergent expansion of this form; use k ≥ 1"
        ));
    }
    if !x.is_integer() && k <= 1 {
        return Err(Error::DivergentRequest { k });
    }
    if !(target_error > 0.0 && target_error.is_finite()) {
        return Err(domain!(
            "target error must be positive and finite, got {target_error}"
        ));
    }
    let model = TailModel::for_argument(x)?;
    let power = powi(x.value(), k);
    let zeta_value = zeta(f64::from(k) + 1.0)?;
    let scale = power.abs() * zeta_value;
    let truncation =
        match model.truncation(k, scale, TRUNCATION_SHARE * target_error, table.limit())? {
            TruncationSearch::Found(q) => q,
            TruncationSearch::Beyond(required) => {
                return Err(Error::TruncationExceedsSieve {
                    required,
                    limit: table.limit(),
                })
            }
        };

    let mut acc = ComplexSum::new();
    let mut magnitude = 0.0;
    let mut evaluation_error = 0.0;
    for q in 1..=truncation {
        let (c, err) = csum_real_with_error(q, x, Some(table))?;
        let w = 1.0 / powi(q as f64, k + 1);
        acc.add(c * w);
        magnitude += c.norm() * w;
        evaluation_error += err * w;
    }
    let value = ensure_finite(acc.value() * (power * zeta_value))?;

    let u = f64::EPSILON;
    let rounding = scale * (evaluation_error + f64::from(k + 4) * u * magnitude)
        + value.norm() * (ZETA_RELATIVE_ERROR + f64::from(k + 2) * u);
    let achieved_bound = scale * model.bound(k, truncation)? + rounding;
    if achieved_bound > target_error {
        return Err(Error::PrecisionLoss {
            rounding,
            target: target_error,
        });
    }
    Ok(SigmaTilde {
        k,
        x: x.value(),
        value,
        achieved_bound,
        truncation,
    })
}
