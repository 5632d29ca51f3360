use alloc::format;
use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use crate::error::{domain, Error, Result};
use crate::series::zeta;
use crate::{powi, ComplexValue};

/// Which Ramanujan coefficients `f̂(q)` an expansion uses.
///
/// The per-`q` part is [`CoefficientRule::weight`]; the `x`-dependent
/// prefactor is [`CoefficientRule::prefactor`], applied once per checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientRule {
    /// `x^k ζ(k+1) / q^{k+1}`, the expansion of `σ_k`.
    SigmaK(u32),
    /// `1/q`, Ramanujan's expansion of zero.
    ZeroRamanujan,
    /// `1/φ(q)`, Hardy's expansion of zero.
    ZeroHardy,
    /// `−(log q)/q`, the expansion of `σ₀`.
    Sigma0Log,
}

impl CoefficientRule {
    /// The `q`-dependent part of `f̂(q)`; `phi` is `φ(q)`.
    pub fn weight(&self, q: u64, phi: u64) -> f64 {
        let qf = q as f64;
        match *self {
            CoefficientRule::SigmaK(k) => 1.0 / powi(qf, k + 1),
            CoefficientRule::ZeroRamanujan => 1.0 / qf,
            CoefficientRule::ZeroHardy => 1.0 / phi as f64,
            CoefficientRule::Sigma0Log => -libm::log(qf) / qf,
        }
    }

    pub fn needs_totient(&self) -> bool {
        matches!(self, CoefficientRule::ZeroHardy)
    }

    /// `x^k ζ(k+1)` for `SigmaK(k)`, 1 for the other rules.
    pub fn prefactor(&self, x: f64) -> Result<f64> {
        match *self {
            CoefficientRule::SigmaK(0) => Err(domain!("sigma:0 needs ζ(1), which diverges")),
            CoefficientRule::SigmaK(k) => Ok(powi(x, k) * zeta(f64::from(k) + 1.0)?),
            _ => Ok(1.0),
        }
    }

    pub fn name(&self) -> String {
        format!("{self}")
    }
}

impl fmt::Display for CoefficientRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRule::SigmaK(k) => write!(f, "sigma:{k}"),
            CoefficientRule::ZeroRamanujan => f.write_str("zero-ramanujan"),
            CoefficientRule::ZeroHardy => f.write_str("zero-hardy"),
            CoefficientRule::Sigma0Log => f.write_str("sigma0-log"),
        }
    }
}

impl FromStr for CoefficientRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero-ramanujan" => Ok(CoefficientRule::ZeroRamanujan),
            "zero-hardy" => Ok(CoefficientRule::ZeroHardy),
            "sigma0-log" => Ok(CoefficientRule::Sigma0Log),
            _ => {
                let k = s
                    .strip_prefix("sigma:")
                    .and_then(|k| k.parse::<u32>().ok())
                    .ok_or_else(|| {
                        domain!("unknown rule {s:?}; expected sigma:<k>, zero-ramanujan, zero-hardy or sigma0-log")
                    })?;
                Ok(CoefficientRule::SigmaK(k))
            }
        }
    }
}

/// The full coefficient `f̂(q)` at `x`, prefactor included.
pub fn coefficient(rule: CoefficientRule, q: u64, x: f64) -> Result<ComplexValue> {
    if q == 0 {
        return Err(domain!("q must be at least 1"));
    }
    let phi = if rule.needs_totient() {
        crate::arith::totient(q)?
    } else {
        0
    };
    Ok(ComplexValue::new(
        rule.prefactor(x)? * rule.weight(q, phi),
        0.0,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn coefficient_examples() {
        let c = coefficient(CoefficientRule::SigmaK(1), 2, 1.0).unwrap();
        assert!((c.re - PI * PI / 24.0).abs() < 1e-12);
        assert!((c.re - 0.4112335).abs() < 1e-7);
        assert_eq!(c.im, 0.0);
        assert_eq!(
            coefficient(CoefficientRule::ZeroRamanujan, 7, 3.3)
                .unwrap()
                .re,
            1.0 / 7.0
        );
        assert_eq!(
            coefficient(CoefficientRule::Sigma0Log, 1, 0.5).unwrap().re,
            0.0
        );
        assert_eq!(
            coefficient(CoefficientRule::ZeroHardy, 10, 0.5).unwrap().re,
            0.25
        );
        assert!(coefficient(CoefficientRule::SigmaK(0), 3, 1.0).is_err());
        assert!(coefficient(CoefficientRule::ZeroHardy, 0, 1.0).is_err());
    }

    #[test]
    fn names_round_trip() {
        for rule in [
            CoefficientRule::SigmaK(1),
            CoefficientRule::SigmaK(12),
            CoefficientRule::ZeroRamanujan,
            CoefficientRule::ZeroHardy,
            CoefficientRule::Sigma0Log,
        ] {
            assert_eq!(rule.name().parse::<CoefficientRule>().unwrap(), rule);
        }
        assert!("sigma:".parse::<CoefficientRule>().is_err());
        assert!("hardy".parse::<CoefficientRule>().is_err());
    }
}
