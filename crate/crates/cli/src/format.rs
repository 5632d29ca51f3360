//! File formats for traces and reports.
//!
//! CSV floats are written with 17 significant digits and JSON floats in
//! serde_json's shortest round-trip form, so every file reads back to the
//! exact in-memory values.

use std::io::{Read, Write};

use anyhow::{anyhow, Context, Result};
use num_bigint::BigUint;
use num_rational::BigRational;
use ramanujan_core::local::{LocalValue, LocalityReport, LocalitySample};
use ramanujan_core::rsum::{Residual, Theorem1Report};
use ramanujan_core::series::{Abscissa, Checkpoint, PartialSumTrace, SigmaTilde, SlopeFit};
use ramanujan_core::ComplexValue;
use serde::{Deserialize, Serialize};

pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Serialize, Deserialize)]
struct TraceRow {
    #[serde(rename = "Q")]
    q: u64,
    re: String,
    im: String,
}

pub fn write_trace_csv(out: impl Write, checkpoints: &[Checkpoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for c in checkpoints {
        w.serialize(TraceRow {
            q: c.q,
            re: float(c.value.re),
            im: float(c.value.im),
        })?;
    }
    if checkpoints.is_empty() {
        w.write_record(["Q", "re", "im"])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace_csv(input: impl Read) -> Result<Vec<Checkpoint>> {
    let mut r = csv::Reader::from_reader(input);
    expect_header(&mut r, &["Q", "re", "im"])?;
    r.deserialize::<TraceRow>()
        .map(|row| {
            let row = row?;
            Ok(Checkpoint {
                q: row.q,
                value: ComplexValue::new(parse_float(&row.re)?, parse_float(&row.im)?),
            })
        })
        .collect()
}

#[derive(Debug, Serialize, Deserialize)]
struct ResidualRow {
    q: u64,
    res_re: String,
    res_im: String,
    sigma0: u64,
    phi: u64,
}

pub fn write_residuals_csv(out: impl Write, residuals: &[Residual]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in residuals {
        w.serialize(ResidualRow {
            q: r.q,
            res_re: float(r.residual.re),
            res_im: float(r.residual.im),
            sigma0: r.sigma0,
            phi: r.phi,
        })?;
    }
    if residuals.is_empty() {
        w.write_record(["q", "res_re", "res_im", "sigma0", "phi"])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_residuals_csv(input: impl Read) -> Result<Vec<Residual>> {
    let mut r = csv::Reader::from_reader(input);
    expect_header(&mut r, &["q", "res_re", "res_im", "sigma0", "phi"])?;
    r.deserialize::<ResidualRow>()
        .map(|row| {
            let row = row?;
            Ok(Residual {
                q: row.q,
                residual: ComplexValue::new(parse_float(&row.res_re)?, parse_float(&row.res_im)?),
                sigma0: row.sigma0,
                phi: row.phi,
            })
        })
        .collect()
}

fn expect_header<R: Read>(r: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let header = r.headers()?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(anyhow!(
            "unexpected CSV header {:?}, wanted {}",
            header.iter().collect::<Vec<_>>(),
            expected.join(",")
        ));
    }
    Ok(())
}

fn parse_float(s: &str) -> Result<f64> {
    s.trim().parse().with_context(|| format!("bad float {s:?}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub re: f64,
    pub im: f64,
}

impl From<ComplexValue> for ComplexDoc {
    fn from(z: ComplexValue) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexDoc> for ComplexValue {
    fn from(z: ComplexDoc) -> Self {
        ComplexValue::new(z.re, z.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointDoc {
    pub q: u64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceDoc {
    pub paper_ref: String,
    pub rule: String,
    pub x: f64,
    pub checkpoints: Vec<PointDoc>,
}

impl TraceDoc {
    pub fn new(trace: &PartialSumTrace) -> Self {
        Self {
            paper_ref: expansion_ref(&trace.rule.name()),
            rule: trace.rule.name(),
            x: trace.x,
            checkpoints: trace
                .checkpoints
                .iter()
                .map(|c| PointDoc {
                    q: c.q,
                    re: c.value.re,
                    im: c.value.im,
                })
                .collect(),
        }
    }

    pub fn into_trace(self) -> Result<PartialSumTrace> {
        Ok(PartialSumTrace {
            rule: self.rule.parse().map_err(|e| anyhow!("{e}"))?,
            x: self.x,
            checkpoints: self
                .checkpoints
                .into_iter()
                .map(|p| Checkpoint {
                    q: p.q,
                    value: ComplexValue::new(p.re, p.im),
                })
                .collect(),
        })
    }
}

/// The expansion a coefficient rule sums.
pub fn expansion_ref(rule: &str) -> String {
    match rule {
        "zero-ramanujan" => "Ramanujan's zero expansion 0 = sum_q c_q(x)/q".into(),
        "zero-hardy" => "Hardy's zero expansion 0 = sum_q c_q(x)/phi(q)".into(),
        "sigma0-log" => "divisor-count expansion sigma_0(x) = -sum_q log(q) c_q(x)/q".into(),
        other => match other.strip_prefix("sigma:") {
            Some(k) => format!(
                "Ramanujan expansion sigma_k(x) = x^k zeta(k+1) sum_q c_q(x)/q^(k+1) with k = {k}"
            ),
            None => format!("Ramanujan expansion with rule {other}"),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualDoc {
    pub q: u64,
    pub res_re: f64,
    pub res_im: f64,
    pub sigma0: u64,
    pub phi: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Doc {
    pub paper_ref: String,
    pub x: f64,
    pub q_min: u64,
    pub q_max: u64,
    pub factor: ComplexDoc,
    pub c_estimate: f64,
    pub residuals: Vec<ResidualDoc>,
}

impl Theorem1Doc {
    pub fn new(report: &Theorem1Report) -> Self {
        Self {
            paper_ref: "asymptotic c_q(x) = (e^(2 pi i x) - 1)/(2 pi i x) phi(q) + O(sigma_0(q)) for q > 2 pi |x|".into(),
            x: report.x,
            q_min: report.q_range.0,
            q_max: report.q_range.1,
            factor: report.factor.into(),
            c_estimate: report.c_estimate,
            residuals: report
                .residuals
                .iter()
                .map(|r| ResidualDoc {
                    q: r.q,
                    res_re: r.residual.re,
                    res_im: r.residual.im,
                    sigma0: r.sigma0,
                    phi: r.phi,
                })
                .collect(),
        }
    }

    pub fn into_report(self) -> Theorem1Report {
        Theorem1Report {
            x: self.x,
            q_range: (self.q_min, self.q_max),
            factor: self.factor.into(),
            residuals: self
                .residuals
                .into_iter()
                .map(|r| Residual {
                    q: r.q,
                    residual: ComplexValue::new(r.res_re, r.res_im),
                    sigma0: r.sigma0,
                    phi: r.phi,
                })
                .collect(),
            c_estimate: self.c_estimate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeDoc {
    pub paper_ref: String,
    pub rule: String,
    pub x: f64,
    pub abscissa: String,
    pub slope: ComplexDoc,
    pub intercept: ComplexDoc,
    pub rms_residual: f64,
    pub points: usize,
    pub expected_slope: Option<ComplexDoc>,
}

impl SlopeDoc {
    pub fn new(rule: &str, x: f64, fit: &SlopeFit, expected: Option<ComplexValue>) -> Self {
        Self {
            paper_ref: format!(
                "growth rate of the partial sums of the {}",
                expansion_ref(rule)
            ),
            rule: rule.into(),
            x,
            abscissa: fit.abscissa.name().into(),
            slope: fit.slope.into(),
            intercept: fit.intercept.into(),
            rms_residual: fit.rms_residual,
            points: fit.points,
            expected_slope: expected.map(Into::into),
        }
    }

    pub fn into_fit(self) -> Result<SlopeFit> {
        let abscissa = match self.abscissa.as_str() {
            "log_Q" => Abscissa::LogQ,
            "Q" => Abscissa::Q,
            other => return Err(anyhow!("unknown abscissa {other:?}")),
        };
        Ok(SlopeFit {
            abscissa,
            slope: self.slope.into(),
            intercept: self.intercept.into(),
            rms_residual: self.rms_residual,
            points: self.points,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaTildeDoc {
    pub paper_ref: String,
    pub k: u32,
    pub x: f64,
    pub value: ComplexDoc,
    pub achieved_bound: f64,
    pub truncation: u64,
}

impl SigmaTildeDoc {
    pub fn new(s: &SigmaTilde) -> Self {
        Self {
            paper_ref: expansion_ref(&format!("sigma:{}", s.k)),
            k: s.k,
            x: s.x,
            value: s.value.into(),
            achieved_bound: s.achieved_bound,
            truncation: s.truncation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleDoc {
    pub point: f64,
    pub value: ComplexDoc,
    pub certified_error: f64,
    /// Decimal `σ₁(point)`.
    pub reference: Option<String>,
    /// `p/q` or an integer.
    pub exact_expansion: Option<String>,
    pub matches: Option<bool>,
}

pub const LOCALITY_REF: &str =
    "local divisor-function interpolant sigma_1(x, alpha) = -(1/a_0) sum_n a_n sigma_(n+1)(x) from the divisor polynomial of alpha";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalityDoc {
    pub paper_ref: String,
    pub alpha: i64,
    pub target_error: f64,
    pub samples: Vec<SampleDoc>,
}

impl LocalityDoc {
    pub fn new(report: &LocalityReport) -> Self {
        Self {
            paper_ref: LOCALITY_REF.into(),
            alpha: report.alpha,
            target_error: report.target_error,
            samples: report
                .samples
                .iter()
                .map(|s| SampleDoc {
                    point: s.point,
                    value: s.value.into(),
                    certified_error: s.certified_error,
                    reference: s.reference.as_ref().map(ToString::to_string),
                    exact_expansion: s.exact_expansion.as_ref().map(ToString::to_string),
                    matches: s.matches,
                })
                .collect(),
        }
    }

    pub fn into_report(self) -> Result<LocalityReport> {
        let samples = self
            .samples
            .into_iter()
            .map(|s| {
                Ok(LocalitySample {
                    point: s.point,
                    value: s.value.into(),
                    certified_error: s.certified_error,
                    reference: s
                        .reference
                        .map(|r| r.parse::<BigUint>())
                        .transpose()
                        .context("bad reference")?,
                    exact_expansion: s
                        .exact_expansion
                        .map(|r| r.parse::<BigRational>())
                        .transpose()
                        .context("bad exact expansion")?,
                    matches: s.matches,
                })
            })
            .collect::<Result<_>>()?;
        Ok(LocalityReport {
            alpha: self.alpha,
            target_error: self.target_error,
            samples,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalPointDoc {
    pub point: f64,
    pub value: ComplexDoc,
    pub certified_error: f64,
    pub truncation: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalValuesDoc {
    pub paper_ref: String,
    pub alpha: i64,
    pub function: String,
    pub target_error: f64,
    pub values: Vec<LocalPointDoc>,
}

impl LocalValuesDoc {
    pub fn new(
        alpha: i64,
        function: &str,
        target_error: f64,
        values: &[(f64, LocalValue)],
    ) -> Self {
        let paper_ref = if function == "sigma0" {
            "local divisor-count interpolant sigma_0(x, alpha) = -(1/a_0)(sum_{n>=2} a_n sigma_n(x) + a_1 sigma_1(x, alpha))".into()
        } else {
            LOCALITY_REF.into()
        };
        Self {
            paper_ref,
            alpha,
            function: function.into(),
            target_error,
            values: values
                .iter()
                .map(|(point, v)| LocalPointDoc {
                    point: *point,
                    value: v.value.into(),
                    certified_error: v.certified_error,
                    truncation: v.truncation,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorDoc {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
    pub mobius: i8,
    pub totient: u64,
    pub divisor_count: u64,
    pub sigma1: String,
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: for<'de> Deserialize<'de>>(input: impl Read) -> Result<T> {
    Ok(serde_json::from_reader(input)?)
}
