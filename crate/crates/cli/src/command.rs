//! Subcommands and their execution.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ramanujan_core::arith::{factorize, SieveTable, SIEVE_MAX};
use ramanujan_core::local::{
    locality_report_with, recurrence_residual, sigma0_local_with, LocalOptions, Precision,
    DEFAULT_N_MAX,
};
use ramanujan_core::rsum::{csum_int, csum_real, RealArgument, Stride, Theorem1Report};
use ramanujan_core::series::{
    divergence_abscissa, expected_divergence_slope, fit_line, geometric_grid, sigma_tilde, zeta,
    Abscissa, CoefficientRule, PartialSumTrace,
};
use ramanujan_core::ComplexValue;

use crate::format::{
    self, FactorDoc, LocalValuesDoc, LocalityDoc, SigmaTildeDoc, SlopeDoc, Theorem1Doc, TraceDoc,
};
use crate::sweep::Sweep;

const DEFAULT_SIEVE: u64 = 1_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "ramanujan",
    version,
    about = "Ramanujan sums, their expansions, and local divisor-function interpolants"
)]
pub struct Cli {
    /// Worker threads for per-q evaluation.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prime factorization with μ, φ, σ₀, σ₁.
    Factor {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = ScalarFormat::Text)]
        format: ScalarFormat,
    },
    /// Integer Ramanujan sum c_q(n).
    Csum {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Real-argument Ramanujan sum c̃_q(x), printed as `re im`.
    CsumReal {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
    /// Partial-sum trace of an expansion.
    Expand {
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        output: TableOutput,
    },
    /// Certified value of the convergent expansion σ̃_k(x).
    SigmaTilde {
        #[arg(long)]
        k: u32,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value_t = 1e-6)]
        target_error: f64,
        #[arg(long, default_value_t = DEFAULT_SIEVE)]
        sieve_limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Residuals c̃_q(x) − factor(x)·φ(q).
    Thm1 {
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long)]
        qmin: u64,
        #[arg(long)]
        qmax: u64,
        /// `all`, `every:<n>`, or `geometric:<count>`.
        #[arg(long, default_value = "all")]
        stride: String,
        #[command(flatten)]
        output: TableOutput,
    },
    /// Least-squares growth rate of a divergent expansion.
    Slope {
        #[command(flatten)]
        series: SeriesArgs,
        /// Fit against this abscissa instead of the rule's growth law; skips the grid-span checks.
        #[arg(long, value_enum)]
        abscissa: Option<AbscissaArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Local interpolants σ̃₁(x, α) or σ̃₀(x, α).
    Local {
        #[arg(long, allow_hyphen_values = true)]
        alpha: i64,
        /// Comma-separated evaluation points.
        #[arg(
            long,
            allow_hyphen_values = true,
            value_delimiter = ',',
            required = true
        )]
        x: Vec<f64>,
        #[arg(long, value_enum, default_value_t = LocalFunctionArg::Sigma1)]
        function: LocalFunctionArg,
        #[arg(long, default_value_t = 1e-3)]
        target_error: f64,
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: usize,
        /// Use fixed-point arithmetic with this many fractional bits.
        #[arg(long)]
        extended_bits: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_SIEVE)]
        sieve_limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks the divisor recurrence exactly over a range of α and k.
    Recurrence {
        #[arg(long, default_value_t = 2)]
        alpha_min: i64,
        #[arg(long)]
        alpha_max: i64,
        #[arg(long, default_value_t = 0)]
        k_min: u32,
        #[arg(long)]
        k_max: u32,
    },
    /// Riemann zeta function for real s > 1.
    Zeta {
        #[arg(long)]
        s: f64,
    },
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    /// `sigma:<k>`, `zero-ramanujan`, `zero-hardy`, or `sigma0-log`.
    #[arg(long)]
    pub rule: String,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    /// `log:<start>:<stop>:<count>` or a comma-separated increasing list.
    #[arg(long)]
    pub qgrid: String,
}

#[derive(Debug, Args)]
pub struct TableOutput {
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScalarFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AbscissaArg {
    LogQ,
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LocalFunctionArg {
    Sigma1,
    Sigma0,
}

/// Parses `log:<start>:<stop>:<count>` or `q1,q2,...`.
pub fn parse_grid(spec: &str) -> Result<Vec<u64>> {
    if let Some(rest) = spec.strip_prefix("log:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(anyhow!("grid {spec:?} is not log:<start>:<stop>:<count>"));
        };
        let start = start
            .parse()
            .with_context(|| format!("bad grid start in {spec:?}"))?;
        let stop = stop
            .parse()
            .with_context(|| format!("bad grid stop in {spec:?}"))?;
        let count = count
            .parse()
            .with_context(|| format!("bad grid count in {spec:?}"))?;
        return Ok(geometric_grid(start, stop, count)?);
    }
    let grid: Vec<u64> = spec
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .with_context(|| format!("bad grid entry {s:?}"))
        })
        .collect::<Result<_>>()?;
    if grid.is_empty() || grid[0] == 0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(anyhow!(
            "grid {spec:?} must be strictly increasing positive integers"
        ));
    }
    Ok(grid)
}

pub fn parse_stride(spec: &str) -> Result<Stride> {
    if spec == "all" {
        return Ok(Stride::All);
    }
    if let Some(n) = spec.strip_prefix("every:") {
        let n = n.parse().with_context(|| format!("bad stride {spec:?}"))?;
        if n == 0 {
            return Err(anyhow!("stride every:0 is empty"));
        }
        return Ok(Stride::Every(n));
    }
    if let Some(n) = spec.strip_prefix("geometric:") {
        return Ok(Stride::Geometric(
            n.parse().with_context(|| format!("bad stride {spec:?}"))?,
        ));
    }
    Err(anyhow!(
        "stride {spec:?} is not all, every:<n>, or geometric:<count>"
    ))
}

pub fn parse_rule(spec: &str) -> Result<CoefficientRule> {
    spec.parse().map_err(|e| anyhow!("{e}"))
}

fn sieve(limit: u64) -> Result<SieveTable> {
    if limit > SIEVE_MAX {
        return Err(anyhow!("sieve limit {limit} exceeds {SIEVE_MAX}"));
    }
    Ok(SieveTable::new(limit.max(1))?)
}

fn emit(
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
    write: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            let mut w = BufWriter::new(file);
            write(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => write(stdout),
    }
}

fn emit_json<T: serde::Serialize>(
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
    doc: &T,
) -> Result<()> {
    let text = format::to_json(doc)?;
    emit(out, stdout, |w| Ok(w.write_all(text.as_bytes())?))
}

/// A trace computed with per-q values evaluated in parallel.
pub fn parallel_trace(
    rule: CoefficientRule,
    x: &RealArgument,
    grid: &[u64],
    table: &SieveTable,
    sweep: &Sweep,
) -> Result<PartialSumTrace> {
    let last = *grid.last().ok_or_else(|| anyhow!("empty grid"))?;
    let values = sweep.stream(last, |q| csum_real(q, x, Some(table)));
    Ok(PartialSumTrace::accumulate(rule, x, grid, values, table)?)
}

pub fn parallel_thm1(
    x: &RealArgument,
    q_min: u64,
    q_max: u64,
    stride: &Stride,
    table: &SieveTable,
    sweep: &Sweep,
) -> Result<Theorem1Report> {
    let qs = stride.samples(q_min, q_max);
    let values = sweep.map(&qs, |q| csum_real(q, x, Some(table)).map(|c| (q, c)));
    let values: Vec<(u64, ComplexValue)> = values.into_iter().collect::<Result<_, _>>()?;
    Ok(Theorem1Report::from_values(x, q_min, q_max, values, table)?)
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    let sweep = Sweep::new(cli.threads)?;
    match cli.command {
        Command::Factor { n, format } => {
            let f = factorize(n, None)?;
            match format {
                ScalarFormat::Text => {
                    let parts: Vec<String> = f
                        .factors()
                        .iter()
                        .map(|&(p, e)| {
                            if e == 1 {
                                p.to_string()
                            } else {
                                format!("{p}^{e}")
                            }
                        })
                        .collect();
                    let body = if parts.is_empty() {
                        "1".into()
                    } else {
                        parts.join(" * ")
                    };
                    writeln!(stdout, "{n} = {body}")?;
                }
                ScalarFormat::Json => {
                    let doc = FactorDoc {
                        n,
                        factors: f.factors().to_vec(),
                        mobius: f.mobius(),
                        totient: f.totient(),
                        divisor_count: f.divisor_count(),
                        sigma1: f.sigma(1).to_string(),
                    };
                    emit_json(&None, stdout, &doc)?;
                }
            }
        }
        Command::Csum { q, n } => writeln!(stdout, "{}", csum_int(q, n, None)?)?,
        Command::CsumReal { q, x } => {
            let c = csum_real(q, &RealArgument::new(x)?, None)?;
            writeln!(stdout, "{} {}", format::float(c.re), format::float(c.im))?;
        }
        Command::Expand { series, output } => {
            let rule = parse_rule(&series.rule)?;
            let x = RealArgument::new(series.x)?;
            let grid = parse_grid(&series.qgrid)?;
            let table = sieve(*grid.last().unwrap())?;
            let trace = parallel_trace(rule, &x, &grid, &table, &sweep)?;
            match output.format {
                TableFormat::Csv => emit(&output.out, stdout, |w| {
                    format::write_trace_csv(w, &trace.checkpoints)
                })?,
                TableFormat::Json => emit_json(&output.out, stdout, &TraceDoc::new(&trace))?,
            }
        }
        Command::SigmaTilde {
            k,
            x,
            target_error,
            sieve_limit,
            out,
        } => {
            let table = sieve(sieve_limit)?;
            let s = sigma_tilde(k, &RealArgument::new(x)?, target_error, &table)?;
            emit_json(&out, stdout, &SigmaTildeDoc::new(&s))?;
        }
        Command::Thm1 {
            x,
            qmin,
            qmax,
            stride,
            output,
        } => {
            let x = RealArgument::new(x)?;
            let stride = parse_stride(&stride)?;
            let table = sieve(qmax)?;
            let report = parallel_thm1(&x, qmin, qmax, &stride, &table, &sweep)?;
            match output.format {
                TableFormat::Csv => emit(&output.out, stdout, |w| {
                    format::write_residuals_csv(w, &report.residuals)
                })?,
                TableFormat::Json => emit_json(&output.out, stdout, &Theorem1Doc::new(&report))?,
            }
        }
        Command::Slope {
            series,
            abscissa,
            out,
        } => {
            let rule = parse_rule(&series.rule)?;
            let x = RealArgument::new(series.x)?;
            let grid = parse_grid(&series.qgrid)?;
            let abscissa = match abscissa {
                Some(AbscissaArg::LogQ) => Abscissa::LogQ,
                Some(AbscissaArg::Q) => Abscissa::Q,
                None => divergence_abscissa(rule, &x, &grid)?,
            };
            let table = sieve(*grid.last().unwrap())?;
            let trace = parallel_trace(rule, &x, &grid, &table, &sweep)?;
            let fit = fit_line(abscissa, &trace)?;
            let expected = expected_divergence_slope(rule, &x)
                .filter(|(a, _)| *a == abscissa)
                .map(|(_, s)| s);
            emit_json(
                &out,
                stdout,
                &SlopeDoc::new(&rule.name(), x.value(), &fit, expected),
            )?;
        }
        Command::Local {
            alpha,
            x,
            function,
            target_error,
            n_max,
            extended_bits,
            sieve_limit,
            out,
        } => {
            let table = sieve(sieve_limit)?;
            let options = LocalOptions {
                n_max,
                precision: match extended_bits {
                    Some(bits) => Precision::Extended { bits },
                    None => Precision::Double,
                },
            };
            match function {
                LocalFunctionArg::Sigma1 => {
                    let report = locality_report_with(alpha, &x, target_error, &table, &options)?;
                    emit_json(&out, stdout, &LocalityDoc::new(&report))?;
                }
                LocalFunctionArg::Sigma0 => {
                    let values = x
                        .iter()
                        .map(|&p| {
                            Ok((
                                p,
                                sigma0_local_with(
                                    &RealArgument::new(p)?,
                                    alpha,
                                    target_error,
                                    &table,
                                    &options,
                                )?,
                            ))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    emit_json(
                        &out,
                        stdout,
                        &LocalValuesDoc::new(alpha, "sigma0", target_error, &values),
                    )?;
                }
            }
        }
        Command::Recurrence {
            alpha_min,
            alpha_max,
            k_min,
            k_max,
        } => {
            if alpha_min > alpha_max || k_min > k_max {
                return Err(anyhow!("empty recurrence range"));
            }
            let cases: Vec<u64> =
                (0..((alpha_max - alpha_min + 1) as u64) * u64::from(k_max - k_min + 1)).collect();
            let per_alpha = u64::from(k_max - k_min + 1);
            let results = sweep.map(&cases, |i| {
                let alpha = alpha_min + (i / per_alpha) as i64;
                let k = k_min + (i % per_alpha) as u32;
                recurrence_residual(alpha, k).map(|r| (alpha, k, r == 0.into()))
            });
            let mut ok = 0;
            let mut first_failure = None;
            for r in results {
                let (alpha, k, zero) = r?;
                if zero {
                    ok += 1;
                } else if first_failure.is_none() {
                    first_failure = Some((alpha, k));
                }
            }
            let total = cases.len();
            match first_failure {
                None => writeln!(stdout, "OK {ok}/{total}")?,
                Some((alpha, k)) => {
                    return Err(anyhow!(
                        "FAIL {ok}/{total}, first nonzero residual at alpha={alpha} k={k}"
                    ))
                }
            }
        }
        Command::Zeta { s } => writeln!(stdout, "{}", format::float(zeta(s)?))?,
    }
    Ok(())
}
