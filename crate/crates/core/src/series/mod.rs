//! Ramanujan expansions `∑_q f̂(q) c̃_q(x)`.
//!
//! Convergent expansions are summed to a certified truncation
//! ([`sigma_tilde`]); divergent ones are never summed to a "value" and are
//! instead described by partial-sum traces and slope fits.

mod dirichlet;
mod fit;
mod rule;
pub(crate) mod sigma_tilde;
pub(crate) mod tail;
mod trace;
mod zeta;

pub use dirichlet::{divisor_count_series, mobius_series, totient_series};
pub use fit::{
    divergence_abscissa, divergence_slope, expected_divergence_slope, fit_line, Abscissa, SlopeFit,
};
pub use rule::{coefficient, CoefficientRule};
pub use sigma_tilde::{sigma_tilde, SigmaTilde};
pub use tail::{series_tail, tail_bound, TailBound};
pub use trace::{geometric_grid, partial_sum_trace, Checkpoint, PartialSumTrace};
pub use zeta::{zeta, ZETA_RELATIVE_ERROR};
