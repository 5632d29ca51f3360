use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{n} exceeds the factorizer limit 2^63")]
    TooLarge { n: u64 },

    #[error("{n} is outside the sieve range 1..={limit}")]
    OutsideSieve { n: u64, limit: u64 },

    #[error("sieve limit {0} exceeds 2^31")]
    SieveTooLarge(u64),

    #[error("x = {0} is an integer but the operation requires x ∉ Z")]
    IntegerArgument(f64),

    #[error("near-singular denominator at q = {q}, divisor d = {d}: x/d is within 1e-6 of a nonzero integer")]
    NearSingularDenominator { q: u64, d: u64 },

    #[error("non-finite value produced")]
    NonFinite,

    #[error("σ̃_{k}(x) at non-integer x: the series diverges for all x ∈ R∖Z")]
    DivergentRequest { k: u32 },

    #[error("target error needs truncation at Q = {required}, beyond the sieve limit {limit}")]
    TruncationExceedsSieve { required: u64, limit: u64 },

    #[error("rounding error estimate {rounding:e} exceeds the budget for target error {target:e}")]
    PrecisionLoss { rounding: f64, target: f64 },

    #[error("alpha has {divisors} divisors, more than the supported maximum {max}")]
    NTooLarge { divisors: usize, max: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(alloc::format!($($arg)*)) };
}

macro_rules! precondition {
    ($($arg:tt)*) => { $crate::error::Error::Precondition(alloc::format!($($arg)*)) };
}

pub(crate) use domain;
pub(crate) use precondition;
