//! Command-line driver for `ramanujan-core`: CSV/JSON formats and
//! parallel per-`q` sweeps.

pub mod command;
pub mod format;
pub mod sweep;
