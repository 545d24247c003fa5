//! Verification suites, parameter sweeps and single-shot evaluations
//! behind the `recip` executable.

pub mod config;
pub mod eval;
pub mod report;
pub mod sweep;
pub mod verify;
