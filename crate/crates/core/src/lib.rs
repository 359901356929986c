//! Exact generators for classical combinatorial sequences and a certified
//! decision engine for the monotonicity of their root ratios
//! `r_n = a_{n+1}^{1/(n+1)} / a_n^{1/n}`.
//!
//! Every comparison is settled either by exact big-integer arithmetic or by
//! outward-rounded dyadic interval arithmetic. Floating point is never used
//! to reach a verdict.

pub mod error;
pub mod numerics;
pub mod ratio;
pub mod sequences;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::{DyadicEndpoint, DyadicInterval, ExactInt, ExactRational, Precision};

pub use ratio::{
    Direction, LadderConfig, LogCombination, MonotonicityReport, Ordering3, Verdict, VerdictMethod,
};
pub use sequences::{term, SequenceSpec};
