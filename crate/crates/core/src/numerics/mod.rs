//! Exact integers and rationals, and outward-rounded dyadic interval
//! arithmetic with a certified logarithm and a certified enclosure of `e`.

mod dyadic;
mod interval;
mod ln;

use std::cmp::Ordering;

pub use dyadic::{DyadicEndpoint, Rounding};
pub use interval::{interval_arith, round_outward, ArithOp, DyadicInterval};
pub use ln::{interval_e, interval_ln};

use crate::error::{Error, Result};

/// Arbitrary-precision integer.
pub type ExactInt = num_bigint::BigInt;

/// Reduced fraction with positive denominator.
pub type ExactRational = num_rational::BigRational;

/// Target mantissa precision of interval endpoints, in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub const MIN_BITS: u32 = 16;

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::InvalidParameters(format!(
                "precision must be at least {} bits, got {bits}",
                Self::MIN_BITS
            )));
        }
        Ok(Self(bits))
    }

    /// Skips the lower bound; only for exercising the rounding primitives.
    #[cfg(test)]
    pub(crate) const fn new_unchecked(bits: u32) -> Self {
        Self(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn doubled(self) -> Self {
        Self(self.0.saturating_mul(2))
    }
}

/// Exact trichotomy of two rationals by cross-multiplication.
pub fn cmp_exact(a: &ExactRational, b: &ExactRational) -> Ordering {
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

/// Convenience: an exact rational from an integer pair.
pub fn ratio(num: i64, den: i64) -> ExactRational {
    ExactRational::new(num.into(), den.into())
}

/// Enclosure of `ln x` for an exact positive rational.
pub fn ln_rational(x: &ExactRational, p: Precision) -> Result<DyadicInterval> {
    // Two extra bits on the argument keep its rounding below the ln grid.
    let bits = Precision(p.bits() + 2);
    interval_ln(&round_outward(x, bits), p)
}
