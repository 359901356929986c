use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::{DyadicEndpoint, Rounding};
use super::Precision;
use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicInterval {
    lo: DyadicEndpoint,
    hi: DyadicEndpoint,
}

/// The four arithmetic operations supported by [`interval_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl DyadicInterval {
    /// Panics if `lo > hi`.
    pub fn new(lo: DyadicEndpoint, hi: DyadicEndpoint) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo:?} > {hi:?}");
        Self { lo, hi }
    }

    pub fn point(x: DyadicEndpoint) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::point(DyadicEndpoint::from_int(n.into()))
    }

    pub fn zero() -> Self {
        Self::point(DyadicEndpoint::zero())
    }

    pub fn lo(&self) -> &DyadicEndpoint {
        &self.lo
    }

    pub fn hi(&self) -> &DyadicEndpoint {
        &self.hi
    }

    pub fn width(&self) -> DyadicEndpoint {
        self.hi.sub(&self.lo)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_rational(&self, x: &BigRational) -> bool {
        &self.lo.to_rational() <= x && x <= &self.hi.to_rational()
    }

    pub fn contains_endpoint(&self, x: &DyadicEndpoint) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Whether `other` lies entirely inside `self`.
    pub fn contains(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// `Greater` if entirely positive, `Less` if entirely negative, `Equal`
    /// for the point zero, `None` when the interval straddles zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Strictly below `other` everywhere.
    pub fn lt(&self, other: &Self) -> bool {
        self.hi < other.lo
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let top = std::cmp::max(self.lo.neg(), self.hi.clone());
            Self {
                lo: DyadicEndpoint::zero(),
                hi: top,
            }
        }
    }

    /// Outward rounding of both endpoints to `p` mantissa bits.
    pub fn round(&self, p: Precision) -> Self {
        Self {
            lo: self.lo.round(p.bits(), Rounding::Floor),
            hi: self.hi.round(p.bits(), Rounding::Ceil),
        }
    }

    pub fn add_exact(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.add(&other.lo),
            hi: self.hi.add(&other.hi),
        }
    }

    pub fn sub_exact(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.sub(&other.hi),
            hi: self.hi.sub(&other.lo),
        }
    }

    pub fn mul_exact(&self, other: &Self) -> Self {
        let c = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Self { lo, hi }
    }

    /// Exact multiplication by an integer.
    pub fn scale(&self, k: &BigInt) -> Self {
        let a = self.lo.mul_int(k);
        let b = self.hi.mul_int(k);
        if k.is_negative() {
            Self { lo: b, hi: a }
        } else {
            Self { lo: a, hi: b }
        }
    }

    pub fn add(&self, other: &Self, p: Precision) -> Self {
        self.add_exact(other).round(p)
    }

    pub fn sub(&self, other: &Self, p: Precision) -> Self {
        self.sub_exact(other).round(p)
    }

    pub fn mul(&self, other: &Self, p: Precision) -> Self {
        self.mul_exact(other).round(p)
    }

    pub fn div(&self, other: &Self, p: Precision) -> Result<Self> {
        if !(other.lo.is_positive() || other.hi.is_negative()) {
            return Err(Error::DivisionByIntervalContainingZero);
        }
        let mut lo: Option<DyadicEndpoint> = None;
        let mut hi: Option<DyadicEndpoint> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                let (num, den) = ratio_of(a, b);
                let f = DyadicEndpoint::from_ratio(&num, &den, p.bits(), Rounding::Floor);
                let c = DyadicEndpoint::from_ratio(&num, &den, p.bits(), Rounding::Ceil);
                lo = Some(match lo {
                    Some(l) if l <= f => l,
                    _ => f,
                });
                hi = Some(match hi {
                    Some(h) if h >= c => h,
                    _ => c,
                });
            }
        }
        Ok(Self {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        })
    }

    /// Multiplication by an exact rational, rounded outward.
    pub fn mul_rational(&self, r: &BigRational, p: Precision) -> Self {
        let scaled = self.scale(r.numer());
        if r.denom().is_one() {
            return scaled.round(p);
        }
        let den = DyadicInterval::from_int(r.denom().clone());
        scaled.div(&den, p).expect("denominator is positive")
    }

    /// `self^n` for a non-negative interval, with stepwise outward rounding.
    pub fn pow(&self, n: u64, p: Precision) -> Self {
        assert!(
            !self.lo.is_negative(),
            "pow requires a non-negative interval"
        );
        let mut result = DyadicInterval::from_int(1);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, p);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, p);
            }
        }
        result
    }

    pub fn hull(&self, other: &Self) -> Self {
        Self {
            lo: std::cmp::min(&self.lo, &other.lo).clone(),
            hi: std::cmp::max(&self.hi, &other.hi).clone(),
        }
    }

    /// Midpoint of the interval as an `f64`, for display only.
    pub fn mid_f64_lossy(&self) -> f64 {
        (self.lo.to_f64_lossy() + self.hi.to_f64_lossy()) / 2.0
    }
}

/// `a / b` as an integer ratio with positive denominator.
fn ratio_of(a: &DyadicEndpoint, b: &DyadicEndpoint) -> (BigInt, BigInt) {
    let shift = a.exponent() - b.exponent();
    let (mut num, mut den) = (a.mantissa().clone(), b.mantissa().clone());
    if shift >= 0 {
        num <<= shift as u64;
    } else {
        den <<= shift.unsigned_abs();
    }
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    (num, den)
}

impl fmt::Debug for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.lo.to_decimal(20, Rounding::Floor),
            self.hi.to_decimal(20, Rounding::Ceil)
        )
    }
}

/// Encloses an exact rational. Dyadic values that fit in `p` bits come back
/// as point intervals; otherwise the width is at most one unit in the last
/// place, i.e. `2^(1-p) * |x|`.
pub fn round_outward(x: &BigRational, p: Precision) -> DyadicInterval {
    if x.is_zero() {
        return DyadicInterval::zero();
    }
    DyadicInterval {
        lo: DyadicEndpoint::from_rational(x, p.bits(), Rounding::Floor),
        hi: DyadicEndpoint::from_rational(x, p.bits(), Rounding::Ceil),
    }
}

pub fn interval_arith(
    a: &DyadicInterval,
    b: &DyadicInterval,
    op: ArithOp,
    p: Precision,
) -> Result<DyadicInterval> {
    Ok(match op {
        ArithOp::Add => a.add(b, p),
        ArithOp::Sub => a.sub(b, p),
        ArithOp::Mul => a.mul(b, p),
        ArithOp::Div => a.div(b, p)?,
    })
}
