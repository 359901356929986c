use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::{
    interval_ln, round_outward, DyadicEndpoint, DyadicInterval, ExactInt, Precision,
};

pub(crate) fn validate(a: i64, b: i64) -> Result<()> {
    if a <= 0 || b == 0 || discriminant(a, b) <= 0 {
        return Err(Error::InvalidParameters(format!(
            "Lucas parameters need A > 0, B != 0 and A^2 - 4B > 0 (got A = {a}, B = {b})"
        )));
    }
    Ok(())
}

pub(crate) fn discriminant(a: i64, b: i64) -> i128 {
    (a as i128) * (a as i128) - 4 * (b as i128)
}

/// `(u_n, u_{n+1})` by fast doubling:
/// `u_{2k} = u_k (2 u_{k+1} - A u_k)` and `u_{2k+1} = u_{k+1}^2 - B u_k^2`.
pub(crate) fn lucas_pair(a: i64, b: i64, n: u64) -> (BigInt, BigInt) {
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    let mut u = BigInt::zero();
    let mut v = BigInt::one();
    for i in (0..u64::BITS - n.leading_zeros()).rev() {
        let even = &u * (&v * 2u32 - &a * &u);
        let odd = &v * &v - &b * &u * &u;
        if (n >> i) & 1 == 1 {
            let next = &a * &odd - &b * &even;
            u = odd;
            v = next;
        } else {
            u = even;
            v = odd;
        }
    }
    (u, v)
}

/// The `n`-th term of the Lucas sequence `u_0 = 0, u_1 = 1,
/// u_{n+1} = A u_n - B u_{n-1}`.
pub fn lucas_term(a: i64, b: i64, n: u64) -> Result<ExactInt> {
    validate(a, b)?;
    Ok(lucas_pair(a, b, n).0)
}

/// Consecutive Lucas terms by plain iteration.
#[derive(Clone, Debug)]
pub struct LucasTerms {
    a: BigInt,
    b: BigInt,
    cur: BigInt,
    next: BigInt,
}

impl LucasTerms {
    /// Yields `u_start, u_{start+1}, ...`.
    pub fn new(a: i64, b: i64, start: u64) -> Result<Self> {
        validate(a, b)?;
        let (cur, next) = lucas_pair(a, b, start);
        Ok(Self {
            a: a.into(),
            b: b.into(),
            cur,
            next,
        })
    }
}

impl Iterator for LucasTerms {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let after = &self.a * &self.next - &self.b * &self.cur;
        let out = std::mem::replace(&mut self.cur, std::mem::replace(&mut self.next, after));
        Some(out)
    }
}

/// Certified constants attached to a Lucas sequence with real roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LucasConstants {
    /// `A^2 - 4B`.
    pub discriminant: ExactInt,
    /// `(A + sqrt(disc)) / 2`.
    pub alpha: DyadicInterval,
    /// `(A - sqrt(disc)) / 2`.
    pub beta: DyadicInterval,
    /// `beta / alpha`.
    pub gamma: DyadicInterval,
    /// `-ln(1 - |gamma|) / |gamma|`.
    pub q: DyadicInterval,
    /// `gamma` exactly, when the discriminant is a perfect square.
    pub gamma_exact: Option<BigRational>,
}

impl LucasConstants {
    pub fn gamma_abs(&self) -> DyadicInterval {
        self.gamma.abs()
    }
}

/// Encloses `sqrt(d)` with `bits` fractional bits, or returns it exactly.
fn sqrt_enclosure(d: &BigInt, bits: u64) -> (DyadicInterval, bool) {
    let s = d.sqrt();
    if &s * &s == *d {
        return (DyadicInterval::point(DyadicEndpoint::from_int(s)), true);
    }
    let scaled = (d << (2 * bits)).sqrt();
    let e = -(bits as i64);
    let lo = DyadicEndpoint::new(scaled.clone(), e);
    let hi = DyadicEndpoint::new(scaled + 1u32, e);
    (DyadicInterval::new(lo, hi), false)
}

/// `(A - t) / (A + t)` for an exact dyadic `t`.
fn gamma_at(a: &BigInt, t: &DyadicEndpoint) -> BigRational {
    let t = t.to_rational();
    let a = BigRational::from_integer(a.clone());
    (&a - &t) / (&a + &t)
}

pub fn lucas_constants(a: i64, b: i64, p: Precision) -> Result<LucasConstants> {
    validate(a, b)?;
    let disc = BigInt::from(discriminant(a, b));
    let big_a = BigInt::from(a);
    let mut extra = 8u64;
    loop {
        let bits = p.bits() as u64 + extra;
        let (root, exact) = sqrt_enclosure(&disc, bits);
        let half = |x: &DyadicEndpoint| x.mul_pow2(-1);
        let a_pt = DyadicEndpoint::from_int(big_a.clone());
        let alpha = DyadicInterval::new(half(&a_pt.add(root.lo())), half(&a_pt.add(root.hi())));
        let beta = DyadicInterval::new(half(&a_pt.sub(root.hi())), half(&a_pt.sub(root.lo())));
        // gamma(t) = (A - t)/(A + t) is decreasing in t.
        let g_hi = gamma_at(&big_a, root.lo());
        let g_lo = gamma_at(&big_a, root.hi());
        let gamma_exact = exact.then(|| g_lo.clone());
        let gamma = if exact {
            round_outward(&g_lo, p)
        } else {
            let lo = round_outward(&g_lo, p);
            let hi = round_outward(&g_hi, p);
            DyadicInterval::new(lo.lo().clone(), hi.hi().clone())
        };
        if gamma.sign().is_none() {
            // gamma != 0 because B != 0; tighten until its sign shows.
            extra *= 2;
            continue;
        }
        let g = gamma.abs();
        let one = DyadicInterval::from_int(1);
        let log = interval_ln(&one.sub(&g, p), p)?;
        let q = log.neg().div(&g, p)?;
        return Ok(LucasConstants {
            discriminant: disc,
            alpha,
            beta,
            gamma,
            q,
            gamma_exact,
        });
    }
}
