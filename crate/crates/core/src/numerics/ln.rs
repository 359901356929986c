//! Certified natural logarithm and Euler's number.
//!
//! Logarithms are evaluated in fixed point at a working precision `w`: every
//! quantity is an integer `X` standing for `X * 2^-w`, and each routine returns
//! a center together with an error radius in the same units. The radius is a
//! rigorous bound, so `[center - radius, center + radius] * 2^-w` always
//! contains the true value.
//!
//! Arguments are reduced as `x = m * 2^k` with `m` in `[3/4, 3/2)` and
//! `ln m = 2 atanh(z)`, `z = (m - 1)/(m + 1)`, so `|z| <= 1/5`. The series
//! for `atanh` is summed until the next power of `z` is provably small, and
//! the remainder `|z|^(2K+1) / ((2K+1)(1 - z^2))` is folded into the radius.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dyadic::{pow2, DyadicEndpoint, Rounding};
use super::interval::DyadicInterval;
use super::Precision;
use crate::error::{Error, Result};

/// A fixed-point enclosure `center ± radius` in units of `2^-w`.
#[derive(Clone, Debug)]
struct Fixed {
    center: BigInt,
    radius: BigInt,
}

/// `atanh(num/den)` in fixed point. Requires `|num/den| <= 1/3`.
///
/// Error accounting, with `u = 2^-w`: the scaled argument `Z` and its square
/// `Y` are within `u` and `2u` of `z` and `z^2`; each power `P_j` of `z` is
/// then within `(3j+1)u`, each summand within `3u`, so the partial sum of `K`
/// terms is within `3Ku`. The loop stops once `|P_K| <= 2K+1`, which bounds
/// the remainder by `5u` (using `1 - z^2 >= 1/2`).
fn atanh_fixed(num: &BigInt, den: &BigInt, w: u64) -> Fixed {
    debug_assert!(den.is_positive());
    debug_assert!(num.abs() * 3u32 <= *den);
    let z = (num << w).div_floor(den);
    let y = (&z * &z) >> w;
    let mut power = z;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let odd = 2 * k + 1;
        if *power.magnitude() <= num_bigint::BigUint::from(odd) {
            break;
        }
        sum += &power / odd;
        power = (&power * &y) >> w;
        k += 1;
    }
    Fixed {
        center: sum,
        radius: BigInt::from(3 * k + 5),
    }
}

fn ln2_cache() -> &'static RwLock<HashMap<u64, Arc<Fixed>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Fixed>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `ln 2 = 2 atanh(1/3)` at working precision `w`, cached per precision.
fn ln2_fixed(w: u64) -> Arc<Fixed> {
    if let Some(hit) = ln2_cache().read().unwrap().get(&w) {
        return Arc::clone(hit);
    }
    let a = atanh_fixed(&BigInt::one(), &BigInt::from(3u32), w);
    let value = Arc::new(Fixed {
        center: a.center * 2u32,
        radius: a.radius * 2u32,
    });
    ln2_cache()
        .write()
        .unwrap()
        .entry(w)
        .or_insert_with(|| Arc::clone(&value));
    value
}

/// Splits a positive dyadic `x` into `(k, mant, s)` with
/// `x = (mant / 2^s) * 2^k` and `mant / 2^s` in `[3/4, 3/2)`.
fn reduce(x: &DyadicEndpoint) -> (i64, BigInt, u64) {
    let mant = x.mantissa().clone();
    let bits = mant.bits();
    let mut s = bits - 1;
    // mant / 2^(bits-1) >= 3/2  <=>  2 * mant >= 3 * 2^(bits-1)
    if (&mant << 1u32) >= (BigInt::from(3u32) << (bits - 1)) {
        s = bits;
    }
    let k = x.exponent() + s as i64;
    (k, mant, s)
}

/// `ln x` for a positive dyadic, in fixed point at working precision `w`.
fn ln_fixed(x: &DyadicEndpoint, w: u64) -> Fixed {
    if x.is_one() {
        return Fixed {
            center: BigInt::zero(),
            radius: BigInt::zero(),
        };
    }
    let (k, mant, s) = reduce(x);
    let base = pow2(s);
    let atanh = atanh_fixed(&(&mant - &base), &(&mant + &base), w);
    let mut center = atanh.center * 2u32;
    let mut radius = atanh.radius * 2u32;
    if k != 0 {
        let ln2 = ln2_fixed(w);
        center += &ln2.center * k;
        radius += &ln2.radius * k.unsigned_abs();
    }
    Fixed { center, radius }
}

fn bit_length(n: u64) -> u64 {
    64 - n.leading_zeros() as u64
}

/// Working precision for a logarithm whose result is wanted on the absolute
/// grid `2^-(p+2)` and whose binary exponent is about `k`.
fn working_bits(p: Precision, k: i64) -> u64 {
    let p = p.bits() as u64;
    let kbits = bit_length(k.unsigned_abs() + 1);
    p + 8 + kbits + bit_length(4 * (p + kbits + 64))
}

/// Outward-rounded `ln` of one endpoint on the grid `2^-(p+2)`, padded by one
/// grid step so that higher-precision results nest inside.
fn ln_endpoint(x: &DyadicEndpoint, p: Precision, dir: Rounding) -> DyadicEndpoint {
    if x.is_one() {
        return DyadicEndpoint::zero();
    }
    let k = x.log2_floor().unwrap_or(0);
    let w = working_bits(p, k);
    // Rounding the argument in the same direction keeps the bound valid.
    let arg = x.round(w as u32, dir);
    let f = ln_fixed(&arg, w);
    let grid = -(p.bits() as i64 + 2);
    let raw = match dir {
        Rounding::Floor => f.center - f.radius,
        Rounding::Ceil => f.center + f.radius,
    };
    let v = DyadicEndpoint::new(raw, -(w as i64)).round_to_grid(grid, dir);
    let pad = DyadicEndpoint::new(BigInt::one(), grid);
    match dir {
        Rounding::Floor => v.sub(&pad),
        Rounding::Ceil => v.add(&pad),
    }
}

/// Certified enclosure of `ln y` for every `y` in `x`.
///
/// Endpoints are rounded outward on the absolute grid `2^-(p+2)`, so the
/// result is at most `2^(2-p)` wider than the exact image.
pub fn interval_ln(x: &DyadicInterval, p: Precision) -> Result<DyadicInterval> {
    if !x.lo().is_positive() {
        return Err(Error::NonPositiveArgument);
    }
    let lo = ln_endpoint(x.lo(), p, Rounding::Floor);
    let hi = ln_endpoint(x.hi(), p, Rounding::Ceil);
    Ok(DyadicInterval::new(lo, hi))
}

/// Certified enclosure of `e`, from `sum_{k<=K} 1/k!` with the tail bound
/// `2/(K+1)!`, `K` the smallest index making the tail fall below `2^-(p+2)`.
/// Endpoints carry `p + 2` mantissa bits, which keeps the width under
/// `2^(2-p)`.
pub fn interval_e(p: Precision) -> DyadicInterval {
    let target = pow2(p.bits() as u64 + 3);
    // Find K with (K+1)! > 2^(p+3), i.e. 2/(K+1)! < 2^-(p+2).
    let mut k: u64 = 0;
    let mut fact_k = BigInt::one(); // K!
    loop {
        let next = &fact_k * (k + 1);
        if next > target {
            break;
        }
        fact_k = next;
        k += 1;
    }
    // sum_{j<=K} K!/j! via S_j = j S_{j-1} + 1.
    let mut t = BigInt::one();
    for j in 1..=k {
        t = t * j + 1u32;
    }
    let fact_k1 = &fact_k * (k + 1);
    let upper_num = &t * (k + 1) + 2u32;
    let bits = p.bits() + 2;
    DyadicInterval::new(
        DyadicEndpoint::from_ratio(&t, &fact_k, bits, Rounding::Floor),
        DyadicEndpoint::from_ratio(&upper_num, &fact_k1, bits, Rounding::Ceil),
    )
}
