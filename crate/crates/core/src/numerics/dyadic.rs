use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Direction of a rounding step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    /// Toward negative infinity.
    Floor,
    /// Toward positive infinity.
    Ceil,
}

/// The exact value `mantissa * 2^exponent`.
///
/// Always normalized: the mantissa is odd, or zero with exponent zero. Two
/// endpoints are therefore equal as values iff they are equal structurally.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicEndpoint {
    mantissa: BigInt,
    exponent: i64,
}

pub(crate) fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

fn div_round(num: &BigInt, den: &BigInt, dir: Rounding) -> BigInt {
    match dir {
        Rounding::Floor => num.div_floor(den),
        Rounding::Ceil => -((-num).div_floor(den)),
    }
}

fn shr_round(m: &BigInt, s: u64, dir: Rounding) -> BigInt {
    match dir {
        // `>>` on BigInt rounds toward negative infinity.
        Rounding::Floor => m >> s,
        Rounding::Ceil => -((-m) >> s),
    }
}

impl DyadicEndpoint {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Self::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Self { mantissa, exponent }
        } else {
            Self {
                mantissa: mantissa >> tz,
                exponent: exponent + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Self {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_int(BigInt::one())
    }

    pub fn from_int(n: BigInt) -> Self {
        Self::new(n, 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.mantissa.sign()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_one(&self) -> bool {
        self.exponent == 0 && self.mantissa.is_one()
    }

    /// Number of significant bits in the mantissa.
    pub fn mantissa_bits(&self) -> u64 {
        self.mantissa.magnitude().bits()
    }

    /// `floor(log2 |x|)`, or `None` for zero.
    pub fn log2_floor(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exponent + self.mantissa_bits() as i64 - 1)
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            BigRational::new(self.mantissa.clone(), pow2(self.exponent.unsigned_abs()))
        }
    }

    /// Nearest `f64`, for display only.
    pub fn to_f64_lossy(&self) -> f64 {
        use num_traits::ToPrimitive;
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa_bits();
        let (m, e) = if bits > 60 {
            let s = bits - 60;
            (&self.mantissa >> s, self.exponent + s as i64)
        } else {
            (self.mantissa.clone(), self.exponent)
        };
        let m = m.to_f64().unwrap_or(f64::NAN);
        m * 2f64.powf(e as f64)
    }

    pub fn neg(&self) -> Self {
        Self {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Both mantissas shifted to the common (smaller) exponent.
    fn aligned(&self, other: &Self) -> (BigInt, BigInt, i64) {
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        (a, b, e)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.aligned(other);
        Self::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(
            &self.mantissa * &other.mantissa,
            self.exponent + other.exponent,
        )
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::new(&self.mantissa * k, self.exponent)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + k,
        }
    }

    /// Rounds to at most `bits` mantissa bits in the given direction.
    pub fn round(&self, bits: u32, dir: Rounding) -> Self {
        let have = self.mantissa_bits();
        if have <= bits as u64 {
            return self.clone();
        }
        let s = have - bits as u64;
        Self::new(shr_round(&self.mantissa, s, dir), self.exponent + s as i64)
    }

    /// Rounds to a multiple of `2^grid_exp`.
    pub fn round_to_grid(&self, grid_exp: i64, dir: Rounding) -> Self {
        if self.exponent >= grid_exp {
            return self.clone();
        }
        let s = (grid_exp - self.exponent) as u64;
        Self::new(shr_round(&self.mantissa, s, dir), grid_exp)
    }

    /// `num / den` rounded to `bits` mantissa bits. `den` must be positive.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32, dir: Rounding) -> Self {
        debug_assert!(den.is_positive());
        if num.is_zero() {
            return Self::zero();
        }
        let nb = num.magnitude().bits() as i64;
        let db = den.bits() as i64;
        // Scale so that the integer quotient carries more than `bits` bits.
        let s = bits as i64 - (nb - db) + 2;
        let q = if s >= 0 {
            div_round(&(num << s as u64), den, dir)
        } else {
            div_round(num, &(den << (-s) as u64), dir)
        };
        Self::new(q, -s).round(bits, dir)
    }

    pub fn from_rational(x: &BigRational, bits: u32, dir: Rounding) -> Self {
        Self::from_ratio(x.numer(), x.denom(), bits, dir)
    }

    /// Directed decimal rendering with `sig` significant digits, e.g.
    /// `6.9314718055994530941e-1`.
    pub fn to_decimal(&self, sig: u32, dir: Rounding) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let sig = sig.max(1);
        let negative = self.is_negative();
        // Rounding direction for the magnitude.
        let mag_dir = match (dir, negative) {
            (Rounding::Floor, false) | (Rounding::Ceil, true) => Rounding::Floor,
            _ => Rounding::Ceil,
        };
        let top = self.log2_floor().unwrap_or(0);
        let mut k = (top as f64 * std::f64::consts::LOG10_2).floor() as i64;
        let mag = self.abs();
        let ten = BigInt::from(10u32);
        let lower = num_traits::pow(ten.clone(), sig as usize - 1);
        let upper = &lower * &ten;
        let digits = loop {
            let t = sig as i64 - 1 - k;
            let mut num = mag.mantissa.clone();
            let mut den = BigInt::one();
            if mag.exponent >= 0 {
                num <<= mag.exponent as u64;
            } else {
                den <<= mag.exponent.unsigned_abs();
            }
            if t >= 0 {
                num *= num_traits::pow(ten.clone(), t as usize);
            } else {
                den *= num_traits::pow(ten.clone(), (-t) as usize);
            }
            let q = div_round(&num, &den, mag_dir);
            if q < lower {
                k -= 1;
            } else if num >= &upper * &den {
                k += 1;
            } else if q == upper {
                // Rounded up across a power of ten.
                k += 1;
                break lower.clone();
            } else {
                break q;
            }
        };
        let s = digits.to_string();
        let (head, tail) = s.split_at(1);
        let sign = if negative { "-" } else { "" };
        if tail.is_empty() {
            format!("{sign}{head}e{k}")
        } else {
            format!("{sign}{head}.{tail}e{k}")
        }
    }
}

impl PartialOrd for DyadicEndpoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicEndpoint {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.mantissa.sign(), other.mantissa.sign());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        // Same sign: compare magnitudes by their leading bit first.
        let (ta, tb) = (self.log2_floor().unwrap(), other.log2_floor().unwrap());
        let mag = if ta != tb {
            ta.cmp(&tb)
        } else {
            let (a, b, _) = self.abs().aligned(&other.abs());
            a.cmp(&b)
        };
        if sa == Sign::Minus {
            mag.reverse()
        } else {
            mag
        }
    }
}

impl fmt::Debug for DyadicEndpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl fmt::Display for DyadicEndpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl From<i64> for DyadicEndpoint {
    fn from(n: i64) -> Self {
        Self::from_int(BigInt::from(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> DyadicEndpoint {
        DyadicEndpoint::new(BigInt::from(m), e)
    }

    #[test]
    fn normalizes_trailing_zeros() {
        let x = d(12, 0);
        assert_eq!(x.mantissa(), &BigInt::from(3));
        assert_eq!(x.exponent(), 2);
        assert_eq!(d(0, 17), DyadicEndpoint::zero());
    }

    #[test]
    fn ordering_mixed_exponents() {
        assert!(d(3, -1) < d(2, 0));
        assert!(d(-3, -1) > d(-2, 0));
        assert!(d(-1, 40) < d(1, -40));
        assert_eq!(d(6, -1).cmp(&d(3, 0)), Ordering::Equal);
    }

    #[test]
    fn directed_rounding_of_negative_values() {
        // -7 = -111b; to 2 bits: floor -8, ceil -6.
        assert_eq!(d(-7, 0).round(2, Rounding::Floor), d(-8, 0));
        assert_eq!(d(-7, 0).round(2, Rounding::Ceil), d(-6, 0));
        assert_eq!(d(7, 0).round(2, Rounding::Floor), d(6, 0));
        assert_eq!(d(7, 0).round(2, Rounding::Ceil), d(8, 0));
    }

    #[test]
    fn ratio_rounding_brackets_one_third() {
        let one = BigInt::from(1);
        let three = BigInt::from(3);
        let lo = DyadicEndpoint::from_ratio(&one, &three, 8, Rounding::Floor);
        let hi = DyadicEndpoint::from_ratio(&one, &three, 8, Rounding::Ceil);
        let third = BigRational::new(one, three);
        assert!(lo.to_rational() < third && third < hi.to_rational());
        assert!(lo.mantissa_bits() <= 8 && hi.mantissa_bits() <= 8);
    }

    #[test]
    fn decimal_rendering_is_directed() {
        let third_lo =
            DyadicEndpoint::from_ratio(&BigInt::from(1), &BigInt::from(3), 64, Rounding::Floor);
        assert_eq!(third_lo.to_decimal(5, Rounding::Floor), "3.3333e-1");
        assert_eq!(third_lo.to_decimal(5, Rounding::Ceil), "3.3334e-1");
        assert_eq!(d(-5, 0).to_decimal(3, Rounding::Floor), "-5.00e0");
        assert_eq!(d(1, 0).to_decimal(1, Rounding::Ceil), "1e0");
        // 999.5 rounded up to three digits crosses into the next decade.
        assert_eq!(d(1999, -1).to_decimal(3, Rounding::Ceil), "1.00e3");
    }
}
