use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::numerics::ExactInt;

/// `D_n`, the number of fixed-point-free permutations of `n` elements, from
/// `D_1 = 0` and `D_n = n D_{n-1} + (-1)^n`. `D_0 = 1` by convention.
pub fn derangement_term(n: u64) -> ExactInt {
    Derangements::new(n).next().unwrap()
}

/// Consecutive derangement numbers starting at a chosen index.
#[derive(Clone, Debug)]
pub struct Derangements {
    n: u64,
    value: BigInt,
}

impl Derangements {
    pub fn new(start: u64) -> Self {
        let mut it = Self {
            n: 0,
            value: BigInt::one(),
        };
        while it.n < start {
            it.advance();
        }
        it
    }

    fn advance(&mut self) {
        self.n += 1;
        self.value *= self.n;
        if self.n.is_multiple_of(2) {
            self.value += 1u32;
        } else {
            self.value -= 1u32;
        }
    }
}

impl Iterator for Derangements {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let out = self.value.clone();
        self.advance();
        Some(out)
    }
}

/// `D_n = sum_{k=0}^n (-1)^k n!/k!`, evaluated term by term.
pub fn derangement_inclusion_exclusion(n: u64) -> ExactInt {
    let mut total = BigInt::zero();
    // n!/k! for k = n, n-1, ..., 0
    let mut falling = BigInt::one();
    for k in (0..=n).rev() {
        if k % 2 == 0 {
            total += &falling;
        } else {
            total -= &falling;
        }
        falling *= k.max(1);
    }
    total
}
