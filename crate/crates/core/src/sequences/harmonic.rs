use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{pow, Zero};

use crate::numerics::ExactRational;

/// `H_n^(m) = sum_{k=1}^n 1/k^m`, reduced.
pub fn harmonic_term(m: u32, n: u64) -> ExactRational {
    let mut it = HarmonicNumbers::new(m, n);
    it.next().unwrap()
}

/// Consecutive harmonic numbers of a fixed order. Every partial sum is
/// kept in lowest terms.
#[derive(Clone, Debug)]
pub struct HarmonicNumbers {
    m: u32,
    n: u64,
    sum: BigRational,
}

impl HarmonicNumbers {
    /// Yields `H_start^(m), H_{start+1}^(m), ...`.
    pub fn new(m: u32, start: u64) -> Self {
        let mut it = Self {
            m,
            n: 0,
            sum: BigRational::zero(),
        };
        while it.n < start {
            it.advance();
        }
        it
    }

    fn advance(&mut self) {
        self.n += 1;
        let den = pow(BigInt::from(self.n), self.m as usize);
        self.sum += BigRational::new(1.into(), den);
    }
}

impl Iterator for HarmonicNumbers {
    type Item = BigRational;

    fn next(&mut self) -> Option<BigRational> {
        let out = self.sum.clone();
        self.advance();
        Some(out)
    }
}
