//! Segmented sieve of Eratosthenes.

use crate::numerics::ExactInt;

const SEGMENT: u64 = 1 << 16;

/// Primes up to and including `limit`, by a plain sieve.
fn small_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// All primes in increasing order, sieved one segment at a time.
#[derive(Clone, Debug)]
pub struct Primes {
    base: Vec<u64>,
    base_limit: u64,
    seg_lo: u64,
    found: Vec<u64>,
    pos: usize,
}

impl Primes {
    pub fn new() -> Self {
        Self {
            base: Vec::new(),
            base_limit: 1,
            seg_lo: 0,
            found: Vec::new(),
            pos: 0,
        }
    }

    /// Sieves `[seg_lo, seg_lo + SEGMENT)` into `found`.
    fn fill(&mut self) {
        let lo = self.seg_lo;
        let hi = lo + SEGMENT;
        let root = (hi as f64).sqrt() as u64 + 1;
        if root > self.base_limit {
            self.base_limit = root.max(2 * self.base_limit);
            self.base = small_primes(self.base_limit);
        }
        let mut composite = vec![false; SEGMENT as usize];
        for &p in &self.base {
            if p * p >= hi {
                break;
            }
            let mut start = std::cmp::max(p * p, lo.div_ceil(p) * p);
            while start < hi {
                composite[(start - lo) as usize] = true;
                start += p;
            }
        }
        self.found.clear();
        self.pos = 0;
        for (i, &c) in composite.iter().enumerate() {
            let v = lo + i as u64;
            if !c && v >= 2 {
                self.found.push(v);
            }
        }
        self.seg_lo = hi;
    }
}

impl Default for Primes {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for Primes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.pos >= self.found.len() {
            self.fill();
        }
        self.pos += 1;
        Some(self.found[self.pos - 1])
    }
}

/// An upper bound for the `n`-th prime: `n (ln n + ln ln n)` for `n >= 6`
/// (Rosser), with a small table below. Only used to size the sieve, so the
/// floating-point evaluation carries a margin.
pub fn prime_upper_bound(n: u64) -> u64 {
    const TABLE: [u64; 6] = [0, 2, 3, 5, 7, 11];
    if n < 6 {
        return TABLE[n as usize];
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64 + 16
}

/// The `n`-th prime as a machine integer, `n >= 1`.
pub fn nth_prime_u64(n: u64) -> u64 {
    assert!(n >= 1, "primes are indexed from 1");
    let mut it = Primes::new();
    // Size the base primes once from the upper bound so the sieve never regrows.
    it.base_limit = (prime_upper_bound(n) as f64).sqrt() as u64 + 2;
    it.base = small_primes(it.base_limit);
    it.nth(n as usize - 1).unwrap()
}

/// The `n`-th prime, `n >= 1`.
pub fn nth_prime(n: u64) -> ExactInt {
    ExactInt::from(nth_prime_u64(n))
}
