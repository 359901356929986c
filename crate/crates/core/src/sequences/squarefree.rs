use num_bigint::BigInt;

const BLOCK: u64 = 1 << 15;

/// Squarefree positive integers in increasing order (1 included), sieved in
/// blocks by striking out multiples of `k^2`.
#[derive(Clone, Debug)]
pub struct Squarefree {
    block_lo: u64,
    found: Vec<u64>,
    pos: usize,
}

impl Squarefree {
    pub fn new() -> Self {
        Self {
            block_lo: 1,
            found: Vec::new(),
            pos: 0,
        }
    }

    fn fill(&mut self) {
        let lo = self.block_lo;
        let hi = lo + BLOCK;
        let mut struck = vec![false; BLOCK as usize];
        let mut k = 2u64;
        while k * k < hi {
            let sq = k * k;
            let mut m = lo.div_ceil(sq) * sq;
            while m < hi {
                struck[(m - lo) as usize] = true;
                m += sq;
            }
            k += 1;
        }
        self.found.clear();
        self.pos = 0;
        self.found
            .extend((0..BLOCK).filter(|&i| !struck[i as usize]).map(|i| lo + i));
        self.block_lo = hi;
    }
}

impl Default for Squarefree {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for Squarefree {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.pos >= self.found.len() {
            self.fill();
        }
        self.pos += 1;
        Some(self.found[self.pos - 1])
    }
}

/// Running sums `S_n` of the first `n` squarefree numbers.
#[derive(Clone, Debug)]
pub struct SquarefreeSums {
    inner: Squarefree,
    sum: u128,
}

impl SquarefreeSums {
    /// Yields `S_start, S_{start+1}, ...` (`start >= 1`).
    pub fn new(start: u64) -> Self {
        let mut it = Self {
            inner: Squarefree::new(),
            sum: 0,
        };
        for _ in 1..start.max(1) {
            it.sum += it.inner.next().unwrap() as u128;
        }
        it
    }
}

impl Iterator for SquarefreeSums {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        self.sum += self.inner.next().unwrap() as u128;
        Some(BigInt::from(self.sum))
    }
}

/// `S_n`, the sum of the first `n` squarefree numbers.
pub fn squarefree_sum(n: u64) -> BigInt {
    SquarefreeSums::new(n).next().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_squarefree(n: u64) -> bool {
        (2..)
            .take_while(|k| k * k <= n)
            .all(|k| !n.is_multiple_of(k * k))
    }

    #[test]
    fn examples() {
        assert_eq!(squarefree_sum(1), BigInt::from(1));
        assert_eq!(squarefree_sum(3), BigInt::from(6));
        assert_eq!(squarefree_sum(5), BigInt::from(17));
    }

    #[test]
    fn sieve_matches_trial_division_across_blocks() {
        let sieved: Vec<u64> = Squarefree::new().take_while(|&v| v < 3 * BLOCK).collect();
        let direct: Vec<u64> = (1..3 * BLOCK).filter(|&v| is_squarefree(v)).collect();
        assert_eq!(sieved, direct);
    }
}
