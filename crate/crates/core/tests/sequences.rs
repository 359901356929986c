//! Sequence generators checked against independent computations.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use ratiocert::sequences::{
    derangement_inclusion_exclusion, derangement_term, harmonic_term, lucas_term, nth_prime_u64,
    squarefree_sum, term, Primes, SequenceSpec,
};

fn brute_force_derangements(n: usize) -> u64 {
    (0..n)
        .permutations(n)
        .filter(|p| p.iter().enumerate().all(|(i, &v)| i != v))
        .count() as u64
}

#[test]
fn derangements_match_brute_force() {
    for n in 1..=8 {
        assert_eq!(
            derangement_term(n as u64),
            BigInt::from(brute_force_derangements(n)),
            "n = {n}"
        );
    }
    assert_eq!(derangement_term(1), BigInt::zero());
    assert_eq!(derangement_term(4), BigInt::from(9));
    assert_eq!(derangement_term(6), BigInt::from(265));
}

#[test]
fn derangements_match_inclusion_exclusion_and_second_recurrence() {
    let mut prev2 = BigInt::one(); // D_0
    let mut prev1 = BigInt::zero(); // D_1
    for n in 2..=30u64 {
        let alt = (n - 1) * (&prev1 + &prev2);
        assert_eq!(derangement_term(n), alt);
        assert_eq!(derangement_inclusion_exclusion(n), alt);
        prev2 = std::mem::replace(&mut prev1, alt);
    }
}

type Mat = [[BigInt; 2]; 2];

fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// u_n is the bottom-left entry of [[A, -B], [1, 0]]^n.
fn lucas_by_matrix(a: i64, b: i64, n: u64) -> BigInt {
    let m: Mat = [[a.into(), (-b).into()], [1.into(), 0.into()]];
    let mut acc: Mat = [[1.into(), 0.into()], [0.into(), 1.into()]];
    for _ in 0..n {
        acc = mat_mul(&acc, &m);
    }
    acc[1][0].clone()
}

#[test]
fn lucas_matches_matrix_power() {
    for (a, b) in [(1, -1), (3, 2), (2, -1), (5, 6), (4, -7), (10, 3)] {
        for n in 0..=64 {
            assert_eq!(
                lucas_term(a, b, n).unwrap(),
                lucas_by_matrix(a, b, n),
                "A={a} B={b} n={n}"
            );
        }
    }
}

#[test]
fn lucas_examples() {
    assert_eq!(lucas_term(1, -1, 0).unwrap(), BigInt::zero());
    assert_eq!(lucas_term(1, -1, 10).unwrap(), BigInt::from(55));
    assert_eq!(lucas_term(3, 2, 5).unwrap(), BigInt::from(31));
}

fn is_prime_trial(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

#[test]
fn sieve_matches_trial_division() {
    let sieved: Vec<u64> = Primes::new().take_while(|&p| p <= 10_000).collect();
    let direct: Vec<u64> = (2..=10_000).filter(|&n| is_prime_trial(n)).collect();
    assert_eq!(sieved, direct);
    assert_eq!(nth_prime_u64(1), 2);
    assert_eq!(nth_prime_u64(25), 97);
    assert_eq!(nth_prime_u64(10_000), 104_729);
}

#[test]
fn squarefree_sums() {
    assert_eq!(squarefree_sum(1), BigInt::from(1));
    assert_eq!(squarefree_sum(3), BigInt::from(6));
    assert_eq!(squarefree_sum(5), BigInt::from(17));
    let mut sum = 0u64;
    let mut count = 0u64;
    for k in 1..2000u64 {
        if (2..).take_while(|d| d * d <= k).all(|d| k % (d * d) != 0) {
            sum += k;
            count += 1;
            assert_eq!(squarefree_sum(count), BigInt::from(sum));
        }
    }
}

#[test]
fn harmonic_examples_and_monotonicity() {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    assert_eq!(harmonic_term(5, 1), q(1, 1));
    assert_eq!(harmonic_term(1, 3), q(11, 6));
    assert_eq!(harmonic_term(2, 3), q(49, 36));
    for m in 1..=4 {
        for n in 1..100 {
            assert!(harmonic_term(m, n + 1) > harmonic_term(m, n));
        }
    }
}

#[test]
fn terms_are_positive_from_domain_start() {
    let specs = [
        SequenceSpec::fibonacci(),
        SequenceSpec::Lucas { a: 3, b: 2 },
        SequenceSpec::Lucas { a: 6, b: 8 },
        SequenceSpec::Derangement,
        SequenceSpec::Harmonic { m: 3 },
        SequenceSpec::Primes,
        SequenceSpec::SquarefreeSum,
        SequenceSpec::product(SequenceSpec::Derangement, SequenceSpec::fibonacci()),
    ];
    for spec in &specs {
        for n in spec.domain_start()..spec.domain_start() + 200 {
            assert!(
                term(spec, n).unwrap() > BigRational::zero(),
                "{spec} at {n}"
            );
        }
    }
}
