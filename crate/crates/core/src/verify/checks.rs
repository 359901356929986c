use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{certify, Attempt, CheckResult};
use crate::error::{Error, Result};
use crate::numerics::{
    interval_e, interval_ln, ln_rational, round_outward, DyadicEndpoint, DyadicInterval, ExactInt,
    ExactRational, Precision,
};
use crate::ratio::{cmp_roots, delta_coefficients, ratio_step_verdict, LadderConfig, Ordering3};
use crate::sequences::{
    derangement_term, harmonic_term, lucas_constants, lucas_term, nth_prime, SequenceSpec,
};

fn int(n: impl Into<BigInt>) -> DyadicInterval {
    DyadicInterval::from_int(n)
}

fn ln_int(x: &ExactInt, p: Precision) -> Result<DyadicInterval> {
    ln_rational(&BigRational::from_integer(x.clone()), p)
}

fn factorial(n: u64) -> ExactInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn bit_len(x: &ExactInt) -> u32 {
    x.bits().min(u32::MAX as u64) as u32
}

/// `n(n+1)(n+2) Delta_n` from the logarithms of the three terms.
fn cleared_delta(terms: [&ExactRational; 3], n: u64, p: Precision) -> Result<DyadicInterval> {
    let mut acc = DyadicInterval::zero();
    for (c, t) in delta_coefficients(n).iter().zip(terms) {
        acc = acc.add_exact(&ln_rational(t, p)?.scale(c));
    }
    Ok(acc)
}

fn lucas_terms3(a: i64, b: i64, n: u64) -> Result<[ExactRational; 3]> {
    let t = |k| lucas_term(a, b, k).map(BigRational::from_integer);
    Ok([t(n)?, t(n + 1)?, t(n + 2)?])
}

/// Bound (2.1): `n(n+1)(n+2) Delta_n > ln D - |g|^n (2q|g| n(n+2) + (n+1)(n+2)
/// + |g|^2 n(n+1))` for a Lucas sequence with discriminant `D > 1`.
pub fn check_bound_2_1(a: i64, b: i64, n: u64, cfg: &LadderConfig) -> Result<CheckResult> {
    check_bound_2_1_with(a, b, n, cfg, false)
}

/// As [`check_bound_2_1`]; with `allow_delta_one` the bound is also evaluated
/// at `D = 1`, where `ln D = 0`, and labelled as outside the hypothesis.
pub fn check_bound_2_1_with(
    a: i64,
    b: i64,
    n: u64,
    cfg: &LadderConfig,
    allow_delta_one: bool,
) -> Result<CheckResult> {
    let disc = (a as i128) * (a as i128) - 4 * (b as i128);
    if disc < 1 || (disc == 1 && !allow_delta_one) || n == 0 {
        return Err(Error::InvalidParameters(format!(
            "bound (2.1) needs A^2 - 4B > 1 and n >= 1 (got A = {a}, B = {b}, n = {n})"
        )));
    }
    let terms = lucas_terms3(a, b, n)?;
    let fib_chain = a == 1 && b == -1 && n >= 6;
    let (n0, n1, n2) = (BigInt::from(n), BigInt::from(n + 1), BigInt::from(n + 2));
    let mut r = certify(
        "bound_2_1",
        cfg,
        0,
        Some(format!("A={a} B={b} n={n}")),
        |p| {
            let k = lucas_constants(a, b, p)?;
            let lhs = cleared_delta([&terms[0], &terms[1], &terms[2]], n, p)?;
            let g = k.gamma_abs();
            let g_n = g.pow(n, p);
            let qg2 = k.q.mul(&g, p).scale(&BigInt::from(2));
            let bracket = qg2
                .scale(&(&n0 * &n2))
                .add_exact(&int(&n1 * &n2))
                .add(&g.pow(2, p).scale(&(&n0 * &n1)), p);
            let ln_disc = ln_int(&BigInt::from(disc), p)?;
            let rhs = ln_disc.sub(&g_n.mul(&bracket, p), p);
            let mut att = Attempt::new()
                .detail("lhs", &lhs)
                .detail("rhs", &rhs)
                .detail("gamma", &k.gamma)
                .detail("q", &k.q)
                .condition("lhs_minus_rhs", lhs.sub(&rhs, p));
            if fib_chain {
                // ln 5 - (2q|g| + 1 + |g|^2)/3 bounds the right side from below
                // once |g|^n (n+1)(n+2) < 1/3, and itself exceeds ln 5 - 1 > 0.
                let inner = qg2.add_exact(&int(1)).add(&g.pow(2, p), p);
                let chain = ln_disc.sub(&inner.div(&int(3), p)?, p);
                let floor = ln_disc.sub_exact(&int(1));
                att = att
                    .detail("chain", &chain)
                    .condition("rhs_minus_chain", rhs.sub(&chain, p))
                    .condition("chain_minus_ln5_minus_1", chain.sub(&floor, p))
                    .condition("ln5_minus_1", floor);
            }
            Ok(att)
        },
    )?;
    r.in_hypothesis = disc > 1;
    Ok(r)
}

/// For `D = 1`: `Delta_n > w_n > 0` where
/// `w_n = 2/(n+1) (-g^{n+1} - g^{2n+2}) + g^n/n + g^{n+2}/(n+2)`.
pub fn check_wn_positivity(a: i64, b: i64, n: u64, cfg: &LadderConfig) -> Result<CheckResult> {
    let disc = (a as i128) * (a as i128) - 4 * (b as i128);
    if disc != 1 || a <= 0 {
        return Err(Error::NotDeltaOneCase);
    }
    if n == 0 {
        return Err(Error::PreconditionFailed("n must be at least 1".into()));
    }
    let g = BigRational::new(BigInt::from(a - 1), BigInt::from(a + 1));
    let gp = |k: u64| num_traits::pow(g.clone(), k as usize);
    if gp(n) >= BigRational::new(1.into(), 2.into()) {
        return Err(Error::PreconditionFailed(format!(
            "gamma^n = {} is not below 1/2 at n = {n}",
            gp(n)
        )));
    }
    let q = |num: i64, den: u64| BigRational::new(num.into(), den.into());
    let w = q(2, n + 1) * (-gp(n + 1) - gp(2 * n + 2)) + gp(n) * q(1, n) + gp(n + 2) * q(1, n + 2);
    let scale = BigRational::from_integer(BigInt::from(n) * (n + 1) * (n + 2));
    let w_cleared = &w * &scale;
    let terms = lucas_terms3(a, b, n)?;
    certify(
        "wn_positivity",
        cfg,
        0,
        Some(format!("A={a} B={b} n={n}")),
        |p| {
            let delta = cleared_delta([&terms[0], &terms[1], &terms[2]], n, p)?;
            let wi = round_outward(&w_cleared, p);
            Ok(Attempt::new()
                .detail("gamma", &g)
                .detail("cleared_delta", &delta)
                .detail("cleared_w", &wi)
                .condition("delta_minus_w", delta.sub(&wi, p))
                .condition("w", round_outward(&w, p)))
        },
    )
}

/// One derangement step: `Greater` means the root ratio decreases at `n`.
pub fn derangement_step(n: u64, cfg: &LadderConfig) -> Result<Ordering3> {
    Ok(ratio_step_verdict(&SequenceSpec::Derangement, n, cfg)?.ordering)
}

/// The finite window `3 <= n <= 26` below the asymptotic threshold.
pub fn check_derangement_window(cfg: &LadderConfig) -> Result<CheckResult> {
    window_check(
        "derangement_window",
        (3..=26).map(|n| (SequenceSpec::Derangement, n)),
        Ordering3::Greater,
        cfg,
    )
}

/// `Delta_n(m) < 0` for `1 <= m <= 10`, `3 <= n <= 29`.
pub fn check_harmonic_window(cfg: &LadderConfig) -> Result<CheckResult> {
    let cells =
        (1..=10u32).flat_map(|m| (3..=29u64).map(move |n| (SequenceSpec::Harmonic { m }, n)));
    window_check("harmonic_window", cells, Ordering3::Less, cfg)
}

fn window_check(
    name: &str,
    cells: impl Iterator<Item = (SequenceSpec, u64)>,
    expected: Ordering3,
    cfg: &LadderConfig,
) -> Result<CheckResult> {
    let mut parts = Vec::new();
    for (spec, n) in cells {
        let v = ratio_step_verdict(&spec, n, cfg)?;
        parts.push(CheckResult::from_verdict(
            name,
            expected,
            v,
            Some(format!("{spec} n={n}")),
        ));
    }
    Ok(super::summarize(name, &parts))
}

/// `|D_n - n!/e| <= 1/2` and `|ln D_n - ln n!| <= 1.5`.
pub fn check_r0(n: u64, cfg: &LadderConfig) -> Result<CheckResult> {
    if n < 2 {
        return Err(Error::PreconditionFailed("check_r0 needs n >= 2".into()));
    }
    let d = derangement_term(n);
    let f = factorial(n);
    // n!/e must be resolved to well below 1, so carry all of n!'s bits.
    let hint = bit_len(&f) + 32;
    certify("r0", cfg, hint, Some(format!("n={n}")), |p| {
        let e = interval_e(p);
        let diff = int(d.clone()).sub(&int(f.clone()).div(&e, p)?, p).abs();
        let r0 = ln_int(&d, p)?.sub_exact(&ln_int(&f, p)?);
        let half = DyadicInterval::point(DyadicEndpoint::new(1.into(), -1));
        let three_halves = DyadicInterval::point(DyadicEndpoint::new(3.into(), -1));
        Ok(Attempt::new()
            .detail("abs_dn_minus_nfact_over_e", &diff)
            .detail("r0", &r0)
            .condition("half_minus_abs_diff", half.sub_exact(&diff))
            .condition("1.5_minus_abs_r0", three_halves.sub_exact(&r0.abs())))
    })
}

fn r0_enclosure(k: u64, p: Precision) -> Result<DyadicInterval> {
    Ok(ln_int(&derangement_term(k), p)?.sub_exact(&ln_int(&factorial(k), p)?))
}

/// `|R_1(n)| <= 6e + 3`, with
/// `R_1(n) = n(n-1) R_0(n+1) - 2(n^2-1) R_0(n) + n(n+1) R_0(n-1)`,
/// i.e. the usual second-difference form with the fractions multiplied out.
pub fn check_r1(n: u64, cfg: &LadderConfig) -> Result<CheckResult> {
    if n < 3 {
        return Err(Error::PreconditionFailed("check_r1 needs n >= 3".into()));
    }
    let c_next = BigInt::from(n * (n - 1));
    let c_mid = -BigInt::from(2 * (n * n - 1));
    let c_prev = BigInt::from(n * (n + 1));
    certify("r1", cfg, 0, Some(format!("n={n}")), |p| {
        let r1 = r0_enclosure(n + 1, p)?
            .scale(&c_next)
            .add_exact(&r0_enclosure(n, p)?.scale(&c_mid))
            .add_exact(&r0_enclosure(n - 1, p)?.scale(&c_prev));
        let bound = interval_e(p).scale(&BigInt::from(6)).add_exact(&int(3));
        // Only the lower end of 6e + 3 is trusted.
        let floor = DyadicInterval::point(bound.lo().clone());
        Ok(Attempt::new()
            .detail("r1", &r1)
            .detail("6e_plus_3", &bound)
            .condition("bound_minus_abs_r1", floor.sub_exact(&r1.abs())))
    })
}

/// `|ln n! - n ln n + n| < ln n + 1`.
pub fn check_r2(n: u64, cfg: &LadderConfig) -> Result<CheckResult> {
    if n < 2 {
        return Err(Error::PreconditionFailed("check_r2 needs n >= 2".into()));
    }
    let f = factorial(n);
    certify("r2", cfg, 0, Some(format!("n={n}")), |p| {
        let ln_n = ln_int(&BigInt::from(n), p)?;
        let r2 = ln_int(&f, p)?
            .sub_exact(&ln_n.scale(&BigInt::from(n)))
            .add_exact(&int(n));
        let bound = ln_n.add_exact(&int(1));
        Ok(Attempt::new()
            .detail("r2", &r2)
            .detail("ln_n_plus_1", &bound)
            .condition("bound_minus_abs_r2", bound.sub_exact(&r2.abs())))
    })
}

/// `ln(1 + x) > x - x^2/2` for a positive rational `x`.
pub fn check_lemma_4_1(x: &ExactRational, cfg: &LadderConfig) -> Result<CheckResult> {
    if !x.is_positive() {
        return Err(Error::NonPositiveX);
    }
    let one_plus = BigRational::one() + x;
    let poly = x - x * x / BigRational::from_integer(2.into());
    certify("lemma_4_1", cfg, 0, Some(format!("x={x}")), |p| {
        let ln = ln_rational(&one_plus, p)?;
        Ok(Attempt::new()
            .detail("ln_1_plus_x", &ln)
            .condition("ln_minus_poly", ln.sub(&round_outward(&poly, p), p)))
    })
}

pub(crate) fn lemma_4_2_with(
    m: u32,
    n: u64,
    h: &ExactRational,
    cfg: &LadderConfig,
) -> Result<CheckResult> {
    let rhs = BigRational::from_integer(4.into())
        * num_traits::pow(BigRational::new(2.into(), (n + 2).into()), (m - 1) as usize);
    let mut r = certify("lemma_4_2", cfg, 0, Some(format!("m={m} n={n}")), |p| {
        let hi = round_outward(h, p);
        let lhs = hi.mul(&ln_rational(h, p)?, p);
        let rhs_i = round_outward(&rhs, p);
        Ok(Attempt::new()
            .detail("lhs", &lhs)
            .detail("rhs", &rhs_i)
            .condition("lhs_minus_rhs", lhs.sub(&rhs_i, p)))
    })?;
    r.in_hypothesis = m >= 11 || n >= 30;
    Ok(r)
}

/// `H_n^(m) ln H_n^(m) > 4 (2/(n+2))^(m-1)`. The lemma asserts it for
/// `m >= 11` or `n >= 30`; other instances are evaluated for information.
pub fn check_lemma_4_2(m: u32, n: u64, cfg: &LadderConfig) -> Result<CheckResult> {
    if m < 1 || n < 3 {
        return Err(Error::PreconditionFailed(
            "lemma 4.2 needs m >= 1 and n >= 3".into(),
        ));
    }
    lemma_4_2_with(m, n, &harmonic_term(m, n), cfg)
}

/// `ln p_{n+1}/(n+1) - ln p_n/n < ln(1 - ln ln n / (2n^2))`, multiplied
/// through by `n(n+1)`.
pub(crate) fn sun_with(n: u64, p_n: u64, p_next: u64, cfg: &LadderConfig) -> Result<CheckResult> {
    if n < 3 {
        return Err(Error::PreconditionFailed(
            "the inequality needs ln ln n > 0, i.e. n >= 3".into(),
        ));
    }
    let (pn, pm) = (BigInt::from(p_n), BigInt::from(p_next));
    let mut r = certify(
        "sun_prime_inequality",
        cfg,
        0,
        Some(format!("n={n}")),
        |p| {
            let lnln = interval_ln(&ln_int(&BigInt::from(n), p)?, p)?;
            let inner = int(1).sub(&lnln.div(&int(2 * n as u128 * n as u128), p)?, p);
            let rhs = interval_ln(&inner, p)?.scale(&BigInt::from(n as u128 * (n as u128 + 1)));
            let lhs = ln_int(&pm, p)?
                .scale(&BigInt::from(n))
                .sub_exact(&ln_int(&pn, p)?.scale(&BigInt::from(n + 1)));
            Ok(Attempt::new()
                .detail("cleared_lhs", &lhs)
                .detail("cleared_rhs", &rhs)
                .condition("rhs_minus_lhs", rhs.sub_exact(&lhs)))
        },
    )?;
    r.in_hypothesis = n > 4;
    Ok(r)
}

pub fn check_sun_prime_inequality(n: u64, cfg: &LadderConfig) -> Result<CheckResult> {
    let p_n = nth_prime_checked(n)?;
    let p_next = nth_prime_checked(n + 1)?;
    sun_with(n, p_n, p_next, cfg)
}

fn nth_prime_checked(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::IndexBelowDomainStart { index: 0, start: 1 });
    }
    Ok(u64::try_from(nth_prime(n)).expect("primes in range fit in u64"))
}

/// `p_{n+1}^{1/(n+1)} < p_n^{1/n}`.
pub fn check_firoozbakht(n: u64, cfg: &LadderConfig) -> Result<CheckResult> {
    let p_n = BigRational::from_integer(nth_prime_checked(n)?.into());
    let p_next = BigRational::from_integer(nth_prime_checked(n + 1)?.into());
    let v = cmp_roots(&p_n, n, &p_next, cfg)?;
    Ok(CheckResult::from_verdict(
        "firoozbakht",
        Ordering3::Less,
        v,
        Some(format!("n={n}")),
    ))
}

/// The explicit constants of the Fibonacci argument and of Section 4.
pub fn constants_suite(cfg: &LadderConfig) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    out.push(certify("ln5_minus_1", cfg, 0, None, |p| {
        let v = ln_int(&BigInt::from(5), p)?.sub_exact(&int(1));
        Ok(Attempt::new().condition("ln5_minus_1", v))
    })?);
    // gamma(1, -1) within -0.382 +/- 5e-4
    out.push(certify(
        "gamma_fibonacci",
        cfg,
        0,
        Some("A=1 B=-1".into()),
        |p| {
            let g = lucas_constants(1, -1, p)?.gamma;
            let lo = round_outward(&BigRational::new((-3825).into(), 10000.into()), p);
            let hi = round_outward(&BigRational::new((-3815).into(), 10000.into()), p);
            Ok(Attempt::new()
                .detail("gamma", &g)
                .condition("gamma_minus_lower", g.sub_exact(&lo))
                .condition("upper_minus_gamma", hi.sub_exact(&g)))
        },
    )?);
    out.push(certify(
        "gamma6_times_56",
        cfg,
        0,
        Some("A=1 B=-1".into()),
        |p| {
            let g6 = lucas_constants(1, -1, p)?
                .gamma_abs()
                .pow(6, p)
                .scale(&BigInt::from(56));
            let third = round_outward(&BigRational::new(1.into(), 3.into()), p);
            Ok(Attempt::new()
                .detail("gamma6_times_56", &g6)
                .condition("third_minus_value", third.sub_exact(&g6)))
        },
    )?);
    for n in [4u64, 5] {
        let spec = SequenceSpec::fibonacci();
        let v = ratio_step_verdict(&spec, n, cfg)?;
        out.push(CheckResult::from_verdict(
            format!("delta_{n}_fibonacci"),
            Ordering3::Greater,
            v,
            Some(format!("n={n}")),
        ));
    }
    let mut h30 = check_lemma_4_2(1, 30, cfg)?;
    h30.name = "h30_ln_h30".into();
    out.push(h30);
    Ok(out)
}
