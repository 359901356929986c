//! Range and grid versions of the checks, sharded over threads, and the
//! full suite.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::checks::{
    check_bound_2_1, check_derangement_window, check_harmonic_window, check_lemma_4_1, check_r0,
    check_r1, check_r2, check_wn_positivity, constants_suite, lemma_4_2_with, sun_with,
};
use super::{CheckResult, CheckStatus};
use crate::error::Result;
use crate::numerics::ratio;
use crate::ratio::{decide_atoms, Atom, LadderConfig, Ordering3, Verdict, VerdictMethod};
use crate::sequences::{HarmonicNumbers, Primes};

/// Folds many instances into one result. The status is the worst seen
/// (in-hypothesis refutations first, then undecided); the witness names the
/// first instance with that status.
pub fn summarize(name: &str, parts: &[CheckResult]) -> CheckResult {
    let pick = |pred: &dyn Fn(&CheckResult) -> bool| parts.iter().find(|r| pred(r));
    let worst = pick(&|r| r.is_counterexample())
        .or_else(|| pick(&|r| r.status == CheckStatus::Undecided))
        .or_else(|| pick(&|r| r.status == CheckStatus::Refuted));
    let status = worst.map_or(CheckStatus::Certified, |r| r.status);
    let max_bits = parts
        .iter()
        .filter_map(|r| match r.verdict.method {
            VerdictMethod::Interval { bits } => Some(bits),
            VerdictMethod::Exact => None,
        })
        .max();
    let exact = parts
        .iter()
        .filter(|r| r.verdict.method == VerdictMethod::Exact)
        .count();
    let margin = parts
        .iter()
        .filter_map(|r| r.margin.as_ref())
        .min_by(|a, b| a.lo().cmp(b.lo()))
        .cloned();
    CheckResult {
        name: name.to_string(),
        status,
        in_hypothesis: worst.is_none_or(|r| r.in_hypothesis),
        witness: worst.and_then(|r| r.witness.clone()),
        margin,
        verdict: Verdict {
            ordering: match status {
                CheckStatus::Certified => Ordering3::Greater,
                CheckStatus::Refuted => Ordering3::Less,
                CheckStatus::Undecided => Ordering3::Undecided,
            },
            method: max_bits.map_or(VerdictMethod::Exact, |bits| VerdictMethod::Interval {
                bits,
            }),
            work: parts.iter().map(|r| r.verdict.work).sum(),
        },
        detail: vec![
            ("instances".into(), parts.len().to_string()),
            (
                "certified".into(),
                parts.iter().filter(|r| r.certified()).count().to_string(),
            ),
            ("exact".into(), exact.to_string()),
        ],
    }
}

/// Splits `from..=to` into at most `jobs` contiguous blocks, runs `work` on
/// each in its own thread, and concatenates the results in index order.
fn sharded<T: Send>(
    from: u64,
    to: u64,
    jobs: usize,
    work: impl Fn(u64, u64) -> Result<Vec<T>> + Sync,
) -> Result<Vec<T>> {
    if to < from {
        return Ok(Vec::new());
    }
    let count = to - from + 1;
    let jobs = (jobs.max(1) as u64).min(count);
    if jobs == 1 {
        return work(from, to);
    }
    let chunk = count.div_ceil(jobs);
    let parts: Vec<Result<Vec<T>>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| (from + j * chunk, (from + (j + 1) * chunk - 1).min(to)))
            .filter(|(lo, hi)| lo <= hi)
            .map(|(lo, hi)| {
                let work = &work;
                s.spawn(move || work(lo, hi))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

fn per_index(
    name: &str,
    from: u64,
    to: u64,
    jobs: usize,
    check: impl Fn(u64) -> Result<CheckResult> + Sync,
) -> Result<CheckResult> {
    let parts = sharded(from, to, jobs, |lo, hi| (lo..=hi).map(&check).collect())?;
    Ok(summarize(&format!("{name}[{from}..={to}]"), &parts))
}

pub fn check_r0_range(from: u64, to: u64, cfg: &LadderConfig, jobs: usize) -> Result<CheckResult> {
    per_index("r0", from, to, jobs, |n| check_r0(n, cfg))
}

pub fn check_r1_range(from: u64, to: u64, cfg: &LadderConfig, jobs: usize) -> Result<CheckResult> {
    per_index("r1", from, to, jobs, |n| check_r1(n, cfg))
}

pub fn check_r2_range(from: u64, to: u64, cfg: &LadderConfig, jobs: usize) -> Result<CheckResult> {
    per_index("r2", from, to, jobs, |n| check_r2(n, cfg))
}

/// Every `(m, n)` with `1 <= m <= m_max` and `n_from <= n <= n_to`. Only the
/// instances inside the lemma's hypothesis count towards the summary.
pub fn check_lemma_4_2_grid(
    m_max: u32,
    n_from: u64,
    n_to: u64,
    cfg: &LadderConfig,
    jobs: usize,
) -> Result<(CheckResult, Vec<CheckResult>)> {
    let all = sharded(1, m_max as u64, jobs, |lo, hi| {
        let mut out = Vec::new();
        for m in lo as u32..=hi as u32 {
            for (n, h) in (n_from..=n_to).zip(HarmonicNumbers::new(m, n_from)) {
                out.push(lemma_4_2_with(m, n, &h, cfg)?);
            }
        }
        Ok(out)
    })?;
    let inside: Vec<_> = all.iter().filter(|r| r.in_hypothesis).cloned().collect();
    let name = format!("lemma_4_2[m<={m_max}, {n_from}<=n<={n_to}, m>=11 or n>=30]");
    Ok((summarize(&name, &inside), all))
}

/// Primes `p_lo ..= p_{hi+1}`, as needed by steps `lo..=hi`.
fn primes_for(lo: u64, hi: u64) -> Vec<u64> {
    Primes::new()
        .skip(lo as usize - 1)
        .take((hi - lo + 2) as usize)
        .collect()
}

/// Firoozbakht's inequality for `from <= n <= to`.
pub fn check_firoozbakht_range(
    from: u64,
    to: u64,
    cfg: &LadderConfig,
    jobs: usize,
) -> Result<CheckResult> {
    let from = from.max(1);
    let parts = sharded(from, to, jobs, |lo, hi| {
        let primes = primes_for(lo, hi);
        let mut window: VecDeque<Atom> = VecDeque::new();
        let atom = |p: u64| Atom::new(vec![BigRational::from_integer(p.into())]);
        window.push_back(atom(primes[0]));
        let mut out = Vec::new();
        for (i, n) in (lo..=hi).enumerate() {
            window.push_back(atom(primes[i + 1]));
            let (a, b) = (BigInt::from(n), -BigInt::from(n + 1));
            let v = decide_atoms(&[(&a, &window[1]), (&b, &window[0])], cfg);
            out.push(CheckResult::from_verdict(
                "firoozbakht",
                Ordering3::Less,
                v,
                Some(format!("n={n}")),
            ));
            window.pop_front();
        }
        Ok(out)
    })?;
    Ok(summarize(&format!("firoozbakht[{from}..={to}]"), &parts))
}

/// The refined inequality for `from <= n <= to` (`from >= 3`).
pub fn check_sun_range(from: u64, to: u64, cfg: &LadderConfig, jobs: usize) -> Result<CheckResult> {
    let parts = sharded(from, to, jobs, |lo, hi| {
        let primes = primes_for(lo, hi);
        (lo..=hi)
            .enumerate()
            .map(|(i, n)| sun_with(n, primes[i], primes[i + 1], cfg))
            .collect()
    })?;
    Ok(summarize(
        &format!("sun_prime_inequality[{from}..={to}]"),
        &parts,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    pub ladder: LadderConfig,
    pub jobs: usize,
    /// Upper index for the two prime inequalities.
    pub prime_horizon: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            ladder: LadderConfig::default(),
            jobs: 1,
            prime_horizon: 100_000,
        }
    }
}

/// Every check at the regions where the text asserts it.
pub fn paper_suite(opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let cfg = &opts.ladder;
    let jobs = opts.jobs;
    let mut out = constants_suite(cfg)?;
    for n in [4, 5, 6, 10, 50] {
        out.push(check_bound_2_1(1, -1, n, cfg)?);
    }
    out.push(check_wn_positivity(3, 2, 50, cfg)?);
    out.push(check_wn_positivity(5, 6, 20, cfg)?);
    out.push(check_derangement_window(cfg)?);
    out.push(check_r0_range(2, 300, cfg, jobs)?);
    out.push(check_r1_range(3, 300, cfg, jobs)?);
    out.push(check_r2_range(2, 1000, cfg, jobs)?);
    for x in [ratio(1, 1), ratio(1, 1000), ratio(10, 1)] {
        out.push(check_lemma_4_1(&x, cfg)?);
    }
    out.push(check_lemma_4_2_grid(40, 3, 200, cfg, jobs)?.0);
    out.push(check_harmonic_window(cfg)?);
    out.push(check_firoozbakht_range(1, opts.prime_horizon, cfg, jobs)?);
    out.push(check_sun_range(5, opts.prime_horizon, cfg, jobs)?);
    Ok(out)
}
