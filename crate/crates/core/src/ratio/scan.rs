use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::{step_verdict, Atom, LadderConfig, Ordering3, Verdict, VerdictMethod};
use crate::error::{Error, Result};
use crate::numerics::{DyadicInterval, Precision};
use crate::sequences::SequenceSpec;

/// The claimed behaviour of the root ratio `r_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Decreasing,
    Increasing,
}

impl Direction {
    /// The step verdict that confirms this direction.
    pub fn expected(self) -> Ordering3 {
        match self {
            Direction::Decreasing => Ordering3::Greater,
            Direction::Increasing => Ordering3::Less,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Decreasing => "decreasing",
            Direction::Increasing => "increasing",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "decreasing" => Ok(Direction::Decreasing),
            "increasing" => Ok(Direction::Increasing),
            _ => Err(Error::Parse(format!("unknown direction {s:?}"))),
        }
    }
}

/// How verdicts were reached over a scan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MethodStats {
    pub exact: u64,
    pub interval: u64,
    /// Highest interval precision that produced or attempted a verdict.
    pub max_bits: u32,
}

impl MethodStats {
    pub fn record(&mut self, v: &Verdict) {
        match v.method {
            VerdictMethod::Exact => self.exact += 1,
            VerdictMethod::Interval { bits } => {
                self.interval += 1;
                self.max_bits = self.max_bits.max(bits);
            }
        }
    }

    pub fn merge(&mut self, other: &MethodStats) {
        self.exact += other.exact;
        self.interval += other.interval;
        self.max_bits = self.max_bits.max(other.max_bits);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonicityReport {
    pub spec: SequenceSpec,
    /// Steps `n = from ..= to - 2` were decided; the scan reads `a_from .. a_to`.
    pub from: u64,
    pub to: u64,
    pub direction: Direction,
    /// Indices where the claimed direction fails, ascending.
    pub violations: Vec<u64>,
    /// Indices left undecided, ascending. Not violations, but not certified.
    pub undecided: Vec<u64>,
    /// `last violation + 1` (or `from` when there is none); `None` when the
    /// last scanned step is itself a violation.
    pub min_valid_start: Option<u64>,
    pub stats: MethodStats,
}

impl MonotonicityReport {
    pub fn certified(&self) -> bool {
        self.violations.is_empty() && self.undecided.is_empty()
    }

    pub fn last_step(&self) -> u64 {
        self.to - 2
    }

    fn finish(&mut self) {
        self.min_valid_start = match self.violations.last() {
            None => Some(self.from),
            Some(&v) if v < self.last_step() => Some(v + 1),
            Some(_) => None,
        };
    }
}

fn check_range(spec: &SequenceSpec, from: u64, to: u64) -> Result<()> {
    spec.validate()?;
    if from < spec.domain_start() {
        return Err(Error::IndexBelowDomainStart {
            index: from,
            start: spec.domain_start(),
        });
    }
    if to < from.saturating_add(2) {
        return Err(Error::InvalidParameters(format!(
            "range needs to >= from + 2 (got from = {from}, to = {to})"
        )));
    }
    Ok(())
}

/// Scans steps `lo ..= hi` (each reading three consecutive terms).
fn scan_steps(
    spec: &SequenceSpec,
    lo: u64,
    hi: u64,
    direction: Direction,
    cfg: &LadderConfig,
) -> (Vec<u64>, Vec<u64>, MethodStats) {
    let mut terms = spec.factors_from(lo).expect("range validated");
    let mut window: VecDeque<Atom> = VecDeque::with_capacity(3);
    for _ in 0..2 {
        window.push_back(Atom::new(terms.next().unwrap().1));
    }
    let (mut violations, mut undecided, mut stats) =
        (Vec::new(), Vec::new(), MethodStats::default());
    for n in lo..=hi {
        window.push_back(Atom::new(terms.next().unwrap().1));
        let w: [Atom; 3] = [
            window.pop_front().unwrap(),
            window.pop_front().unwrap(),
            window.pop_front().unwrap(),
        ];
        let v = step_verdict(&w, n, cfg);
        stats.record(&v);
        match v.ordering {
            Ordering3::Undecided => undecided.push(n),
            o if o != direction.expected() => violations.push(n),
            _ => {}
        }
        let [_, b, c] = w;
        window.push_back(b);
        window.push_back(c);
    }
    (violations, undecided, stats)
}

/// Certifies the claimed direction of `r_n` for `from <= n <= to - 2`.
pub fn check_monotone(
    spec: &SequenceSpec,
    from: u64,
    to: u64,
    direction: Direction,
    cfg: &LadderConfig,
) -> Result<MonotonicityReport> {
    check_monotone_parallel(spec, from, to, direction, cfg, 1)
}

/// Same as [`check_monotone`], sharding the steps into contiguous blocks over
/// `jobs` threads. The result does not depend on `jobs`.
pub fn check_monotone_parallel(
    spec: &SequenceSpec,
    from: u64,
    to: u64,
    direction: Direction,
    cfg: &LadderConfig,
    jobs: usize,
) -> Result<MonotonicityReport> {
    check_range(spec, from, to)?;
    let last = to - 2;
    let steps = last - from + 1;
    // Below a few hundred steps, thread start-up costs more than it saves.
    let jobs = (jobs.max(1) as u64).min(steps.div_ceil(256)).max(1);
    let chunk = steps.div_ceil(jobs);
    let blocks: Vec<(u64, u64)> = (0..jobs)
        .map(|j| (from + j * chunk, (from + (j + 1) * chunk - 1).min(last)))
        .filter(|(lo, hi)| lo <= hi)
        .collect();
    let parts: Vec<_> = if blocks.len() == 1 {
        vec![scan_steps(spec, from, last, direction, cfg)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = blocks
                .iter()
                .map(|&(lo, hi)| s.spawn(move || scan_steps(spec, lo, hi, direction, cfg)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("scan worker panicked"))
                .collect()
        })
    };
    let mut report = MonotonicityReport {
        spec: spec.clone(),
        from,
        to,
        direction,
        violations: Vec::new(),
        undecided: Vec::new(),
        min_valid_start: None,
        stats: MethodStats::default(),
    };
    for (v, u, st) in parts {
        report.violations.extend(v);
        report.undecided.extend(u);
        report.stats.merge(&st);
    }
    report.finish();
    Ok(report)
}

/// Empirical minimal start index, valid only up to the horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinStart {
    /// Smallest `N` with no violation for `N <= n <= horizon - 2`.
    pub n: Option<u64>,
    pub horizon: u64,
    /// Whether every step from `n` to the horizon was decided.
    pub tail_certified: bool,
    pub report: MonotonicityReport,
}

pub fn find_min_start(
    spec: &SequenceSpec,
    horizon: u64,
    direction: Direction,
    cfg: &LadderConfig,
    jobs: usize,
) -> Result<MinStart> {
    let report = check_monotone_parallel(spec, spec.domain_start(), horizon, direction, cfg, jobs)?;
    let n = report.min_valid_start;
    let tail_certified = n.is_some_and(|n| report.undecided.iter().all(|&u| u < n));
    Ok(MinStart {
        n,
        horizon,
        tail_certified,
        report,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub n: u64,
    /// Enclosure of `ln r_n = ln a_{n+1}/(n+1) - ln a_n/n`.
    pub ln_r: DyadicInterval,
    pub method: VerdictMethod,
}

/// Enclosures of `ln r_n` at the given indices, for sampling how fast the
/// root ratio approaches 1. Nothing here is a statement about the limit.
pub fn ratio_table(spec: &SequenceSpec, indices: &[u64], p: Precision) -> Result<Vec<TableRow>> {
    spec.validate()?;
    indices
        .iter()
        .map(|&n| {
            if n < spec.domain_start() {
                return Err(Error::IndexBelowDomainStart {
                    index: n,
                    start: spec.domain_start(),
                });
            }
            // Extra working bits absorb the n(n+1) scaling before dividing.
            let w = Precision::new(p.bits() + 2 * (64 - n.leading_zeros()) + 8)?;
            let cur = Atom::new(spec.factors(n)?).ln(w.bits());
            let next = Atom::new(spec.factors(n + 1)?).ln(w.bits());
            let num = next
                .scale(&BigInt::from(n))
                .sub_exact(&cur.scale(&BigInt::from(n + 1)));
            let den = DyadicInterval::from_int(BigInt::from(n) * (n + 1));
            Ok(TableRow {
                n,
                ln_r: num.div(&den, p)?,
                method: VerdictMethod::Interval { bits: p.bits() },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> LadderConfig {
        LadderConfig::default()
    }

    #[test]
    fn fibonacci_scans() {
        let fib = SequenceSpec::fibonacci();
        let r = check_monotone(&fib, 4, 100, Direction::Decreasing, &cfg()).unwrap();
        assert!(r.certified());
        assert_eq!(r.min_valid_start, Some(4));
        let r = check_monotone(&fib, 1, 10, Direction::Decreasing, &cfg()).unwrap();
        assert_eq!(r.violations, vec![1, 3]);
        assert_eq!(r.min_valid_start, Some(4));
    }

    #[test]
    fn parallel_matches_sequential() {
        let d = SequenceSpec::Derangement;
        let seq = check_monotone(&d, 2, 900, Direction::Decreasing, &cfg()).unwrap();
        for jobs in [2, 3, 8] {
            assert_eq!(
                check_monotone_parallel(&d, 2, 900, Direction::Decreasing, &cfg(), jobs).unwrap(),
                seq
            );
        }
        assert_eq!(seq.violations, vec![2]);
    }

    #[test]
    fn min_start_examples() {
        let m = find_min_start(
            &SequenceSpec::fibonacci(),
            300,
            Direction::Decreasing,
            &cfg(),
            2,
        )
        .unwrap();
        assert_eq!(m.n, Some(4));
        assert!(m.tail_certified);
        let m = find_min_start(
            &SequenceSpec::Derangement,
            300,
            Direction::Decreasing,
            &cfg(),
            2,
        )
        .unwrap();
        assert_eq!(m.n, Some(3));
    }

    #[test]
    fn violation_at_last_step_has_no_start() {
        let r = check_monotone(
            &SequenceSpec::fibonacci(),
            1,
            5,
            Direction::Decreasing,
            &cfg(),
        )
        .unwrap();
        assert_eq!(r.violations, vec![1, 3]);
        assert_eq!(r.min_valid_start, None);
    }

    #[test]
    fn bad_ranges() {
        let fib = SequenceSpec::fibonacci();
        assert!(check_monotone(&fib, 5, 6, Direction::Decreasing, &cfg()).is_err());
        assert!(check_monotone(
            &SequenceSpec::Derangement,
            1,
            20,
            Direction::Decreasing,
            &cfg()
        )
        .is_err());
    }

    #[test]
    fn table_shrinks_for_fibonacci() {
        let p = Precision::new(128).unwrap();
        let rows = ratio_table(&SequenceSpec::fibonacci(), &[10, 100, 1000], p).unwrap();
        let mags: Vec<_> = rows.iter().map(|r| r.ln_r.abs()).collect();
        assert!(mags[1].lt(&mags[0]) && mags[2].lt(&mags[1]));
    }
}
