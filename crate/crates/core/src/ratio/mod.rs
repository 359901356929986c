//! Certified signs of integer-weighted log combinations `sum c_i ln x_i`,
//! and the monotonicity scans built on them.
//!
//! A sign is first sought with interval logarithms on a precision ladder
//! (128 bits, doubling up to a cap). Intervals can only ever certify a strict
//! sign; equality, and anything the ladder cannot separate, goes to an exact
//! cross-power comparison, provided its estimated size stays under a budget.
//! Otherwise the verdict is `Undecided`.
//!
//! For the root ratio `r_n = a_{n+1}^{1/(n+1)} / a_n^{1/n}` the relevant
//! combination is `n(n+1)(n+2) * Delta_n`, i.e.
//! `2n(n+2) ln a_{n+1} - (n+1)(n+2) ln a_n - n(n+1) ln a_{n+2}`, which is
//! positive exactly when `r_n > r_{n+1}`.

mod scan;

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{ln_rational, DyadicInterval, ExactInt, ExactRational, Precision};
use crate::sequences::SequenceSpec;

pub use scan::{
    check_monotone, check_monotone_parallel, find_min_start, ratio_table, Direction, MethodStats,
    MinStart, MonotonicityReport, TableRow,
};

/// Outcome of a sign decision, relative to zero (or of `lhs` vs `rhs`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ordering3 {
    Less,
    Equal,
    Greater,
    Undecided,
}

impl Ordering3 {
    pub fn as_str(self) -> &'static str {
        match self {
            Ordering3::Less => "less",
            Ordering3::Equal => "equal",
            Ordering3::Greater => "greater",
            Ordering3::Undecided => "undecided",
        }
    }
}

impl From<Ordering> for Ordering3 {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Ordering3::Less,
            Ordering::Equal => Ordering3::Equal,
            Ordering::Greater => Ordering3::Greater,
        }
    }
}

impl fmt::Display for Ordering3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Ordering3 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "less" => Ok(Ordering3::Less),
            "equal" => Ok(Ordering3::Equal),
            "greater" => Ok(Ordering3::Greater),
            "undecided" => Ok(Ordering3::Undecided),
            _ => Err(Error::Parse(format!("unknown ordering {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictMethod {
    Exact,
    Interval { bits: u32 },
}

impl fmt::Display for VerdictMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictMethod::Exact => f.write_str("exact"),
            VerdictMethod::Interval { bits } => write!(f, "interval@{bits}"),
        }
    }
}

impl FromStr for VerdictMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "exact" {
            return Ok(VerdictMethod::Exact);
        }
        s.strip_prefix("interval@")
            .and_then(|b| b.parse().ok())
            .map(|bits| VerdictMethod::Interval { bits })
            .ok_or_else(|| Error::Parse(format!("unknown method {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Verdict {
    pub ordering: Ordering3,
    pub method: VerdictMethod,
    /// Precision escalations made before the verdict (the exact fallback
    /// counts as one).
    pub work: u32,
}

/// Precision ladder and exact-fallback budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LadderConfig {
    pub start_bits: u32,
    pub cap_bits: u32,
    /// Largest estimated exact-comparison size, in bits, worth attempting.
    pub exact_budget_bits: u64,
}

impl Default for LadderConfig {
    fn default() -> Self {
        Self {
            start_bits: 128,
            cap_bits: 1 << 16,
            exact_budget_bits: 1 << 31,
        }
    }
}

impl LadderConfig {
    pub fn with_cap(cap_bits: u32) -> Self {
        Self {
            cap_bits,
            ..Self::default()
        }
    }

    fn rungs(&self) -> impl Iterator<Item = u32> + '_ {
        let first = self
            .start_bits
            .clamp(Precision::MIN_BITS, self.cap_bits.max(Precision::MIN_BITS));
        std::iter::successors(Some(first), |&b| b.checked_mul(2))
            .take_while(move |&b| b <= self.cap_bits.max(first))
    }
}

/// `sum c_i ln x_i` with positive rational bases. Kept canonical: bases are
/// distinct, none equals 1, and no coefficient is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LogCombination {
    terms: BTreeMap<ExactRational, ExactInt>,
}

impl LogCombination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExactInt, ExactRational)>,
    {
        let mut c = Self::new();
        for (coef, base) in terms {
            c.push(coef, base)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, coef: ExactInt, base: ExactRational) -> Result<()> {
        if !base.is_positive() {
            return Err(Error::NonPositiveArgument);
        }
        if coef.is_zero() || base.is_one() {
            return Ok(());
        }
        let slot = self.terms.entry(base).or_insert_with(BigInt::zero);
        *slot += coef;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
        Ok(())
    }

    /// Term-wise sum.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (base, coef) in &other.terms {
            out.push(coef.clone(), base.clone())
                .expect("bases are positive");
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExactInt, &ExactRational)> {
        self.terms.iter().map(|(b, c)| (c, b))
    }
}

/// One logarithmic term of a combination: a coefficient on `ln(prod factors)`.
/// Enclosures of the log are cached per precision, so a term reused across
/// consecutive scan steps pays for each logarithm once.
#[derive(Debug)]
pub(crate) struct Atom {
    factors: Vec<ExactRational>,
    cache: RefCell<Vec<(u32, DyadicInterval)>>,
}

impl Atom {
    pub(crate) fn new(factors: Vec<ExactRational>) -> Self {
        Self {
            factors,
            cache: RefCell::new(Vec::new()),
        }
    }

    fn ln(&self, bits: u32) -> DyadicInterval {
        if let Some((_, hit)) = self.cache.borrow().iter().find(|(b, _)| *b == bits) {
            return hit.clone();
        }
        let p = Precision::new(bits).expect("ladder rungs are at least the minimum precision");
        let mut acc = DyadicInterval::zero();
        for f in &self.factors {
            acc = acc.add_exact(&ln_rational(f, p).expect("terms are positive"));
        }
        self.cache.borrow_mut().push((bits, acc.clone()));
        acc
    }

    fn size_bits(&self) -> u64 {
        self.factors
            .iter()
            .map(|f| f.numer().bits() + f.denom().bits())
            .sum()
    }
}

fn interval_sign(terms: &[(&ExactInt, &Atom)], bits: u32) -> Option<Ordering> {
    let mut acc = DyadicInterval::zero();
    for (c, atom) in terms {
        acc = acc.add_exact(&atom.ln(bits).scale(c));
    }
    match acc.sign() {
        Some(Ordering::Equal) | None => None,
        s => s,
    }
}

fn exact_cost(terms: &[(&ExactInt, &Atom)]) -> u64 {
    terms.iter().fold(0u64, |acc, (c, atom)| {
        let c = u64::try_from(c.magnitude()).unwrap_or(u64::MAX);
        acc.saturating_add(c.saturating_mul(atom.size_bits()))
    })
}

/// Compares `prod num^{c+} den^{c-}` with `prod den^{c+} num^{c-}`.
fn exact_sign(terms: &[(&ExactInt, &Atom)]) -> Ordering {
    let mut lhs = BigInt::one();
    let mut rhs = BigInt::one();
    for (c, atom) in terms {
        let e = u32::try_from(c.magnitude()).expect("exponent checked against the budget");
        for f in &atom.factors {
            let (up, down) = (
                num_traits::pow(f.numer().clone(), e as usize),
                num_traits::pow(f.denom().clone(), e as usize),
            );
            if c.is_positive() {
                lhs *= up;
                rhs *= down;
            } else {
                lhs *= down;
                rhs *= up;
            }
        }
    }
    lhs.cmp(&rhs)
}

/// The ladder, shared by every entry point.
pub(crate) fn decide_atoms(terms: &[(&ExactInt, &Atom)], cfg: &LadderConfig) -> Verdict {
    if terms.is_empty() {
        return Verdict {
            ordering: Ordering3::Equal,
            method: VerdictMethod::Exact,
            work: 0,
        };
    }
    let cost = exact_cost(terms);
    let affordable = cost <= cfg.exact_budget_bits;
    let mut work = 0;
    let mut rungs = cfg.rungs().peekable();
    while let Some(bits) = rungs.next() {
        if let Some(s) = interval_sign(terms, bits) {
            return Verdict {
                ordering: s.into(),
                method: VerdictMethod::Interval { bits },
                work,
            };
        }
        // When the exact comparison is no bigger than the next interval
        // attempt would be, stop climbing.
        let next = rungs.peek().copied().unwrap_or(0) as u64;
        if affordable && cost <= 64 * next {
            break;
        }
        work += 1;
    }
    if !affordable {
        return Verdict {
            ordering: Ordering3::Undecided,
            method: VerdictMethod::Interval {
                bits: cfg.rungs().last().unwrap_or(cfg.start_bits),
            },
            work,
        };
    }
    Verdict {
        ordering: exact_sign(terms).into(),
        method: VerdictMethod::Exact,
        work: work + 1,
    }
}

fn atoms_of(c: &LogCombination) -> Vec<(&ExactInt, Atom)> {
    c.terms()
        .map(|(coef, base)| (coef, Atom::new(vec![base.clone()])))
        .collect()
}

/// Certified sign of `sum c_i ln x_i`.
pub fn sign_of_log_combination(c: &LogCombination, cfg: &LadderConfig) -> Verdict {
    let atoms = atoms_of(c);
    let refs: Vec<_> = atoms.iter().map(|(c, a)| (*c, a)).collect();
    decide_atoms(&refs, cfg)
}

/// Sign by exact cross-powers only, ignoring any budget.
pub fn decide_exact(c: &LogCombination) -> Ordering {
    let atoms = atoms_of(c);
    let refs: Vec<_> = atoms.iter().map(|(c, a)| (*c, a)).collect();
    exact_sign(&refs)
}

/// Sign from a single interval evaluation at `bits`; `None` if it straddles
/// zero.
pub fn decide_by_intervals(c: &LogCombination, bits: u32) -> Option<Ordering> {
    if c.is_empty() {
        return None;
    }
    let atoms = atoms_of(c);
    let refs: Vec<_> = atoms.iter().map(|(c, a)| (*c, a)).collect();
    interval_sign(&refs, bits.max(Precision::MIN_BITS))
}

/// Coefficients of `ln a_n, ln a_{n+1}, ln a_{n+2}` in `n(n+1)(n+2) Delta_n`.
pub fn delta_coefficients(n: u64) -> [ExactInt; 3] {
    let n = BigInt::from(n);
    let n1 = &n + 1u32;
    let n2 = &n + 2u32;
    [-(&n1 * &n2), (&n * &n2) * 2u32, -(&n * &n1)]
}

/// `n(n+1)(n+2) Delta_n` as a combination of the terms' factors.
pub fn delta_combination(spec: &SequenceSpec, n: u64) -> Result<LogCombination> {
    let coefs = delta_coefficients(n);
    let mut c = LogCombination::new();
    for (k, coef) in coefs.iter().enumerate() {
        for f in spec.factors(n + k as u64)? {
            c.push(coef.clone(), f)?;
        }
    }
    Ok(c)
}

/// Compares `a_hi^{1/(n+1)}` with `a_lo^{1/n}` through the sign of
/// `n ln a_hi - (n+1) ln a_lo`.
pub fn cmp_roots(
    a_lo: &ExactRational,
    n: u64,
    a_hi: &ExactRational,
    cfg: &LadderConfig,
) -> Result<Verdict> {
    if n == 0 {
        return Err(Error::InvalidParameters(
            "root index must be at least 1".into(),
        ));
    }
    let c = LogCombination::from_terms([
        (BigInt::from(n), a_hi.clone()),
        (-BigInt::from(n + 1), a_lo.clone()),
    ])?;
    Ok(sign_of_log_combination(&c, cfg))
}

/// Decides `r_n` vs `r_{n+1}`: `Greater` means the root ratio decreases at
/// `n`, `Less` that it increases.
pub fn ratio_step_verdict(spec: &SequenceSpec, n: u64, cfg: &LadderConfig) -> Result<Verdict> {
    spec.validate()?;
    let atoms = [
        Atom::new(spec.factors(n)?),
        Atom::new(spec.factors(n + 1)?),
        Atom::new(spec.factors(n + 2)?),
    ];
    Ok(step_verdict(&atoms, n, cfg))
}

pub(crate) fn step_verdict(window: &[Atom; 3], n: u64, cfg: &LadderConfig) -> Verdict {
    let coefs = delta_coefficients(n);
    let terms: Vec<_> = coefs.iter().zip(window.iter()).collect();
    decide_atoms(&terms, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ratio;
    use num_rational::BigRational;

    fn int(n: i64) -> ExactRational {
        BigRational::from_integer(n.into())
    }

    fn comb(terms: &[(i64, ExactRational)]) -> LogCombination {
        LogCombination::from_terms(terms.iter().map(|(c, b)| (BigInt::from(*c), b.clone())))
            .unwrap()
    }

    #[test]
    fn geometric_combination_is_equal() {
        let n = 7i64;
        let c = comb(&[
            (2 * n * (n + 2), int(1 << (n + 1))),
            (-(n + 1) * (n + 2), int(1 << n)),
            (-n * (n + 1), int(1 << (n + 2))),
        ]);
        let v = sign_of_log_combination(&c, &LadderConfig::default());
        assert_eq!(v.ordering, Ordering3::Equal);
        assert_eq!(v.method, VerdictMethod::Exact);
    }

    #[test]
    fn fibonacci_delta_4() {
        let c = comb(&[(48, int(5)), (-30, int(3)), (-20, int(8))]);
        let v = sign_of_log_combination(&c, &LadderConfig::default());
        assert_eq!(v.ordering, Ordering3::Greater);
        assert_eq!(v.method, VerdictMethod::Interval { bits: 128 });
        assert_eq!(decide_exact(&c), Ordering::Greater);
    }

    #[test]
    fn harmonic_delta_3() {
        let c = comb(&[
            (30, ratio(25, 12)),
            (-20, ratio(11, 6)),
            (-12, ratio(137, 60)),
        ]);
        assert_eq!(
            sign_of_log_combination(&c, &LadderConfig::default()).ordering,
            Ordering3::Less
        );
        assert_eq!(decide_exact(&c), Ordering::Less);
    }

    #[test]
    fn canonical_form_merges_and_drops() {
        let c = comb(&[(3, int(2)), (-3, int(2)), (5, int(1)), (0, int(7))]);
        assert!(c.is_empty());
        assert_eq!(
            sign_of_log_combination(&c, &LadderConfig::default()).ordering,
            Ordering3::Equal
        );
        assert_eq!(
            LogCombination::from_terms([(BigInt::from(1), ratio(-1, 2))]),
            Err(Error::NonPositiveArgument)
        );
    }

    #[test]
    fn cmp_roots_examples() {
        let cfg = LadderConfig::default();
        assert_eq!(
            cmp_roots(&int(3), 4, &int(5), &cfg).unwrap().ordering,
            Ordering3::Greater
        );
        assert_eq!(
            cmp_roots(&int(2), 1, &int(3), &cfg).unwrap().ordering,
            Ordering3::Less
        );
        for c in [2, 7, 1000] {
            for n in [1, 5, 50] {
                assert_eq!(
                    cmp_roots(&int(c), n, &int(c), &cfg).unwrap().ordering,
                    Ordering3::Less
                );
            }
        }
    }

    #[test]
    fn step_examples() {
        let cfg = LadderConfig::default();
        let fib = SequenceSpec::fibonacci();
        assert_eq!(
            ratio_step_verdict(&fib, 3, &cfg).unwrap().ordering,
            Ordering3::Less
        );
        assert_eq!(
            ratio_step_verdict(&fib, 4, &cfg).unwrap().ordering,
            Ordering3::Greater
        );
        assert_eq!(
            ratio_step_verdict(&SequenceSpec::Derangement, 3, &cfg)
                .unwrap()
                .ordering,
            Ordering3::Greater
        );
        assert!(ratio_step_verdict(&SequenceSpec::Derangement, 1, &cfg).is_err());
    }

    #[test]
    fn budget_exhaustion_is_undecided() {
        // Equal, but too big for a tiny budget and unresolvable by intervals.
        let c = comb(&[(1000, int(9)), (-2000, int(3))]);
        let cfg = LadderConfig {
            start_bits: 128,
            cap_bits: 256,
            exact_budget_bits: 10,
        };
        let v = sign_of_log_combination(&c, &cfg);
        assert_eq!(v.ordering, Ordering3::Undecided);
        assert_eq!(v.work, 2);
    }

    #[test]
    fn method_text_round_trips() {
        for m in [VerdictMethod::Exact, VerdictMethod::Interval { bits: 512 }] {
            assert_eq!(m.to_string().parse::<VerdictMethod>().unwrap(), m);
        }
    }
}
