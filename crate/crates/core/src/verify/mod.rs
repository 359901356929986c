//! One check per explicit inequality, constant and finite computation that
//! the monotonicity proofs rely on.
//!
//! A check evaluates one or more *conditions*, each an enclosure that must be
//! strictly positive for the claim to hold. Enclosures are recomputed up the
//! precision ladder until every condition is positive (`Certified`), one is
//! negative (`Refuted`), or the cap is reached (`Undecided`).
//!
//! `in_hypothesis` marks whether the instance lies inside the region where
//! the claim is asserted; a `Refuted` result outside it is expected and is
//! reported for information only.

mod checks;
mod ranges;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{DyadicInterval, Precision};
use crate::ratio::{LadderConfig, Ordering3, Verdict, VerdictMethod};

pub use checks::{
    check_bound_2_1, check_bound_2_1_with, check_derangement_window, check_firoozbakht,
    check_harmonic_window, check_lemma_4_1, check_lemma_4_2, check_r0, check_r1, check_r2,
    check_sun_prime_inequality, check_wn_positivity, constants_suite, derangement_step,
};
pub use ranges::{
    check_firoozbakht_range, check_lemma_4_2_grid, check_r0_range, check_r1_range, check_r2_range,
    check_sun_range, paper_suite, summarize, SuiteOptions,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckStatus {
    Certified,
    Refuted,
    Undecided,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Certified => "certified",
            CheckStatus::Refuted => "refuted",
            CheckStatus::Undecided => "undecided",
        }
    }
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "certified" => Ok(CheckStatus::Certified),
            "refuted" => Ok(CheckStatus::Refuted),
            "undecided" => Ok(CheckStatus::Undecided),
            _ => Err(Error::Parse(format!("unknown status {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub in_hypothesis: bool,
    /// Parameters of the instance, or of the first failing instance in a range.
    pub witness: Option<String>,
    /// The binding condition (smallest lower endpoint) at the final precision.
    pub margin: Option<DyadicInterval>,
    pub verdict: Verdict,
    /// Named quantities that went into the decision.
    pub detail: Vec<(String, String)>,
}

impl CheckResult {
    pub fn certified(&self) -> bool {
        self.status == CheckStatus::Certified
    }

    /// Refuted inside the asserted region: the claim itself fails.
    pub fn is_counterexample(&self) -> bool {
        self.status == CheckStatus::Refuted && self.in_hypothesis
    }

    pub(crate) fn from_verdict(
        name: impl Into<String>,
        expected: Ordering3,
        verdict: Verdict,
        witness: Option<String>,
    ) -> Self {
        let status = match verdict.ordering {
            Ordering3::Undecided => CheckStatus::Undecided,
            o if o == expected => CheckStatus::Certified,
            _ => CheckStatus::Refuted,
        };
        Self {
            name: name.into(),
            status,
            in_hypothesis: true,
            witness,
            margin: None,
            verdict,
            detail: vec![("ordering".into(), verdict.ordering.to_string())],
        }
    }
}

/// What one evaluation at a fixed precision produced.
pub(crate) struct Attempt {
    /// Each must be strictly positive.
    pub conditions: Vec<(&'static str, DyadicInterval)>,
    pub detail: Vec<(String, String)>,
}

impl Attempt {
    pub fn new() -> Self {
        Self {
            conditions: Vec::new(),
            detail: Vec::new(),
        }
    }

    pub fn condition(mut self, name: &'static str, value: DyadicInterval) -> Self {
        self.conditions.push((name, value));
        self
    }

    pub fn detail(mut self, name: &str, value: impl fmt::Display) -> Self {
        self.detail.push((name.to_string(), value.to_string()));
        self
    }
}

/// Ladder rungs at or above `hint` bits.
fn rungs(cfg: &LadderConfig, hint: u32) -> Vec<u32> {
    let mut bits = cfg.start_bits.max(Precision::MIN_BITS);
    while bits < hint {
        bits = bits.saturating_mul(2);
    }
    let mut out = Vec::new();
    while bits <= cfg.cap_bits {
        out.push(bits);
        match bits.checked_mul(2) {
            Some(b) => bits = b,
            None => break,
        }
    }
    out
}

/// Runs `eval` up the ladder until its conditions are decided.
pub(crate) fn certify(
    name: &str,
    cfg: &LadderConfig,
    hint_bits: u32,
    witness: Option<String>,
    mut eval: impl FnMut(Precision) -> Result<Attempt>,
) -> Result<CheckResult> {
    let mut result = CheckResult {
        name: name.to_string(),
        status: CheckStatus::Undecided,
        in_hypothesis: true,
        witness,
        margin: None,
        verdict: Verdict {
            ordering: Ordering3::Undecided,
            method: VerdictMethod::Interval { bits: cfg.cap_bits },
            work: 0,
        },
        detail: Vec::new(),
    };
    for (work, bits) in rungs(cfg, hint_bits).into_iter().enumerate() {
        let attempt = eval(Precision::new(bits)?)?;
        let signs: Vec<_> = attempt.conditions.iter().map(|(_, c)| c.sign()).collect();
        let refuted = signs
            .iter()
            .any(|s| matches!(s, Some(std::cmp::Ordering::Less)));
        let certified = signs
            .iter()
            .all(|s| matches!(s, Some(std::cmp::Ordering::Greater)));
        result.margin = attempt
            .conditions
            .iter()
            .min_by(|a, b| a.1.lo().cmp(b.1.lo()))
            .map(|(_, c)| c.clone());
        result.detail = attempt.detail;
        for (label, c) in &attempt.conditions {
            result.detail.push((label.to_string(), c.to_string()));
        }
        result.verdict = Verdict {
            ordering: if certified {
                Ordering3::Greater
            } else if refuted {
                Ordering3::Less
            } else {
                Ordering3::Undecided
            },
            method: VerdictMethod::Interval { bits },
            work: work as u32,
        };
        if certified || refuted {
            result.status = if certified {
                CheckStatus::Certified
            } else {
                CheckStatus::Refuted
            };
            return Ok(result);
        }
    }
    Ok(result)
}
