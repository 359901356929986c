//! Exact generators for the sequences under study.
//!
//! Every sequence is exposed two ways: single-term evaluation ([`term`],
//! safe to call from any thread) and a stateful range iterator
//! ([`SequenceSpec::factors_from`]) for scans. A term is delivered as a list
//! of positive rational *factors* whose product is `a_n`; for everything but
//! [`SequenceSpec::Product`] the list has one element, and a product simply
//! concatenates its children's lists. Keeping the factors apart lets the ratio
//! engine take logarithms of each separately.

mod derangement;
mod harmonic;
mod lucas;
mod primes;
mod squarefree;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::numerics::ExactRational;

pub use derangement::{derangement_inclusion_exclusion, derangement_term, Derangements};
pub use harmonic::{harmonic_term, HarmonicNumbers};
pub use lucas::{lucas_constants, lucas_term, LucasConstants, LucasTerms};
pub use primes::{nth_prime, nth_prime_u64, prime_upper_bound, Primes};
pub use squarefree::{squarefree_sum, Squarefree, SquarefreeSums};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SequenceSpec {
    Lucas { a: i64, b: i64 },
    Derangement,
    Harmonic { m: u32 },
    Primes,
    SquarefreeSum,
    Product(Box<SequenceSpec>, Box<SequenceSpec>),
}

impl SequenceSpec {
    pub fn fibonacci() -> Self {
        SequenceSpec::Lucas { a: 1, b: -1 }
    }

    pub fn lucas(a: i64, b: i64) -> Result<Self> {
        lucas::validate(a, b)?;
        Ok(SequenceSpec::Lucas { a, b })
    }

    pub fn harmonic(m: u32) -> Result<Self> {
        let s = SequenceSpec::Harmonic { m };
        s.validate()?;
        Ok(s)
    }

    pub fn product(left: SequenceSpec, right: SequenceSpec) -> Self {
        SequenceSpec::Product(Box::new(left), Box::new(right))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SequenceSpec::Lucas { a, b } => lucas::validate(*a, *b),
            SequenceSpec::Harmonic { m } if *m == 0 => Err(Error::InvalidParameters(
                "harmonic order m must be at least 1".into(),
            )),
            SequenceSpec::Product(l, r) => {
                l.validate()?;
                r.validate()
            }
            _ => Ok(()),
        }
    }

    /// First index with `a_n > 0`.
    pub fn domain_start(&self) -> u64 {
        match self {
            SequenceSpec::Derangement => 2,
            SequenceSpec::Product(l, r) => l.domain_start().max(r.domain_start()),
            _ => 1,
        }
    }

    /// Number of factors each term is split into.
    pub fn factor_count(&self) -> usize {
        match self {
            SequenceSpec::Product(l, r) => l.factor_count() + r.factor_count(),
            _ => 1,
        }
    }

    pub fn is_fibonacci(&self) -> bool {
        matches!(self, SequenceSpec::Lucas { a: 1, b: -1 })
    }

    /// The factors of `a_n`; their product is `term(self, n)`.
    pub fn factors(&self, n: u64) -> Result<Vec<ExactRational>> {
        self.validate()?;
        self.check_index(n)?;
        let mut out = Vec::with_capacity(self.factor_count());
        self.push_factors(n, &mut out);
        Ok(out)
    }

    fn push_factors(&self, n: u64, out: &mut Vec<ExactRational>) {
        let int = |v| BigRational::from_integer(v);
        match self {
            SequenceSpec::Lucas { a, b } => out.push(int(lucas::lucas_pair(*a, *b, n).0)),
            SequenceSpec::Derangement => out.push(int(derangement_term(n))),
            SequenceSpec::Harmonic { m } => out.push(harmonic_term(*m, n)),
            SequenceSpec::Primes => out.push(int(nth_prime(n))),
            SequenceSpec::SquarefreeSum => out.push(int(squarefree_sum(n))),
            SequenceSpec::Product(l, r) => {
                l.push_factors(n, out);
                r.push_factors(n, out);
            }
        }
    }

    fn check_index(&self, n: u64) -> Result<()> {
        let start = self.domain_start();
        if n < start {
            return Err(Error::IndexBelowDomainStart { index: n, start });
        }
        Ok(())
    }

    /// Iterator over `(n, factors of a_n)` for `n = start, start + 1, ...`.
    pub fn factors_from(&self, start: u64) -> Result<FactorIter> {
        self.validate()?;
        self.check_index(start)?;
        Ok(FactorIter {
            n: start,
            source: Source::new(self, start),
        })
    }
}

/// `a_n` exactly, for `n >= spec.domain_start()`.
pub fn term(spec: &SequenceSpec, n: u64) -> Result<ExactRational> {
    Ok(spec
        .factors(n)?
        .into_iter()
        .fold(BigRational::one(), |acc, f| acc * f))
}

enum Source {
    Lucas(LucasTerms),
    Derangement(Derangements),
    Harmonic(HarmonicNumbers),
    Primes(Primes),
    SquarefreeSum(SquarefreeSums),
    Product(Box<Source>, Box<Source>),
}

impl Source {
    fn new(spec: &SequenceSpec, start: u64) -> Self {
        match spec {
            SequenceSpec::Lucas { a, b } => {
                Source::Lucas(LucasTerms::new(*a, *b, start).expect("validated"))
            }
            SequenceSpec::Derangement => Source::Derangement(Derangements::new(start)),
            SequenceSpec::Harmonic { m } => Source::Harmonic(HarmonicNumbers::new(*m, start)),
            SequenceSpec::Primes => {
                let mut it = Primes::new();
                if start > 1 {
                    it.nth(start as usize - 2);
                }
                Source::Primes(it)
            }
            SequenceSpec::SquarefreeSum => Source::SquarefreeSum(SquarefreeSums::new(start)),
            SequenceSpec::Product(l, r) => Source::Product(
                Box::new(Source::new(l, start)),
                Box::new(Source::new(r, start)),
            ),
        }
    }

    fn push_next(&mut self, out: &mut Vec<ExactRational>) {
        let int = |v| BigRational::from_integer(v);
        match self {
            Source::Lucas(it) => out.push(int(it.next().unwrap())),
            Source::Derangement(it) => out.push(int(it.next().unwrap())),
            Source::Harmonic(it) => out.push(it.next().unwrap()),
            Source::Primes(it) => out.push(int(it.next().unwrap().into())),
            Source::SquarefreeSum(it) => out.push(int(it.next().unwrap())),
            Source::Product(l, r) => {
                l.push_next(out);
                r.push_next(out);
            }
        }
    }
}

/// Range iterator returned by [`SequenceSpec::factors_from`]. Never ends.
pub struct FactorIter {
    n: u64,
    source: Source,
}

impl Iterator for FactorIter {
    type Item = (u64, Vec<ExactRational>);

    fn next(&mut self) -> Option<Self::Item> {
        let mut out = Vec::new();
        self.source.push_next(&mut out);
        let n = self.n;
        self.n += 1;
        Some((n, out))
    }
}

/// Canonical textual form, also accepted by [`FromStr`]:
/// `fibonacci`, `lucas(A,B)`, `derangement`, `harmonic(m)`, `primes`,
/// `squarefree-sum`, `product(LEFT,RIGHT)`.
impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            s if s.is_fibonacci() => f.write_str("fibonacci"),
            SequenceSpec::Lucas { a, b } => write!(f, "lucas({a},{b})"),
            SequenceSpec::Derangement => f.write_str("derangement"),
            SequenceSpec::Harmonic { m } => write!(f, "harmonic({m})"),
            SequenceSpec::Primes => f.write_str("primes"),
            SequenceSpec::SquarefreeSum => f.write_str("squarefree-sum"),
            SequenceSpec::Product(l, r) => write!(f, "product({l},{r})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-' || c == '_'))
            .unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn integer<T: FromStr>(&mut self) -> Result<T> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let mut len = rest.strip_prefix(['-', '+']).map_or(0, |_| 1);
        len += rest[len..]
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len() - len);
        let v = rest[..len]
            .parse()
            .map_err(|_| self.err("expected an integer"))?;
        self.pos += len;
        Ok(v)
    }

    fn spec(&mut self, depth: usize) -> Result<SequenceSpec> {
        if depth > 64 {
            return Err(self.err("nesting too deep"));
        }
        let name = self.word();
        let spec = match name.to_ascii_lowercase().as_str() {
            "fibonacci" => SequenceSpec::fibonacci(),
            "derangement" => SequenceSpec::Derangement,
            "primes" => SequenceSpec::Primes,
            "squarefree-sum" => SequenceSpec::SquarefreeSum,
            "lucas" => {
                self.expect('(')?;
                let a = self.integer()?;
                self.expect(',')?;
                let b = self.integer()?;
                self.expect(')')?;
                SequenceSpec::lucas(a, b)?
            }
            "harmonic" => {
                self.expect('(')?;
                let m = self.integer()?;
                self.expect(')')?;
                SequenceSpec::harmonic(m)?
            }
            "product" => {
                self.expect('(')?;
                let l = self.spec(depth + 1)?;
                self.expect(',')?;
                let r = self.spec(depth + 1)?;
                self.expect(')')?;
                SequenceSpec::product(l, r)
            }
            "" => return Err(self.err("expected a sequence name")),
            other => return Err(Error::Parse(format!("unknown sequence {other:?}"))),
        };
        Ok(spec)
    }
}

impl FromStr for SequenceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let spec = p.spec(0)?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ratio;

    #[test]
    fn term_examples() {
        assert_eq!(term(&SequenceSpec::Derangement, 2).unwrap(), ratio(1, 1));
        let ff = SequenceSpec::product(SequenceSpec::fibonacci(), SequenceSpec::fibonacci());
        assert_eq!(term(&ff, 5).unwrap(), ratio(25, 1));
        assert_eq!(
            term(&SequenceSpec::Harmonic { m: 1 }, 2).unwrap(),
            ratio(3, 2)
        );
    }

    #[test]
    fn below_domain_start() {
        assert_eq!(
            term(&SequenceSpec::Derangement, 1),
            Err(Error::IndexBelowDomainStart { index: 1, start: 2 })
        );
        let p = SequenceSpec::product(SequenceSpec::Primes, SequenceSpec::Derangement);
        assert_eq!(p.domain_start(), 2);
        assert!(p.factors_from(1).is_err());
    }

    #[test]
    fn iterator_agrees_with_term() {
        let specs = [
            SequenceSpec::fibonacci(),
            SequenceSpec::Lucas { a: 5, b: 6 },
            SequenceSpec::Derangement,
            SequenceSpec::Harmonic { m: 2 },
            SequenceSpec::Primes,
            SequenceSpec::SquarefreeSum,
            SequenceSpec::product(SequenceSpec::Primes, SequenceSpec::Harmonic { m: 1 }),
        ];
        for spec in &specs {
            for start in [spec.domain_start(), 7, 40] {
                for (n, f) in spec.factors_from(start).unwrap().take(25) {
                    assert_eq!(f, spec.factors(n).unwrap(), "{spec} at {n}");
                }
            }
        }
    }

    #[test]
    fn parse_and_display_round_trip() {
        for text in [
            "fibonacci",
            "lucas(3,2)",
            "lucas(4,-7)",
            "derangement",
            "harmonic(3)",
            "primes",
            "squarefree-sum",
            "product(fibonacci,product(harmonic(2),primes))",
        ] {
            let spec: SequenceSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        let spaced: SequenceSpec = " product( lucas(1, -1) , derangement ) ".parse().unwrap();
        assert_eq!(spaced.to_string(), "product(fibonacci,derangement)");
    }

    #[test]
    fn parse_rejects_bad_input() {
        for text in [
            "",
            "fib",
            "lucas(2,1)",
            "harmonic(0)",
            "lucas(1)",
            "primes)",
            "product(primes)",
            "harmonic(99999999999)",
        ] {
            assert!(text.parse::<SequenceSpec>().is_err(), "{text:?}");
        }
    }
}
