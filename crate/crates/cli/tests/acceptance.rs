//! The twelve acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary (no libtest harness) so the output is exactly one
//! line per criterion plus a summary. Scans go through the CLI entry point
//! and are read back from the JSON report, so the whole stack is exercised.
//! The process exits 1 if any criterion fails.

use std::cmp::Ordering;
use std::time::Instant;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use ratiocert::numerics::{
    interval_arith, interval_ln, ln_rational, round_outward, ArithOp, DyadicInterval, Precision,
};
use ratiocert::ratio::{find_min_start, ratio_step_verdict, Direction, LadderConfig, Ordering3};
use ratiocert::sequences::{derangement_term, term, SequenceSpec};
use ratiocert::verify::{
    check_firoozbakht_range, check_lemma_4_2, check_lemma_4_2_grid, check_r0_range, check_r1_range,
    check_r2_range, check_sun_range, constants_suite, CheckStatus,
};
use ratiocert_cli::report::{Entry, Report};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn cli(args: &str) -> (i32, Report) {
    let jobs = jobs().to_string();
    let argv = std::iter::once("ratiocert")
        .chain(args.split_whitespace())
        .chain(["--format", "json", "--jobs", &jobs]);
    let out = ratiocert_cli::run(argv, None);
    let report = Report::from_json(&out.stdout)
        .unwrap_or_else(|e| panic!("`{args}`: {e}; stderr: {}", out.stderr));
    (out.code, report)
}

fn indices(v: &[Entry]) -> Vec<u64> {
    v.iter()
        .map(|e| match e {
            Entry::Index(n) => *n,
            Entry::Check(s) => panic!("unexpected named entry {s}"),
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fibonacci() -> Outcome {
    let (code, tail) = cli("check --seq fibonacci --from 4 --to 5000 --direction decreasing");
    ensure(
        code == 0 && tail.violations.is_empty() && tail.undecided.is_empty(),
        || {
            format!(
                "4..5000: exit {code}, violations {:?}, undecided {:?}",
                tail.violations, tail.undecided
            )
        },
    )?;
    let (_, full) = cli("check --seq fibonacci --from 1 --to 5000 --direction decreasing");
    let v = indices(&full.violations);
    ensure(v == [3], || {
        format!("tail 4..5000 clean, but the scan from 1 reports violations {v:?}, expected exactly [3]")
    })?;
    Ok("4..5000 certified; scan from 1 has the single violation n = 3".into())
}

fn derangement() -> Outcome {
    let (code, tail) = cli("check --seq derangement --from 3 --to 2000");
    ensure(code == 0, || {
        format!("3..2000: exit {code}, undecided {:?}", tail.undecided)
    })?;
    let (_, full) = cli("check --seq derangement --from 2 --to 2000");
    let v = indices(&full.violations);
    ensure(v == [2], || format!("scan from 2 reports {v:?}"))?;
    Ok("3..2000 certified decreasing; scan from 2 has the single violation n = 2".into())
}

fn harmonic() -> Outcome {
    let mut steps = 0;
    for m in 1..=10 {
        // Steps n = 3..=200 read terms up to H_202.
        let (code, r) = cli(&format!(
            "check --seq harmonic --m {m} --from 3 --to 202 --direction increasing"
        ));
        ensure(code == 0, || {
            format!(
                "m = {m}: violations {:?}, undecided {:?}",
                r.violations, r.undecided
            )
        })?;
        steps += r.stats.exact + r.stats.interval;
    }
    Ok(format!(
        "m = 1..10, n = 3..200 certified increasing ({steps} steps)"
    ))
}

fn lucas() -> Outcome {
    let cfg = LadderConfig::default();
    let m = find_min_start(
        &SequenceSpec::lucas(3, 2).unwrap(),
        2000,
        Direction::Decreasing,
        &cfg,
        jobs(),
    )
    .map_err(|e| e.to_string())?;
    let n = m.n.ok_or("no start found below the horizon")?;
    ensure(m.tail_certified, || {
        format!("N = {n} but the tail has undecided steps")
    })?;
    let (code, _) = cli(&format!(
        "check --seq lucas --A 3 --B 2 --from {n} --to 2000"
    ));
    ensure(code == 0, || format!("rescan from N = {n} exited {code}"))?;
    Ok(format!("lucas(3,2): N = {n} with a certified tail to 2000"))
}

fn primes() -> Outcome {
    let cfg = LadderConfig::default();
    let f = check_firoozbakht_range(1, 100_000, &cfg, jobs()).map_err(|e| e.to_string())?;
    ensure(f.certified(), || {
        format!("firoozbakht {} at {:?}", f.status, f.witness)
    })?;
    let s = check_sun_range(5, 100_000, &cfg, jobs()).map_err(|e| e.to_string())?;
    ensure(s.certified(), || {
        format!("sun {} at {:?}", s.status, s.witness)
    })?;
    Ok("Firoozbakht 1..=1e5 and Sun 5..=1e5 certified".into())
}

fn squarefree() -> Outcome {
    let (code, r) = cli("check --seq squarefree-sum --from 7 --to 100002 --direction increasing");
    ensure(code == 0 && r.violations.is_empty(), || {
        format!(
            "exit {code}, violations {:?}, undecided {:?}",
            r.violations, r.undecided
        )
    })?;
    Ok(format!(
        "7..1e5 certified increasing (max {} bits)",
        r.stats.max_bits
    ))
}

fn constants() -> Outcome {
    let all = constants_suite(&LadderConfig::default()).map_err(|e| e.to_string())?;
    let bad: Vec<_> = all
        .iter()
        .filter(|c| !c.certified())
        .map(|c| format!("{} {}", c.name, c.status))
        .collect();
    ensure(bad.is_empty(), || bad.join(", "))?;
    Ok(format!("{} constants certified", all.len()))
}

fn remainders() -> Outcome {
    let cfg = LadderConfig::default();
    let j = jobs();
    let checks = [
        check_r0_range(2, 300, &cfg, j),
        check_r1_range(3, 300, &cfg, j),
        check_r2_range(2, 1000, &cfg, j),
    ];
    let mut names = Vec::new();
    for c in checks {
        let c = c.map_err(|e| e.to_string())?;
        ensure(c.certified(), || {
            format!("{} {} at {:?}", c.name, c.status, c.witness)
        })?;
        names.push(c.name);
    }
    Ok(format!("{} certified", names.join(", ")))
}

fn lemma_grid() -> Outcome {
    let cfg = LadderConfig::default();
    let (summary, all) =
        check_lemma_4_2_grid(40, 3, 200, &cfg, jobs()).map_err(|e| e.to_string())?;
    ensure(summary.certified(), || {
        format!("{} at {:?}", summary.status, summary.witness)
    })?;
    let claimed = all.iter().filter(|c| c.in_hypothesis).count();
    ensure(
        all.iter()
            .filter(|c| c.in_hypothesis)
            .all(|c| c.certified()),
        || "summary hides a failure".into(),
    )?;
    let small = check_lemma_4_2(2, 3, &cfg).map_err(|e| e.to_string())?;
    ensure(
        small.status == CheckStatus::Refuted && !small.in_hypothesis,
        || {
            format!(
                "(m=2, n=3) is {} (in_hypothesis = {})",
                small.status, small.in_hypothesis
            )
        },
    )?;
    Ok(format!(
        "{claimed} in-hypothesis instances certified; (m=2, n=3) refuted outside the hypothesis"
    ))
}

/// a_{n+1}^{2n(n+2)} against a_n^{(n+1)(n+2)} a_{n+2}^{n(n+1)} by plain
/// big-integer arithmetic.
fn cross_power(spec: &SequenceSpec, n: u64) -> Ordering {
    let a: Vec<_> = (n..n + 3).map(|k| term(spec, k).unwrap()).collect();
    let (e0, e1, e2) = ((n + 1) * (n + 2), 2 * n * (n + 2), n * (n + 1));
    let p = |x: &BigInt, e: u64| x.pow(e as u32);
    let lhs = p(a[1].numer(), e1) * p(a[0].denom(), e0) * p(a[2].denom(), e2);
    let rhs = p(a[0].numer(), e0) * p(a[2].numer(), e2) * p(a[1].denom(), e1);
    lhs.cmp(&rhs)
}

fn oracle() -> Outcome {
    let cfg = LadderConfig::default();
    let specs: Vec<SequenceSpec> = [
        "fibonacci",
        "lucas(3,2)",
        "lucas(5,6)",
        "derangement",
        "harmonic(1)",
        "harmonic(4)",
        "primes",
        "squarefree-sum",
        "product(fibonacci,harmonic(2))",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect();
    let mut count = 0;
    for spec in &specs {
        for n in spec.domain_start()..=60 {
            let v = ratio_step_verdict(spec, n, &cfg).map_err(|e| e.to_string())?;
            let want: Ordering3 = cross_power(spec, n).into();
            ensure(v.ordering == want, || {
                format!("{spec} at n = {n}: ladder {} vs oracle {want}", v.ordering)
            })?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} steps over {} sequences agree with cross-power comparison",
        specs.len()
    ))
}

fn kernel() -> Outcome {
    let p = |b: u32| Precision::new(b).unwrap();
    let ln2 = interval_ln(&DyadicInterval::from_int(2), p(128)).map_err(|e| e.to_string())?;
    // ln 2 = 0.693147180559945309417232121458176568075500134360255254120680...
    let digits = BigInt::from(10u32).pow(60);
    let approx: BigInt = "693147180559945309417232121458176568075500134360255254120680"
        .parse()
        .unwrap();
    let lo = BigRational::new(approx.clone(), digits.clone());
    let hi = BigRational::new(approx + 1, digits);
    ensure(
        ln2.lo().to_rational() <= lo && hi <= ln2.hi().to_rational(),
        || format!("{ln2} misses ln 2"),
    )?;
    let width_cap = BigRational::new(BigInt::one(), BigInt::one() << 120u32);
    ensure(ln2.width().to_rational() <= width_cap, || {
        format!("{ln2} is wider than 2^-120")
    })?;

    let mut runner = TestRunner::new(Config {
        cases: 10_000,
        failure_persistence: None,
        ..Config::default()
    });
    let rat = (1i64..1 << 40, 1i64..1 << 40, any::<bool>())
        .prop_map(|(n, d, neg)| BigRational::new(if neg { -n } else { n }.into(), d.into()));
    let ops = prop_oneof![
        Just(ArithOp::Add),
        Just(ArithOp::Sub),
        Just(ArithOp::Mul),
        Just(ArithOp::Div)
    ];
    runner
        .run(&(rat.clone(), rat, 16u32..160, ops), |(a, b, bits, op)| {
            let exact = match op {
                ArithOp::Add => &a + &b,
                ArithOp::Sub => &a - &b,
                ArithOp::Mul => &a * &b,
                ArithOp::Div => &a / &b,
            };
            let r = interval_arith(
                &round_outward(&a, p(bits)),
                &round_outward(&b, p(bits)),
                op,
                p(bits),
            )
            .unwrap();
            prop_assert!(r.contains_rational(&exact));
            if a > BigRational::zero() {
                // ln a + ln(1/a) must enclose zero.
                let s = ln_rational(&a, p(bits))
                    .unwrap()
                    .add_exact(&ln_rational(&a.recip(), p(bits)).unwrap());
                prop_assert!(s.contains_rational(&BigRational::zero()));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("ln 2 at 128 bits encloses the reference; 10000 property cases hold".into())
}

fn derangement_oracle() -> Outcome {
    for n in 1..=8usize {
        let brute = (0..n)
            .permutations(n)
            .filter(|p| p.iter().enumerate().all(|(i, &v)| i != v))
            .count();
        ensure(derangement_term(n as u64) == BigInt::from(brute), || {
            format!("D_{n} != {brute}")
        })?;
    }
    for n in 0..=30u64 {
        // D_n = sum_k (-1)^k n!/k!
        let mut sum = BigInt::zero();
        let mut falling = BigInt::one(); // n!/k! for k = n, n-1, ...
        for k in (0..=n).rev() {
            let t = falling.clone();
            sum += if k % 2 == 0 { t } else { -t };
            falling *= k.max(1);
        }
        ensure(derangement_term(n) == sum, || {
            format!("D_{n} disagrees with inclusion-exclusion")
        })?;
    }
    Ok("brute force n <= 8 and inclusion-exclusion n <= 30 agree".into())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("fibonacci", fibonacci),
        ("derangement", derangement),
        ("harmonic", harmonic),
        ("lucas", lucas),
        ("primes", primes),
        ("squarefree-sums", squarefree),
        ("constants", constants),
        ("remainders", remainders),
        ("lemma-4.2-grid", lemma_grid),
        ("oracle-equivalence", oracle),
        ("numeric-kernel", kernel),
        ("derangement-oracle", derangement_oracle),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} ({secs:.1}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
