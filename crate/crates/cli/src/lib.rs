//! The `ratiocert` command line, as a library so tests can drive it without
//! spawning processes.
//!
//! Exit codes: 0 certified, 1 violation or refutation, 2 undecided, 64 usage
//! error.

pub mod args;
pub mod report;

use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use ratiocert::numerics::{Precision, Rounding};
use ratiocert::ratio::{
    check_monotone_parallel, find_min_start, ratio_table, LadderConfig, VerdictMethod,
};
use ratiocert::sequences::SequenceSpec;
use ratiocert::verify::{paper_suite, CheckResult, CheckStatus, SuiteOptions};

use args::{Cli, Command, Format, SeqArgs};
use report::{Entry, Report, ResultRow, RunConfig, Stats, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

pub const MAX_BITS_ENV: &str = "RATIOCERT_MAX_BITS";
const DEFAULT_MAX_BITS: u32 = 1 << 16;
const MIN_CAP_BITS: u32 = 128;

/// Everything a run produced.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Self {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr,
            report: None,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// `env_max_bits` is the value of `RATIOCERT_MAX_BITS`, if set.
pub fn run<I, T>(args: I, env_max_bits: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                    report: None,
                },
                _ => Outcome::usage(text),
            };
        }
    };
    match execute(&cli, env_max_bits) {
        Ok((report, code)) => emit(&cli, report, code),
        Err(msg) => Outcome::usage(format!("error: {msg}")),
    }
}

fn emit(cli: &Cli, report: Report, code: i32) -> Outcome {
    let body = match cli.common.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    let mut out = Outcome {
        code,
        stdout: String::new(),
        stderr: String::new(),
        report: Some(report),
    };
    match &cli.common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, body) {
                return Outcome::usage(format!("error: cannot write {}: {e}", path.display()));
            }
        }
        None => out.stdout = body,
    }
    out
}

fn ladder(cli: &Cli, env_max_bits: Option<&str>) -> Result<LadderConfig, String> {
    let cap = match (cli.common.max_bits, env_max_bits) {
        (Some(bits), _) => bits,
        (None, Some(raw)) => raw
            .trim()
            .parse()
            .map_err(|_| format!("{MAX_BITS_ENV} must be a positive integer, got {raw:?}"))?,
        (None, None) => DEFAULT_MAX_BITS,
    };
    if cap < MIN_CAP_BITS {
        return Err(format!(
            "precision cap must be at least {MIN_CAP_BITS} bits, got {cap}"
        ));
    }
    let mut cfg = LadderConfig::with_cap(cap);
    if let Some(budget) = cli.common.exact_budget {
        cfg.exact_budget_bits = budget;
    }
    Ok(cfg)
}

fn jobs(cli: &Cli) -> u32 {
    cli.common
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get() as u32))
}

/// Builds the sequence from `--seq` and its parameter flags.
pub fn resolve_sequence(s: &SeqArgs) -> Result<SequenceSpec, String> {
    let name = s.seq.trim();
    let stray = |flag: &str| Err(format!("--{flag} does not apply to --seq {name}"));
    let spec = match name {
        "lucas" => match (s.a, s.b) {
            (Some(a), Some(b)) => SequenceSpec::lucas(a, b).map_err(|e| e.to_string())?,
            _ => return Err("--seq lucas needs --A and --B".into()),
        },
        "harmonic" => match s.m {
            Some(m) => SequenceSpec::harmonic(m).map_err(|e| e.to_string())?,
            None => return Err("--seq harmonic needs --m".into()),
        },
        "product" => match (&s.left, &s.right) {
            (Some(l), Some(r)) => {
                let l: SequenceSpec = l.parse().map_err(|e: ratiocert::Error| e.to_string())?;
                let r: SequenceSpec = r.parse().map_err(|e: ratiocert::Error| e.to_string())?;
                SequenceSpec::product(l, r)
            }
            _ => return Err("--seq product needs --left and --right".into()),
        },
        other => other.parse().map_err(|e: ratiocert::Error| e.to_string())?,
    };
    if name != "lucas" && (s.a.is_some() || s.b.is_some()) {
        return stray(if s.a.is_some() { "A" } else { "B" });
    }
    if name != "harmonic" && s.m.is_some() {
        return stray("m");
    }
    if name != "product" && (s.left.is_some() || s.right.is_some()) {
        return stray(if s.left.is_some() { "left" } else { "right" });
    }
    Ok(spec)
}

fn base_config(cli: &Cli, cfg: &LadderConfig, command: &str) -> RunConfig {
    RunConfig {
        command: command.to_string(),
        max_bits: cfg.cap_bits,
        exact_budget_bits: cfg.exact_budget_bits,
        format: cli.common.format.as_str().to_string(),
        out: cli.common.out.as_ref().map(|p| p.display().to_string()),
        jobs: jobs(cli),
        ..RunConfig::default()
    }
}

fn method_string(m: VerdictMethod) -> String {
    m.to_string()
}

fn check_row(r: &CheckResult) -> ResultRow {
    let (lo, hi) = match &r.margin {
        Some(m) => (
            Some(m.lo().to_decimal(20, Rounding::Floor)),
            Some(m.hi().to_decimal(20, Rounding::Ceil)),
        ),
        None => (None, None),
    };
    ResultRow::Check {
        name: r.name.clone(),
        status: r.status.to_string(),
        in_hypothesis: r.in_hypothesis,
        witness: r.witness.clone(),
        margin_lo: lo,
        margin_hi: hi,
        method: method_string(r.verdict.method),
        work: r.verdict.work,
        detail: r.detail.clone(),
    }
}

fn execute(cli: &Cli, env_max_bits: Option<&str>) -> Result<(Report, i32), String> {
    let start = Instant::now();
    let cfg = ladder(cli, env_max_bits)?;
    let jobs = jobs(cli) as usize;
    let err = |e: ratiocert::Error| e.to_string();
    let (command, config, results, violations, undecided, stats, code) = match &cli.command {
        Command::Check {
            seq,
            from,
            to,
            direction,
        } => {
            let spec = resolve_sequence(seq)?;
            let r = check_monotone_parallel(&spec, *from, *to, (*direction).into(), &cfg, jobs)
                .map_err(err)?;
            let mut config = base_config(cli, &cfg, "check");
            config.sequence = Some(spec.to_string());
            config.from = Some(*from);
            config.to = Some(*to);
            config.direction = Some(r.direction.to_string());
            let code = if !r.violations.is_empty() {
                EXIT_VIOLATION
            } else if !r.undecided.is_empty() {
                EXIT_UNDECIDED
            } else {
                EXIT_OK
            };
            let row = ResultRow::Scan {
                sequence: spec.to_string(),
                from: r.from,
                to: r.to,
                last_step: r.last_step(),
                direction: r.direction.to_string(),
                certified: r.certified(),
                min_valid_start: r.min_valid_start,
            };
            let stats = Stats {
                exact: r.stats.exact,
                interval: r.stats.interval,
                max_bits: r.stats.max_bits,
            };
            (
                "check",
                config,
                vec![row],
                r.violations.iter().map(|&n| Entry::Index(n)).collect(),
                r.undecided.iter().map(|&n| Entry::Index(n)).collect(),
                stats,
                code,
            )
        }
        Command::FindStart {
            seq,
            horizon,
            direction,
        } => {
            let spec = resolve_sequence(seq)?;
            let m =
                find_min_start(&spec, *horizon, (*direction).into(), &cfg, jobs).map_err(err)?;
            let mut config = base_config(cli, &cfg, "find-start");
            config.sequence = Some(spec.to_string());
            config.horizon = Some(*horizon);
            config.direction = Some(m.report.direction.to_string());
            let code = match m.n {
                None => EXIT_VIOLATION,
                Some(_) if !m.tail_certified => EXIT_UNDECIDED,
                Some(_) => EXIT_OK,
            };
            let row = ResultRow::MinStart {
                sequence: spec.to_string(),
                horizon: *horizon,
                direction: m.report.direction.to_string(),
                n: m.n,
                tail_certified: m.tail_certified,
                note: format!(
                    "empirical up to horizon {horizon}: steps checked through n = {}; nothing is claimed beyond it",
                    m.report.last_step()
                ),
            };
            let r = &m.report;
            let stats = Stats {
                exact: r.stats.exact,
                interval: r.stats.interval,
                max_bits: r.stats.max_bits,
            };
            (
                "find-start",
                config,
                vec![row],
                r.violations.iter().map(|&n| Entry::Index(n)).collect(),
                r.undecided.iter().map(|&n| Entry::Index(n)).collect(),
                stats,
                code,
            )
        }
        Command::PaperSuite { prime_horizon } => {
            if *prime_horizon < 5 {
                return Err("--prime-horizon must be at least 5".into());
            }
            let opts = SuiteOptions {
                ladder: cfg,
                jobs,
                prime_horizon: *prime_horizon,
            };
            let checks = paper_suite(&opts).map_err(err)?;
            let mut config = base_config(cli, &cfg, "paper-suite");
            config.prime_horizon = Some(*prime_horizon);
            let mut stats = Stats::default();
            for c in &checks {
                match c.verdict.method {
                    VerdictMethod::Exact => stats.exact += 1,
                    VerdictMethod::Interval { bits } => {
                        stats.interval += 1;
                        stats.max_bits = stats.max_bits.max(bits);
                    }
                }
            }
            let violations: Vec<Entry> = checks
                .iter()
                .filter(|c| c.is_counterexample())
                .map(|c| Entry::Check(c.name.clone()))
                .collect();
            let undecided: Vec<Entry> = checks
                .iter()
                .filter(|c| c.in_hypothesis && c.status == CheckStatus::Undecided)
                .map(|c| Entry::Check(c.name.clone()))
                .collect();
            let code = if !violations.is_empty() {
                EXIT_VIOLATION
            } else if !undecided.is_empty() {
                EXIT_UNDECIDED
            } else {
                EXIT_OK
            };
            (
                "paper-suite",
                config,
                checks.iter().map(check_row).collect(),
                violations,
                undecided,
                stats,
                code,
            )
        }
        Command::Table {
            seq,
            indices,
            from,
            to,
            bits,
        } => {
            let spec = resolve_sequence(seq)?;
            let idx: Vec<u64> = match (from, to) {
                (Some(f), Some(t)) => (*f..=*t).collect(),
                _ => indices.clone(),
            };
            if idx.is_empty() {
                return Err("table needs a nonempty --indices list or --from/--to range".into());
            }
            let p = Precision::new(*bits).map_err(err)?;
            let rows = ratio_table(&spec, &idx, p).map_err(err)?;
            let mut config = base_config(cli, &cfg, "table");
            config.sequence = Some(spec.to_string());
            config.indices = Some(idx.clone());
            config.table_bits = Some(*bits);
            let stats = Stats {
                exact: 0,
                interval: rows.len() as u64,
                max_bits: *bits,
            };
            let results = rows
                .iter()
                .map(|r| {
                    let lo = r.ln_r.lo().to_decimal(20, Rounding::Floor);
                    let hi = r.ln_r.hi().to_decimal(20, Rounding::Ceil);
                    ResultRow::Table {
                        n: r.n,
                        ln_r_lo: lo,
                        ln_r_hi: hi,
                        method: method_string(r.method),
                    }
                })
                .collect();
            (
                "table",
                config,
                results,
                Vec::new(),
                Vec::new(),
                stats,
                EXIT_OK,
            )
        }
    };
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        config,
        results,
        violations,
        undecided,
        stats,
        wall_ms: start.elapsed().as_millis() as u64,
    };
    Ok((report, code))
}
