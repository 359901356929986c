//! The report every command produces, and its three renderings.
//!
//! JSON is the stable machine interface (`schema_version` 1). Interval
//! endpoints are written as directed decimal strings: the lower endpoint
//! rounded down and the upper rounded up, so the printed interval still
//! encloses the computed one.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub results: Vec<ResultRow>,
    pub violations: Vec<Entry>,
    pub undecided: Vec<Entry>,
    pub stats: Stats,
    pub wall_ms: u64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq, Default)]
pub struct RunConfig {
    pub command: String,
    pub sequence: Option<String>,
    pub from: Option<u64>,
    pub to: Option<u64>,
    pub horizon: Option<u64>,
    pub indices: Option<Vec<u64>>,
    pub direction: Option<String>,
    pub prime_horizon: Option<u64>,
    pub table_bits: Option<u32>,
    pub max_bits: u32,
    pub exact_budget_bits: u64,
    pub format: String,
    pub out: Option<String>,
    pub jobs: u32,
}

/// A violation or undecided item: a step index for scans, a check name for
/// the suite.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(untagged)]
pub enum Entry {
    Index(u64),
    Check(String),
}

#[derive(Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Stats {
    pub exact: u64,
    pub interval: u64,
    pub max_bits: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResultRow {
    Scan {
        sequence: String,
        from: u64,
        to: u64,
        last_step: u64,
        direction: String,
        certified: bool,
        min_valid_start: Option<u64>,
    },
    MinStart {
        sequence: String,
        horizon: u64,
        direction: String,
        n: Option<u64>,
        tail_certified: bool,
        note: String,
    },
    Check {
        name: String,
        status: String,
        in_hypothesis: bool,
        witness: Option<String>,
        margin_lo: Option<String>,
        margin_hi: Option<String>,
        method: String,
        work: u32,
        detail: Vec<(String, String)>,
    },
    Table {
        n: u64,
        ln_r_lo: String,
        ln_r_hi: String,
        method: String,
    },
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.results {
            render_text_row(&mut out, row);
        }
        let list = |items: &[Entry]| {
            if items.is_empty() {
                "none".to_string()
            } else {
                items.iter().map(entry_text).collect::<Vec<_>>().join(", ")
            }
        };
        if self.command != "table" {
            let _ = writeln!(out, "violations: {}", list(&self.violations));
            let _ = writeln!(out, "undecided: {}", list(&self.undecided));
        }
        let _ = writeln!(
            out,
            "verdicts: {} interval, {} exact; max precision {} bits",
            self.stats.interval, self.stats.exact, self.stats.max_bits
        );
        let _ = writeln!(out, "wall time: {} ms", self.wall_ms);
        out
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let join = |v: &[Entry]| v.iter().map(entry_text).collect::<Vec<_>>().join(";");
        let opt = |v: &Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut header_done = false;
        let mut header = |w: &mut csv::Writer<Vec<u8>>, cols: &[&str]| {
            if !header_done {
                w.write_record(cols).expect("csv to memory");
                header_done = true;
            }
        };
        for row in &self.results {
            let rec: Vec<String> = match row {
                ResultRow::Scan {
                    sequence,
                    from,
                    to,
                    direction,
                    certified,
                    min_valid_start,
                    ..
                } => {
                    header(
                        &mut w,
                        &[
                            "sequence",
                            "from",
                            "to",
                            "direction",
                            "certified",
                            "min_valid_start",
                            "violations",
                            "undecided",
                            "exact",
                            "interval",
                            "max_bits",
                        ],
                    );
                    vec![
                        sequence.clone(),
                        from.to_string(),
                        to.to_string(),
                        direction.clone(),
                        certified.to_string(),
                        opt(min_valid_start),
                        join(&self.violations),
                        join(&self.undecided),
                        self.stats.exact.to_string(),
                        self.stats.interval.to_string(),
                        self.stats.max_bits.to_string(),
                    ]
                }
                ResultRow::MinStart {
                    sequence,
                    horizon,
                    direction,
                    n,
                    tail_certified,
                    ..
                } => {
                    header(
                        &mut w,
                        &[
                            "sequence",
                            "horizon",
                            "direction",
                            "n",
                            "tail_certified",
                            "violations",
                        ],
                    );
                    vec![
                        sequence.clone(),
                        horizon.to_string(),
                        direction.clone(),
                        opt(n),
                        tail_certified.to_string(),
                        join(&self.violations),
                    ]
                }
                ResultRow::Check {
                    name,
                    status,
                    in_hypothesis,
                    witness,
                    margin_lo,
                    margin_hi,
                    method,
                    work,
                    ..
                } => {
                    header(
                        &mut w,
                        &[
                            "name",
                            "status",
                            "in_hypothesis",
                            "witness",
                            "margin_lo",
                            "margin_hi",
                            "method",
                            "work",
                        ],
                    );
                    vec![
                        name.clone(),
                        status.clone(),
                        in_hypothesis.to_string(),
                        witness.clone().unwrap_or_default(),
                        margin_lo.clone().unwrap_or_default(),
                        margin_hi.clone().unwrap_or_default(),
                        method.clone(),
                        work.to_string(),
                    ]
                }
                ResultRow::Table {
                    n,
                    ln_r_lo,
                    ln_r_hi,
                    method,
                } => {
                    header(&mut w, &["n", "ln_r_lo", "ln_r_hi", "method"]);
                    vec![
                        n.to_string(),
                        ln_r_lo.clone(),
                        ln_r_hi.clone(),
                        method.clone(),
                    ]
                }
            };
            w.write_record(&rec).expect("csv to memory");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("csv is utf-8")
    }
}

fn entry_text(e: &Entry) -> String {
    match e {
        Entry::Index(n) => n.to_string(),
        Entry::Check(s) => s.clone(),
    }
}

fn render_text_row(out: &mut String, row: &ResultRow) {
    match row {
        ResultRow::Scan {
            sequence,
            from,
            to,
            last_step,
            direction,
            certified,
            min_valid_start,
        } => {
            let _ = writeln!(out, "check {sequence}: steps n = {from}..={last_step} (terms up to a_{to}), claimed {direction}");
            let _ = writeln!(out, "certified: {}", if *certified { "yes" } else { "no" });
            let start = min_valid_start.map_or("none in range".to_string(), |n| n.to_string());
            let _ = writeln!(out, "min_valid_start: {start}");
        }
        ResultRow::MinStart {
            sequence,
            horizon,
            direction,
            n,
            tail_certified,
            note,
        } => {
            let _ = writeln!(
                out,
                "find-start {sequence}: claimed {direction}, horizon {horizon}"
            );
            match n {
                Some(n) => {
                    let _ = writeln!(
                        out,
                        "N = {n}{}",
                        if *tail_certified {
                            ""
                        } else {
                            " (tail has undecided steps)"
                        }
                    );
                }
                None => {
                    let _ = writeln!(out, "N: none (violations reach the horizon)");
                }
            }
            let _ = writeln!(out, "{note}");
        }
        ResultRow::Check {
            name,
            status,
            in_hypothesis,
            witness,
            margin_lo,
            margin_hi,
            method,
            ..
        } => {
            let margin = match (margin_lo, margin_hi) {
                (Some(lo), Some(hi)) => format!(" margin [{lo}, {hi}]"),
                _ => String::new(),
            };
            let witness = witness
                .as_ref()
                .map_or(String::new(), |w| format!(" ({w})"));
            let scope = if *in_hypothesis {
                ""
            } else {
                " [informational]"
            };
            let _ = writeln!(
                out,
                "{:<10} {name}{witness}{scope}{margin} {method}",
                status.to_uppercase()
            );
        }
        ResultRow::Table {
            n,
            ln_r_lo,
            ln_r_hi,
            method,
        } => {
            let _ = writeln!(out, "n = {n}: ln r_n in [{ln_r_lo}, {ln_r_hi}] {method}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            command: "check".into(),
            config: RunConfig {
                command: "check".into(),
                sequence: Some("fibonacci".into()),
                from: Some(1),
                to: Some(10),
                direction: Some("decreasing".into()),
                max_bits: 65536,
                exact_budget_bits: 1 << 31,
                format: "json".into(),
                jobs: 4,
                ..RunConfig::default()
            },
            results: vec![ResultRow::Scan {
                sequence: "fibonacci".into(),
                from: 1,
                to: 10,
                last_step: 8,
                direction: "decreasing".into(),
                certified: false,
                min_valid_start: Some(4),
            }],
            violations: vec![Entry::Index(1), Entry::Index(3)],
            undecided: vec![Entry::Check("r0[2..=300]".into())],
            stats: Stats {
                exact: 0,
                interval: 8,
                max_bits: 128,
            },
            wall_ms: 3,
        }
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn csv_has_header_and_lf() {
        let csv = sample().to_csv();
        assert!(csv.starts_with("sequence,from,to,"));
        assert!(!csv.contains('\r'));
        assert!(csv.contains("1;3"));
    }
}
