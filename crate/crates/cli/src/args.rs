use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "ratiocert",
    version,
    about = "Certify monotonicity of root ratios a_{n+1}^(1/(n+1)) / a_n^(1/n)",
    long_about = None
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Worker threads for range scans (default: available cores).
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,

    /// Precision cap in bits for interval evaluation (>= 128). Overrides
    /// RATIOCERT_MAX_BITS.
    #[arg(long = "max-bits", global = true, value_name = "BITS")]
    pub max_bits: Option<u32>,

    /// Largest exact cross-power comparison to attempt, in bits.
    #[arg(long = "exact-budget", global = true, value_name = "BITS")]
    pub exact_budget: Option<u64>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Certify the direction of r_n over a range of n.
    Check {
        #[command(flatten)]
        seq: SeqArgs,
        /// First step n (the scan reads a_from onwards).
        #[arg(long)]
        from: u64,
        /// Last term index read; steps run up to to - 2.
        #[arg(long)]
        to: u64,
        #[arg(long, value_enum, default_value_t = DirectionArg::Decreasing)]
        direction: DirectionArg,
    },
    /// Smallest start index with no violation up to a horizon.
    FindStart {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        horizon: u64,
        #[arg(long, value_enum, default_value_t = DirectionArg::Decreasing)]
        direction: DirectionArg,
    },
    /// Run every finite check with its stated region.
    PaperSuite {
        /// Upper index for the prime inequalities.
        #[arg(long = "prime-horizon", default_value_t = 100_000)]
        prime_horizon: u64,
    },
    /// Enclosures of ln r_n at chosen indices.
    Table {
        #[command(flatten)]
        seq: SeqArgs,
        /// Comma-separated indices.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["from", "to"])]
        indices: Vec<u64>,
        #[arg(long, requires = "to")]
        from: Option<u64>,
        #[arg(long, requires = "from")]
        to: Option<u64>,
        /// Precision of the reported enclosures.
        #[arg(long, default_value_t = 128)]
        bits: u32,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SeqArgs {
    /// fibonacci, lucas, derangement, harmonic, primes, squarefree-sum,
    /// product, or an inline form such as lucas(3,2) or
    /// product(fibonacci,harmonic(2)).
    #[arg(long, value_name = "NAME")]
    pub seq: String,
    /// Lucas parameter A.
    #[arg(long = "A", value_name = "A", allow_negative_numbers = true)]
    pub a: Option<i64>,
    /// Lucas parameter B.
    #[arg(long = "B", value_name = "B", allow_negative_numbers = true)]
    pub b: Option<i64>,
    /// Harmonic order m.
    #[arg(long, value_name = "M")]
    pub m: Option<u32>,
    /// Left factor of a product.
    #[arg(long, value_name = "SPEC")]
    pub left: Option<String>,
    /// Right factor of a product.
    #[arg(long, value_name = "SPEC")]
    pub right: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionArg {
    Decreasing,
    Increasing,
}

impl From<DirectionArg> for ratiocert::ratio::Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Decreasing => ratiocert::ratio::Direction::Decreasing,
            DirectionArg::Increasing => ratiocert::ratio::Direction::Increasing,
        }
    }
}
