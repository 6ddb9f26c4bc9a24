//! `subsum-lab`: command-line front end for the subsum-core library.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Format;

#[derive(Parser, Debug)]
#[command(name = "subsum-lab", version, about = "Sumsets, n-term subsums and setpartition certificates in finite abelian groups")]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// Where an internal-error dump goes (default: subsum-lab-dump.json).
    #[arg(long, global = true)]
    pub dump: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Group facts: order, exponent, d*, subgroups.
    Group {
        #[arg(value_enum)]
        action: GroupAction,
        /// Group literal such as `2x4`.
        spec: Option<String>,
        #[arg(short = 'g', long = "group")]
        group: Option<String>,
    },
    /// Sum of sets, or the n-fold sumset of one set.
    Sumset {
        #[arg(short = 'g', long = "group")]
        group: String,
        /// Sets written `a;b;c`.
        #[arg(required = true)]
        sets: Vec<String>,
        #[arg(short = 'n')]
        n: Option<usize>,
    },
    /// Σ_n(S), its stabilizer and the coset bookkeeping.
    Subsums {
        #[command(flatten)]
        inst: SeqArgs,
        /// Length the hole count is measured against (default |S|).
        #[arg(long)]
        ref_len: Option<usize>,
    },
    /// A setpartition certificate for the partition statement.
    Partition {
        #[command(flatten)]
        inst: PartitionArgs,
    },
    /// A certificate for the structure statement.
    Maincert {
        #[command(flatten)]
        inst: PartitionArgs,
        #[arg(long, default_value = "standard")]
        mode: String,
    },
    /// Re-check a certificate report produced by `partition` or `maincert`.
    Verify {
        /// Report file (JSON).
        file: Option<String>,
        #[arg(long)]
        cert: Option<String>,
        #[arg(short = 'g', long = "group")]
        group: Option<String>,
        #[arg(short = 's', long = "seq")]
        seq: Option<String>,
        #[arg(long)]
        sprime: Option<String>,
        #[arg(short = 'n')]
        n: Option<usize>,
        #[arg(long)]
        mode: Option<String>,
    },
    /// Build one of the extremal example families (a, b or c).
    Example {
        kind: String,
        #[arg(short = 'g', long = "group")]
        group: String,
        /// The subgroup H, as a set literal.
        #[arg(long = "subgroup")]
        subgroup: String,
        /// The subgroup K for families b and c.
        #[arg(long = "block")]
        block: Option<String>,
        /// The element g whose image generates the cyclic part.
        #[arg(long = "gen")]
        generator: Option<String>,
    },
    /// Sweep checkers over exhaustive and random instances.
    Audit {
        #[arg(long, default_value_t = 8)]
        max_order: usize,
        #[arg(long)]
        exhaustive_max_order: Option<usize>,
        #[arg(long, default_value_t = 4)]
        len_cap: usize,
        #[arg(long, default_value_t = 0)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Comma-separated checker names (default: all).
        #[arg(long)]
        checkers: Option<String>,
        #[arg(long, default_value_t = 8)]
        support_cap: usize,
        #[arg(long, default_value_t = 6)]
        mult_cap: u32,
    },
    /// Look for aperiodic sums of two-element sets without a unique expression.
    Hunt {
        #[arg(short = 'g', long = "group")]
        group: String,
        #[arg(short = 'n')]
        n: usize,
        /// Enumerate raw tuples instead of canonical forms.
        #[arg(long)]
        no_canon: bool,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
    /// Davenport constant by exhaustive search.
    Davenport {
        #[arg(short = 'g', long = "group")]
        group: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GroupAction {
    Info,
    Subgroups,
}

#[derive(Args, Debug)]
pub struct SeqArgs {
    #[arg(short = 'g', long = "group")]
    pub group: String,
    #[arg(short = 's', long = "seq")]
    pub seq: String,
    #[arg(short = 'n')]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct PartitionArgs {
    #[arg(short = 'g', long = "group")]
    pub group: String,
    #[arg(short = 's', long = "seq")]
    pub seq: String,
    /// Subsequence S' (default: S with every multiplicity capped at n).
    #[arg(long)]
    pub sprime: Option<String>,
    #[arg(short = 'n')]
    pub n: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(commands::run(&cli))
}
