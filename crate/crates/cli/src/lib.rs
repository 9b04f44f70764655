//! Command-line front end for `lctkit`.
//!
//! Exit codes: `0` success, `2` domain error, `3` infinite slice,
//! `4` a verification report failed, `64` usage error, `1` I/O trouble.

pub mod cache;
mod commands;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lctkit::{
    AdjunctionError, KernelError, LctError, MonomialDivisor, Rational, ResolutionTable, SolverError,
};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_INFINITE: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Adjunction(#[from] AdjunctionError),
    #[error(transparent)]
    Lct(#[from] LctError),
    #[error("{0}")]
    Input(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Kernel(KernelError::InfiniteSlice { .. })
            | CliError::Solver(SolverError::Kernel(KernelError::InfiniteSlice { .. })) => {
                EXIT_INFINITE
            }
            CliError::Io(_) => EXIT_IO,
            _ => EXIT_DOMAIN,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lctkit", version, about = "Exact threshold-set arithmetic")]
pub struct Cli {
    /// Print canonical JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Cache directory (overrides $LCTKIT_CACHE).
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The adjunction set D(I) = {(m − 1 + f)/m : f ∈ I₊}.
    Dset(DsetArgs),
    /// Finite sums of elements of I that stay at most one.
    Iplus(IplusArgs),
    /// Compare coefficient sequences in the partial order.
    SeqOrder(SeqOrderArgs),
    /// Membership, slices and limits of N₁(I).
    N1(N1Args),
    /// Log canonical thresholds.
    #[command(subcommand)]
    Lct(LctCommand),
    /// Plane-curve thresholds and their accumulation points.
    #[command(subcommand)]
    Acc(AccCommand),
    /// Inspect or clear the result cache.
    #[command(subcommand)]
    Cache(CacheCommand),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatList(pub Vec<Rational>);

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

fn parse_list(s: &str) -> Result<RatList, String> {
    if s.trim().is_empty() {
        return Ok(RatList(Vec::new()));
    }
    s.split(',')
        .map(parse_rational)
        .collect::<Result<_, _>>()
        .map(RatList)
}

fn parse_divisor(s: &str) -> Result<MonomialDivisor, String> {
    s.parse::<MonomialDivisor>().map_err(|e| e.to_string())
}

fn parse_table(s: &str) -> Result<ResolutionTable, String> {
    s.parse::<ResolutionTable>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("mode").args(["member", "up_to", "above", "verify"]))]
pub struct DsetArgs {
    /// Elements of I, e.g. "1/2,1/3".
    #[arg(long, value_parser = parse_list)]
    pub set: RatList,
    /// Leave the empty sum out of I₊.
    #[arg(long)]
    pub literal: bool,
    /// Decide membership of one value.
    #[arg(long, value_name = "X", value_parser = parse_rational)]
    pub member: Option<Rational>,
    /// List the elements with m ≤ M.
    #[arg(long, value_name = "M")]
    pub up_to: Option<u64>,
    /// List every element above T (refused when infinite).
    #[arg(long, value_name = "T", value_parser = parse_rational)]
    pub above: Option<Rational>,
    /// Check the closure identities D(I)₊ = D(I) = D(D(I)) on samples.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = 200, requires = "verify")]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct IplusArgs {
    /// Elements of I, e.g. "1/2,1/3"
    #[arg(long, value_parser = parse_list)]
    pub set: RatList,
    /// Leave the empty sum out
    #[arg(long)]
    pub literal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    C,
    CPlus,
}

#[derive(Debug, Args)]
pub struct SeqOrderArgs {
    #[arg(long, value_enum, default_value = "c")]
    pub variant: VariantArg,
    /// Two or more sequences, each like "1/2,2/3".
    #[arg(required = true, num_args = 2.., value_parser = parse_list)]
    pub sequences: Vec<RatList>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("mode").required(true)
    .args(["member", "enumerate", "sup", "accumulation", "leading"]))]
pub struct N1Args {
    /// Find a witness for A.
    #[arg(long, value_name = "A", value_parser = parse_rational)]
    pub member: Option<Rational>,
    /// The slice above --above.
    #[arg(long = "enum", requires = "above")]
    pub enumerate: bool,
    /// The largest element below one.
    #[arg(long)]
    pub sup: bool,
    /// Accumulation points above --above.
    #[arg(long, requires = "above")]
    pub accumulation: bool,
    /// The slice above --above with an optional leading element of I and
    /// every target in --target.
    #[arg(long, requires = "above")]
    pub leading: bool,
    #[arg(long, value_name = "T", value_parser = parse_rational)]
    pub above: Option<Rational>,
    #[arg(long, default_value = "1", value_parser = parse_list)]
    pub set: RatList,
    /// Right-hand side; a list is accepted with --leading.
    #[arg(long, value_name = "K", default_value = "2", value_parser = parse_list)]
    pub target: RatList,
    /// Refuse queries that could need more terms than this.
    #[arg(long, value_name = "N")]
    pub max_terms: Option<u64>,
    /// Forbid terms without the unknown.
    #[arg(long)]
    pub no_k_zero: bool,
    /// List the slice elementwise (refused when infinite).
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Subcommand)]
pub enum LctCommand {
    /// y^a + x^b.
    Curve {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
    /// Non-degenerate divisor with the given exponent vectors.
    Newton {
        #[arg(long, value_parser = parse_divisor)]
        exponents: MonomialDivisor,
    },
    /// Minimum of (log discrepancy)/(multiplicity) over "a:b,a:b".
    Resolution {
        #[arg(long, value_parser = parse_table)]
        rows: ResolutionTable,
    },
    /// Monomial-valuation candidate (Σw)/ord_w.
    Weighted {
        #[arg(long, value_parser = parse_list)]
        weights: RatList,
        #[arg(long, value_parser = parse_divisor)]
        exponents: MonomialDivisor,
    },
    /// 1/mult ≤ lct ≤ N/mult.
    Bounds {
        #[arg(long, value_parser = parse_divisor)]
        exponents: MonomialDivisor,
    },
}

#[derive(Debug, Subcommand)]
pub enum AccCommand {
    /// {1/a + 1/b : 2 ≤ a ≤ b} above T.
    Igusa {
        #[arg(long, value_name = "T", value_parser = parse_rational)]
        above: Rational,
    },
    /// {1/m} above T.
    T1 {
        #[arg(long, value_name = "T", value_parser = parse_rational)]
        above: Rational,
    },
    /// Accumulation points of the plane-curve slice against {1/m}.
    Ladder {
        #[arg(long, value_name = "T", value_parser = parse_rational)]
        above: Rational,
    },
    /// Plane-curve slice against the N₁({1}) slice.
    CompareN1 {
        #[arg(long, value_name = "T", value_parser = parse_rational)]
        above: Rational,
    },
}

#[derive(Debug, Subcommand)]
pub enum CacheCommand {
    /// Print the cache directory.
    Dir,
    /// List cache entries.
    List,
    /// Delete every cache entry.
    Clear,
}

/// What a command produced.
pub struct Output {
    pub json: String,
    pub human: String,
    /// A verification report that did not pass.
    pub failed: bool,
}

/// Parses `argv` (program name first) and runs it.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match commands::execute(&cli, err) {
        Ok(o) => {
            let text = if cli.json { &o.json } else { &o.human };
            let _ = writeln!(out, "{}", text.trim_end());
            if o.failed {
                let _ = writeln!(err, "verification failed");
                EXIT_VERIFY
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
