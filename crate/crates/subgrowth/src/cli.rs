use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

/// Exact subgroup counts of Fuchsian groups, symmetric-group characters and
/// arithmetic covolume censuses.
///
/// Every global option can also be set from the environment; an explicit flag
/// wins over the variable, which wins over the default.
#[derive(Debug, Parser)]
#[command(name = "subgrowth", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, env = "SUBGROWTH_FORMAT", value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Worker threads; 0 uses every available core.
    #[arg(long, global = true, env = "SUBGROWTH_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Width of the enclosures used for pi, e and logarithms (at most 1e-15).
    #[arg(long, global = true, env = "SUBGROWTH_PRECISION", default_value = "1e-30")]
    pub precision: String,
    /// Character cache file; read before and written after computing.
    #[arg(long, global = true, env = "SUBGROWTH_CACHE")]
    pub cache: Option<PathBuf>,
    /// Number-field table (CSV); the built-in Q and Q(sqrt5) rows when absent.
    #[arg(long, global = true, env = "SUBGROWTH_TABLE")]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// h_n = |Hom(G, S_n)|, transitive counts t_n, and subgroup counts a_n, s_n for n <= N.
    Count {
        /// Signature: "(2,3,7)", "(2,3,inf)", "g=2" or "o;g;m1,..,md;s;t" (n for non-oriented).
        signature: String,
        #[arg(long = "n", value_name = "N")]
        n: usize,
    },
    /// One irreducible character value chi_lambda(class).
    Character {
        /// Partition labelling the character, e.g. "(3,1)" or "3,1".
        lambda: String,
        /// Cycle type of the class, e.g. "(2,2)" or "2^2".
        class: String,
    },
    /// Arithmetic lattices whose covolume may be at most the budget.
    Census {
        /// Covolume budget: "q*pi", "pi/3", a fraction or a decimal.
        #[arg(long, allow_hyphen_values = true)]
        budget: String,
        /// Value of the unit/ideal index bracket, or "range" for its certified range.
        #[arg(long, default_value = "1")]
        bracket: String,
        /// Largest S-set considered.
        #[arg(long)]
        max_s: Option<usize>,
    },
    /// Run a bound suite; exits with status 3 if an exact check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long = "n", value_name = "N_MAX")]
        n: usize,
        /// Signature for the uniform and growth suites.
        #[arg(long, default_value = "(2,3,inf)")]
        signature: String,
        /// Exponent for the degree-sum suite.
        #[arg(long, default_value = "1")]
        s: String,
    },
    /// Torsion-free subgroups that are closed surface groups of the given genus.
    Surfaces {
        signature: String,
        #[arg(long)]
        genus: u64,
        /// Run even when the index is beyond the usual time budget.
        #[arg(long)]
        force: bool,
    },
    /// Field-table management.
    Table {
        #[command(subcommand)]
        action: TableAction,
    },
    /// Character-cache management.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Fomin-Lulov bound, exact.
    Fl,
    /// Class-size bound, certified.
    Classsize,
    /// Empirical constant in s_n <= (cn)^{mu n}.
    Uniform,
    /// Growth exponent and the (n!)^mu indicator.
    Growth,
    /// Degree power sums.
    Degreesum,
    /// Empirical constants in the character value bounds.
    Charvalue,
    /// Empirical constant in the class-size times character bound.
    Classchar,
    /// Sum of squared degrees and of class sizes equal n!.
    Identities,
}

#[derive(Debug, Subcommand)]
pub enum TableAction {
    /// Print the built-in rows in table-file format.
    Export {
        /// Include rational primes up to this bound.
        #[arg(long, default_value_t = 100)]
        primes_below: u64,
    },
    /// Parse a table (--table) and list its rows.
    Check,
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    /// Compute every column of S_k for k <= N and write them to --cache.
    Warm {
        #[arg(long = "n", value_name = "N")]
        n: usize,
    },
    /// Summarize the columns stored in --cache.
    Info,
}
