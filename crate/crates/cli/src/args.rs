use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "cumulant", version, about = "Exact joint cumulants and checks of their combinatorial identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List partitions, cyclic partitions, nested objects or G objects.
    Enumerate(EnumerateArgs),
    /// Evaluate the joint cumulant of variables drawn from a distribution file.
    Cumulant(CumulantArgs),
    /// Check one of the seven identities exactly and print a JSON report.
    Verify(TheoremArgs),
    /// Run the sign-reversing involution checker for one identity.
    DieCheck(TheoremArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Partitions,
    Cyclic,
    Nested,
    G,
    /// Partitions finer than `--tau`.
    Finer,
    /// Nested objects whose outer partition is finer than `--tau`.
    NestedFiner,
    /// Nested objects over the grid `--shape` with indecomposable outer partition.
    NestedIndecomposable,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    /// One JSON value per line.
    #[default]
    Json,
    Count,
    Pretty,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    /// Ground set size for partitions, cyclic, nested and g.
    #[arg(long)]
    pub n: Option<u32>,
    /// Grid shape as row lengths, e.g. 2,1.
    #[arg(long)]
    pub shape: Option<String>,
    /// Partition as a JSON array of arrays, e.g. [[1,2],[3]].
    #[arg(long)]
    pub tau: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Run past the size cap after printing an estimated count.
    #[arg(long)]
    pub force: bool,
}

#[derive(Args, Debug)]
pub struct CumulantArgs {
    /// Distribution JSON file.
    #[arg(long)]
    pub dist: PathBuf,
    /// Comma-separated variable names; repeats allowed.
    #[arg(long)]
    pub vars: String,
}

#[derive(Args, Debug)]
pub struct TheoremArgs {
    /// Identity number, 1 to 7.
    #[arg(value_parser = clap::value_parser!(u8).range(1..=7))]
    pub theorem: u8,
    #[arg(long)]
    pub n: Option<u32>,
    /// Partition as a JSON array of arrays (identity 5).
    #[arg(long)]
    pub tau: Option<String>,
    /// Grid shape as row lengths (identity 6).
    #[arg(long)]
    pub shape: Option<String>,
    /// Distribution file with a conditioning column (identity 7).
    #[arg(long)]
    pub dist: Option<PathBuf>,
    /// Name of the conditioning column (identity 7).
    #[arg(long)]
    pub y: Option<String>,
    /// First of two independent distributions (identity 3).
    #[arg(long)]
    pub dist_m: Option<PathBuf>,
    /// Second of two independent distributions (identity 3).
    #[arg(long)]
    pub dist_n: Option<PathBuf>,
    /// Comma-separated variable selection (identities 3 and 7).
    #[arg(long)]
    pub vars: Option<String>,
    /// Spread per-object work over a thread pool; output is unchanged.
    #[arg(long)]
    pub parallel: bool,
    /// Run past the size cap after printing an estimated count.
    #[arg(long)]
    pub force: bool,
}
