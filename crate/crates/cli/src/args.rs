use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

/// Experiment runner for the permutation and automorphism search
/// algorithms. Every random choice is drawn from a ChaCha8 generator seeded
/// by --seed, so identical invocations produce identical records.
#[derive(Debug, Parser)]
#[command(name = "qperm", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format for the run record.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the record to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Seed for every random choice in the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Eq, PartialEq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Identify a hidden homomorphism into the automorphisms of Z_p with a
    /// single quantum circuit use, and recover its kernel.
    Bv(BvArgs),
    /// Amplify and measure fixed points of a permutation power.
    FixedPoint(FixedPointArgs),
    /// Search a bank of permutation programs for one mapping the target
    /// inputs to the target outputs.
    ProgramSearch(ProgramSearchArgs),
    /// Find a group element whose inner automorphism carries --g2 to --g1.
    Conjugacy(ConjugacyArgs),
    /// Tabulate search success probabilities over a parameter range as CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, clap::Args)]
pub struct BvArgs {
    /// Prime modulus.
    #[arg(long)]
    pub p: u64,

    /// Number of program wires (domain arity).
    #[arg(long)]
    pub m: usize,

    /// Comma-separated automorphism multipliers; drawn from the seed when
    /// omitted.
    #[arg(long, value_delimiter = ',')]
    pub multipliers: Option<Vec<u64>>,

    /// Generator of the multiplicative group to use; the smallest one when
    /// omitted.
    #[arg(long)]
    pub j0: Option<u64>,
}

#[derive(Debug, clap::Args)]
pub struct FixedPointArgs {
    /// Number of elements the permutation acts on.
    #[arg(long)]
    pub n: usize,

    /// Permutation source: a file holding one line of N space-separated
    /// images, or `random:<seed>`.
    #[arg(long)]
    pub perm: String,

    /// Search the fixed points of this power of the permutation.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub power: u64,

    /// Claimed number of fixed points; counted classically when omitted.
    #[arg(long)]
    pub t: Option<usize>,

    /// Write iteration,success_probability rows to this CSV file.
    #[arg(long)]
    pub trace: Option<PathBuf>,

    /// Dump the pre-measurement state to this CSV file.
    #[arg(long)]
    pub dump_state: Option<PathBuf>,

    /// Smallest amplitude magnitude included in the state dump.
    #[arg(long, default_value_t = 0.0)]
    pub dump_threshold: f64,
}

#[derive(Debug, clap::Args)]
pub struct ProgramSearchArgs {
    /// Number of programs in the bank.
    #[arg(long)]
    pub m: usize,

    /// Number of elements each program acts on.
    #[arg(long)]
    pub n: usize,

    /// Bank file with one permutation image row per line; when omitted a
    /// random bank with exactly one matching program is drawn from the seed.
    #[arg(long)]
    pub bank: Option<PathBuf>,

    /// Constraints the program must satisfy, as x:y pairs separated by
    /// commas; two pairs run the doubled-register tuple search.
    #[arg(long, default_value = "0:1")]
    pub target: String,

    /// Dump the pre-measurement state to this CSV file.
    #[arg(long)]
    pub dump_state: Option<PathBuf>,

    /// Smallest amplitude magnitude included in the state dump.
    #[arg(long, default_value_t = 0.0)]
    pub dump_threshold: f64,
}

#[derive(Debug, clap::Args)]
pub struct ConjugacyArgs {
    /// Group source: a Cayley-table file (first line the order, then one row
    /// per element) or `builtin:Z<n>`, `builtin:S<n>` (n ≤ 5), `builtin:D<n>`.
    #[arg(long)]
    pub group: String,

    /// Index of the element to reach.
    #[arg(long)]
    pub g1: usize,

    /// Index of the element to conjugate.
    #[arg(long)]
    pub g2: usize,
}

#[derive(Debug, clap::Args)]
pub struct SweepArgs {
    /// Swept parameter: bank sizes or iteration counts.
    #[arg(long, value_enum)]
    pub over: SweepOver,

    /// Comma-separated parameter values; an empty string produces only the
    /// header row.
    #[arg(long, default_value = "")]
    pub values: String,

    /// Bank size for iteration sweeps.
    #[arg(long, default_value_t = 16)]
    pub m: usize,

    /// Number of elements the generated bank programs act on.
    #[arg(long, default_value_t = 8)]
    pub n: usize,
}

#[derive(Clone, Copy, Debug, Eq, PartialEq, ValueEnum)]
pub enum SweepOver {
    /// One row per bank size, searched at its own optimal iteration count.
    M,
    /// One row per iteration count at the fixed bank size --m.
    Iterations,
}
