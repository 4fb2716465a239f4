//! `genericlab`: batch front end for the finite-scale experiments.
//!
//! Exit codes: 0 on success, 1 when an input violates a precondition of the
//! requested construction, 2 on I/O or parse errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "genericlab", version, about = "Exact experiments on generic points of shift spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Working horizon: points are compared on their first `horizon` symbols.
    #[arg(long, default_value_t = 12)]
    horizon: usize,
    /// Write the main table here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact Prohorov distance between two measure files.
    Prohorov {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Print a JSON report with the optimal coupling instead of one line.
        #[arg(long)]
        json: bool,
    },
    /// Compare the flow computation against the subset oracle on random pairs.
    CheckProhorov {
        #[arg(long, default_value_t = 500)]
        pairs: usize,
        #[arg(long, default_value_t = 8)]
        support: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Distances from Emp(x, n) to each target at the checkpoints.
    EmpSeries {
        point: PathBuf,
        #[arg(long)]
        targets: PathBuf,
        /// Comma-separated increasing checkpoints.
        #[arg(long, value_delimiter = ',', required = true)]
        checkpoints: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Verify that a point traces a specification.
    Trace {
        spec: PathBuf,
        /// Point to verify; defaults to the full-shift concatenation.
        #[arg(long)]
        point: Option<PathBuf>,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value = "0")]
        d1: String,
        #[arg(long, default_value = "0")]
        d2: String,
    },
    /// Inductive generic-point construction for a list of measures.
    GenericBuild {
        measures: PathBuf,
        #[arg(long, default_value = "1/8")]
        eps: String,
        #[arg(long, default_value_t = 3)]
        stages: usize,
        #[arg(long, default_value_t = 1 << 23)]
        cap: usize,
        /// Also write the built prefix (one line of comma-separated symbols).
        #[arg(long)]
        prefix_out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Generic point for ψ(j)ν + (1 − ψ(j))μ_j.
    PsiReduce {
        #[command(flatten)]
        psi: PsiArgs,
        /// Target list μ_1, μ_2, … (last one repeats).
        #[arg(long)]
        targets: PathBuf,
    },
    /// Alternating ψ reduction with Birkhoff averages of an indicator.
    PhiReduce {
        #[command(flatten)]
        psi: PsiArgs,
        #[arg(long)]
        mubar: PathBuf,
        /// φ is the indicator of x_0 = symbol.
        #[arg(long, default_value_t = 1)]
        symbol: u32,
    },
    /// Point coding a finite tree on ω.
    TreePoint {
        tree: PathBuf,
        #[arg(long, default_value_t = 4)]
        stages: usize,
        #[arg(long, default_value_t = 1 << 24)]
        cap: usize,
        #[arg(long)]
        prefix_out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// The Oxtoby–Toeplitz machine.
    Oxtoby {
        #[command(subcommand)]
        verb: OxtobyVerb,
    },
}

#[derive(Debug, Args)]
struct PsiArgs {
    /// Comma-separated values β(0), β(1), …
    #[arg(long, value_delimiter = ',', required = true)]
    beta: Vec<u64>,
    /// Breakpoints n_0 < n_1 < …; defaults to 1, 2, 4, 7, 11, …
    #[arg(long, value_delimiter = ',')]
    breakpoints: Option<Vec<usize>>,
    #[arg(long, default_value_t = 3)]
    stages: usize,
    #[arg(long, default_value = "1/8")]
    eps: String,
    #[arg(long)]
    nu: PathBuf,
    #[arg(long, default_value_t = 1 << 23)]
    cap: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct MachineArgs {
    /// Comma-separated s_1, s_2, …; later entries default to 2^{j+1}.
    #[arg(long, value_delimiter = ',')]
    s: Vec<u64>,
    #[arg(long, default_value_t = 4)]
    depth: usize,
}

#[derive(Debug, Subcommand)]
enum OxtobyVerb {
    /// Print W_depth; with --all, every level's W, 𝟘 and 𝟙.
    Words {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(long)]
        all: bool,
        /// Dump the machine as JSON instead.
        #[arg(long)]
        json: bool,
    },
    /// Lengths, frequencies and the product identity per level.
    Stats {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Factors of length `length` of the four level-`level` concatenations.
    Language {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        length: Option<usize>,
        /// Also print the words.
        #[arg(long)]
        list: bool,
    },
    /// f(β) with its frequency diagnostics.
    Reduce {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        beta: Vec<u64>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("genericlab: {e}");
            ExitCode::from(e.code())
        }
    }
}
