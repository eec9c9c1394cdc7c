//! `spinecensus`: enumerate, count and inspect manifolds with a one-edged
//! ideal triangulation.
//!
//! Exit codes: 0 on success, 1 on a usage or domain error, 2 when a computed
//! result contradicts a known invariant (an internal bug).

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Parser, Debug)]
#[command(name = "spinecensus", version, about = "Census of one-edged ideal triangulations via o-graphs")]
pub struct Cli {
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write data output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Stream census records as JSON lines.
    Enumerate {
        /// A single n or an inclusive range such as 2..9.
        #[arg(long)]
        n: String,
        #[command(flatten)]
        tv: TvArgs,
        /// Skip homology, volume and Turaev-Viro values.
        #[arg(long)]
        no_invariants: bool,
        /// Append to the output file instead of truncating it.
        #[arg(long, requires = "out")]
        append: bool,
    },
    /// Exact accepted-tuple counts against the growth bounds.
    Count {
        #[arg(long)]
        n: String,
    },
    /// Invariant report for one manifold (by default the first census member).
    Invariants {
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        tv: TvArgs,
    },
    /// Chirality counts per n, or the class of one colouring.
    Chirality {
        #[arg(long)]
        n: Option<String>,
        #[command(flatten)]
        chain: ChainArgs,
    },
    /// Trace the faces of an o-graph given in the text format.
    Trace {
        /// Input file; standard input if omitted or `-`.
        input: Option<PathBuf>,
        /// Also print every face walk.
        #[arg(long)]
        faces: bool,
    },
    /// Derive the automaton and print its transition table.
    Fsa {
        /// Re-run the convention calibration first.
        #[arg(long)]
        calibrate: bool,
    },
    /// Closed-chain Monte Carlo experiment.
    Simulate {
        #[arg(long, required = true)]
        closed_chain: bool,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: u64,
        /// Falls back to SPINECENSUS_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Gluing table of the dual ideal triangulation.
    Export {
        #[command(flatten)]
        chain: ChainArgs,
    },
    /// Merge partial census files into one sorted file.
    Merge {
        #[arg(required = true)]
        parts: Vec<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ChainArgs {
    #[arg(long)]
    pub alpha: Option<u8>,
    #[arg(long)]
    pub delta: Option<u8>,
    /// Comma-separated letters, e.g. 02,12,21,02.
    #[arg(long)]
    pub word: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct TvArgs {
    /// Turaev-Viro levels r.
    #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
    pub tv_levels: Vec<u32>,
    /// `pi-over-r` or `K*pi-over-r`, meaning q0 = exp(i K pi / r).
    #[arg(long, default_value = "pi-over-r")]
    pub q0: String,
}

/// A computed result broke a known invariant.
#[derive(Debug, Error)]
#[error("internal consistency failure: {0}")]
pub struct Internal(pub String);

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Internal>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
