//! `cmacc` command-line front end.
//!
//! Every command reads a JSON channel spec, runs one computation from
//! `cmacc_isi` and renders the result as JSON or CSV. Output is a pure
//! function of the input bytes and the seed.

pub mod commands;
pub mod config;
pub mod format;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::run;

#[derive(Debug, Parser)]
#[command(name = "cmacc", version, about = "Rate regions of the compound MAC with common message and ISI")]
pub struct Cli {
    /// Channel spec (JSON).
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Block length (default 64, or the allocation file's length).
    #[arg(long, global = true)]
    pub n: Option<usize>,

    /// Trapezoid nodes for the integral rate terms.
    #[arg(long = "quadrature-points", global = true, default_value_t = 4096)]
    pub quadrature_points: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the eight rate terms for one allocation.
    Eval {
        /// Allocation file (JSON) or `flat`.
        #[arg(long, default_value = "flat")]
        alloc: String,
        /// Also evaluate the dense log-determinant terms and report deltas.
        #[arg(long)]
        oracle: bool,
    },
    /// Trace boundary points for a grid of weight vectors (CSV).
    Region {
        /// `mu0,mu1,mu2` triples separated by `;`, or a JSON file of triples.
        #[arg(long, default_value = "1,0,0;0,1,0;0,0,1")]
        weights: String,
        #[command(flatten)]
        optimizer: OptimizerArgs,
    },
    /// Pointwise strong-interference check.
    CheckSi {
        /// Allocation used for the specialized bounds when the check holds.
        #[arg(long, default_value = "flat")]
        alloc: String,
    },
    /// Discrete-versus-integral rate terms over several block lengths (CSV).
    Converge {
        #[arg(long, value_delimiter = ',', default_value = "64,128,256,512,1024,2048")]
        ns: Vec<usize>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct OptimizerArgs {
    #[arg(long, default_value_t = 16)]
    pub multistarts: usize,
    #[arg(long, default_value_t = 2000)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub rel_tolerance: f64,
    #[arg(long, default_value_t = 0.1)]
    pub step_init: f64,
    /// Use the coarse exhaustive grid instead of gradient search.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, default_value_t = 8)]
    pub coarse_grid: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Unreadable or malformed input.
    Parse,
    /// Input parsed but violates the model.
    Validation,
    /// A computation failed on valid input.
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Parse,
            message: message.into(),
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Validation,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Parse => 2,
            ErrorKind::Validation => 3,
            ErrorKind::Numeric => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<cmacc_isi::Error> for CliError {
    fn from(e: cmacc_isi::Error) -> Self {
        use cmacc_isi::Error as E;
        let kind = match e {
            E::InfiniteRate { .. } | E::ZeroChannel => ErrorKind::Numeric,
            _ => ErrorKind::Validation,
        };
        Self {
            kind,
            message: e.to_string(),
        }
    }
}
