//! `mgl`: growth regimes of 2×2 matrix cocycles from the command line.
//!
//! Exit codes: 0 success, 1 input error, 2 hypothesis or precondition
//! failure (including a `NotMarginal` verdict), 3 budget exceeded.

mod commands;
mod record;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mgl_core::Error;

#[derive(Parser, Debug)]
#[command(name = "mgl", version, about = "Classify and measure norm growth of 2x2 matrix products")]
struct Cli {
    /// Also write a JSON run record to this path.
    #[arg(long, global = true)]
    record: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a finite matrix set as Bounded, Linear or NotMarginal.
    Classify {
        input: PathBuf,
        /// Reject floating-point entries instead of reading them as exact binary fractions.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Compute a_n / c_n curves by enumeration or the hull DP.
    Growth {
        input: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[arg(long, value_enum, default_value_t = Method::Enumerate)]
        method: Method,
        /// Norm for a_n: op2 or sum.
        #[arg(long, default_value = "op2")]
        norm: String,
        #[arg(long, value_enum, default_value_t = HullArith::Auto)]
        hull_mode: HullArith,
        /// Drop products entrywise dominated by another (nonnegative sets only).
        #[arg(long)]
        prune: bool,
        /// Enumeration budget in matrix multiplications.
        #[arg(long, default_value_t = mgl_core::growth::DEFAULT_PRODUCT_BUDGET)]
        budget: u64,
        /// CSV output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bracket the joint spectral radius and test whether it equals 1.
    JsrBounds {
        input: PathBuf,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Exact linear growth rate of a locally constant triangular cocycle.
    Ergopt {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the Chacon-subshift cocycle experiment.
    Chacon {
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Largest product length; defaults to 3^10 or what the prefix allows.
        #[arg(long)]
        max_n: Option<usize>,
        /// Random Z-window starts; 0 scans every start.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        /// Points off Z (one flipped symbol each).
        #[arg(long, default_value_t = 8)]
        off_z: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "chacon")]
        out_prefix: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Enumerate,
    HullDp,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HullArith {
    Auto,
    Exact,
    Float,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Hypothesis(_) | Error::Precondition(_) | Error::OutOfRange(_) | Error::Acyclic => 2,
            Error::Budget(_) => 3,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

fn init_threads() {
    if let Ok(v) = std::env::var("MGL_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("mgl: ignoring MGL_THREADS={v:?}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let started = std::time::Instant::now();
    let outcome = commands::run(&cli.command);
    let code = match &outcome {
        Ok(out) => out.code,
        Err(f) => {
            eprintln!("mgl: {}", f.message);
            f.code
        }
    };
    if let (Some(path), Ok(out)) = (&cli.record, &outcome) {
        let rec = record::RunRecord::new(out, started.elapsed());
        if let Err(e) = rec.write(path) {
            eprintln!("mgl: cannot write run record: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(code)
}
