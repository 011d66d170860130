//! `qfsplit`: F-purity, quasi-F-split height, quasi-F^e-splitting and
//! quasi-F-regularity of hypersurfaces from the command line.
//!
//! Exit codes: 0 for a definitive or certified verdict, 2 for an
//! inconclusive one (or a failing self-test), 1 for usage and input errors.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "qfsplit", version, about = "Fedder-type criteria for hypersurfaces over Z/p^W")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Ring {
    /// The prime p.
    #[arg(long)]
    p: u64,
    /// Comma-separated variable names, e.g. x,y,z.
    #[arg(long, value_delimiter = ',', required = true)]
    vars: Vec<String>,
    /// Working precision W (coefficients mod p^W); defaults to what the command needs.
    #[arg(long)]
    precision: Option<u32>,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// The hypersurface f.
    f: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fedder's criterion for F-purity.
    Fpure {
        #[command(flatten)]
        ring: Ring,
    },
    /// Quasi-F-split height via the e = 1 ideal iteration.
    Height {
        #[command(flatten)]
        ring: Ring,
        /// Largest level to try.
        #[arg(long, default_value_t = 5)]
        n: u32,
        #[arg(long = "deg-bound")]
        deg_bound: Option<u32>,
    },
    /// n-quasi-F^e-splitting: witness search, then the necessary conditions.
    Qfe {
        #[command(flatten)]
        ring: Ring,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        e: u32,
        /// Replay this multiplier instead of searching.
        #[arg(long)]
        witness: Option<String>,
        #[arg(long = "deg-bound")]
        deg_bound: Option<u32>,
        #[arg(long = "search-bound")]
        search_bound: Option<u32>,
    },
    /// n-quasi-F-regularity via twisted witnesses.
    Qfr {
        #[command(flatten)]
        ring: Ring,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, conflicts_with = "e_range")]
        e: Option<u32>,
        /// Inclusive range A..B of Frobenius exponents to try.
        #[arg(long = "e-range")]
        e_range: Option<String>,
        /// Multiplier c, a multiple of t^4 for a test element t.
        #[arg(long)]
        c: String,
        #[arg(long)]
        witness: Option<String>,
        #[arg(long = "search-bound")]
        search_bound: Option<u32>,
        /// Skip validating c against the test-element closure.
        #[arg(long = "assume-test-element")]
        assume_test_element: bool,
        /// Rounds of the test-element closure used to validate c.
        #[arg(long = "tau-steps", default_value_t = 4)]
        tau_steps: u32,
    },
    /// Elements of the test ideal reachable from the Jacobian ideal.
    Tau {
        #[command(flatten)]
        ring: Ring,
        /// Check this c against the closure.
        #[arg(long)]
        c: Option<String>,
        #[arg(long = "max-steps", default_value_t = 4)]
        max_steps: u32,
        #[arg(long = "max-elements", default_value_t = 4096)]
        max_elements: usize,
    },
    /// Randomized checks of the Witt-vector ghost identities.
    WittSelftest {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 500)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        threads: Option<usize>,
    },
}

impl Command {
    fn threads(&self) -> Option<usize> {
        match self {
            Command::Fpure { ring }
            | Command::Height { ring, .. }
            | Command::Qfe { ring, .. }
            | Command::Qfr { ring, .. }
            | Command::Tau { ring, .. } => ring.threads,
            Command::WittSelftest { threads, .. } => *threads,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let threads = cli.command.threads();
    match qfsplit::par::with_threads(threads.unwrap_or(0), || commands::run(&cli.command)) {
        Ok(outcome) => {
            print!("{}", outcome.output);
            ExitCode::from(outcome.code)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
