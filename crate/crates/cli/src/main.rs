//! `matrix-tails`: evaluate spectral tail bounds, simulate matrix
//! ensembles, and run the verification suites from the command line.
//!
//! Exit codes: 0 success, 1 verification failure (a lemma, dominance,
//! moment, or bracket check did not hold), 2 usage or IO error.

use std::process::ExitCode;

use clap::Parser;

mod args;
mod error;
mod report;
mod run;
mod theorems;

/// `MATRIX_TAILS_THREADS` caps the worker pool; 0 or unset means automatic.
fn init_threads() -> Result<(), String> {
    match std::env::var("MATRIX_TAILS_THREADS") {
        Ok(s) => {
            let n: usize = s.trim().parse().map_err(|_| {
                format!("MATRIX_TAILS_THREADS must be a nonnegative integer, got {s:?}")
            })?;
            if n > 0 {
                // A later duplicate initialization (e.g. in tests) is harmless.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            Ok(())
        }
        Err(std::env::VarError::NotPresent) => Ok(()),
        Err(e) => Err(format!("MATRIX_TAILS_THREADS: {e}")),
    }
}

fn main() -> ExitCode {
    if let Err(msg) = init_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let cli = args::Cli::parse();
    match run::run(cli) {
        Ok(run::Outcome::Success) => ExitCode::SUCCESS,
        Ok(run::Outcome::VerificationFailure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
