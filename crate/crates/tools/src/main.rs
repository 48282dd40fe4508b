use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ttp_tools::commands::{
    cmd_check, cmd_paths, cmd_search, cmd_selftest, cmd_theorem, SearchArgs, EXIT_FAILED,
};

/// Exact checks for matrices that are totally positive relative to a tree.
///
/// Every subcommand prints a JSON report on stdout. Exit codes: 0 success,
/// 1 check failed, 2 bad input, 3 hypotheses not met, 4 numerical failure,
/// 5 search budget exhausted.
#[derive(Parser)]
#[command(name = "ttp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that every path submatrix is totally positive.
    Check { matrix: PathBuf, tree: PathBuf },
    /// Verify the hypotheses and the smallest-eigenvector sign conclusion.
    Theorem {
        matrix: PathBuf,
        tree: PathBuf,
        /// Relative eigen-residual tolerance.
        #[arg(long, default_value_t = 1e-10, allow_hyphen_values = true)]
        tol: f64,
    },
    /// Check the exact determinant identities on random matrices.
    Selftest {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, hide = true)]
        corrupt_adjoint: bool,
    },
    /// Search for a T-TP matrix for the given tree.
    Search {
        tree: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        /// Look for an instance with negative determinant.
        #[arg(long)]
        negative_det: bool,
        /// Also require the determinant and pendant-deleted P-matrix hypotheses.
        #[arg(long)]
        hypotheses: bool,
        /// Write a found matrix here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the `evaluations score` trace here.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// List every path of the tree and its alternating signing.
    Paths { tree: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match cli.command {
        Command::Check { matrix, tree } => cmd_check(&matrix, &tree),
        Command::Theorem { matrix, tree, tol } => cmd_theorem(&matrix, &tree, tol),
        Command::Selftest { n, trials, seed, corrupt_adjoint } => cmd_selftest(n, trials, seed, corrupt_adjoint),
        Command::Search { tree, seed, budget, negative_det, hypotheses, out, log } => {
            cmd_search(&tree, &SearchArgs { seed, budget, negative_det, hypotheses, out, log })
        }
        Command::Paths { tree } => cmd_paths(&tree),
    };
    print!("{}", report.to_json());
    if report.command == "theorem" && report.exit_code == EXIT_FAILED {
        eprintln!("!!! FALSIFICATION: the hypotheses hold but the conclusion failed; see the report !!!");
    } else {
        eprintln!("{}: {}", report.command, report.status);
    }
    ExitCode::from(report.exit_code as u8)
}
