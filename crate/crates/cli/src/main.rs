//! JSON command line front end for critical points of master functions.

mod commands;
mod output;
mod parse;

use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bethevec",
    version,
    about = "Critical points of master functions, Bethe vectors, multiplicities and Schubert data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find all critical point orbits for a weight configuration.
    Solve(SolveArgs),
    /// Solve, then check the singular, eigenvector and norm identities per orbit.
    Verify(VerifyArgs),
    /// Dimension of the singular weight space Sing V[mu].
    Count(CountArgs),
    /// Ramification sequences of polynomial planes and weight configurations.
    Schubert(SchubertArgs),
}

#[derive(Args)]
struct ProblemArgs {
    /// Lie algebra: sl2, sl3, ...
    #[arg(long)]
    algebra: String,

    /// Highest weights, comma separated: `w2` for a fundamental weight,
    /// `1:0:2` for explicit coordinates.
    #[arg(long)]
    weights: String,

    /// Number of variables per color, comma separated, one entry per simple root.
    #[arg(long)]
    l: String,

    /// Marked points, comma separated; entries like `1`, `-0.5`, `1+2i`.
    #[arg(long, conflicts_with = "seed")]
    z: Option<String>,

    /// Seed for sampling marked points from the unit disk.
    #[arg(long)]
    seed: Option<u64>,

    /// Starting scale of the cluster continuation.
    #[arg(long, default_value_t = 1e-3)]
    eps0: f64,

    /// Worker threads for per-orbit processing; 1 keeps reports byte-stable.
    #[arg(long, default_value_t = 1)]
    jobs: usize,

    /// Report format; only `json` is available.
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    problem: ProblemArgs,

    /// Largest allowed |S(omega,omega)/Hess - 1| per orbit.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,

    /// Exact marked points by name; `cbrt-of-unity` is 1, eta, eta^2 for the
    /// primitive cube root of unity eta.
    #[arg(long, value_name = "NAME", conflicts_with_all = ["z", "seed"])]
    z_exact: Option<String>,

    /// Critical point to check, comma separated rationals; goes with --z-exact.
    #[arg(long)]
    t: Option<String>,
}

#[derive(Args)]
struct CountArgs {
    /// Lie algebra: sl2, sl3, ...
    #[arg(long)]
    algebra: String,

    /// Highest weights, comma separated, as in `solve`.
    #[arg(long)]
    weights: String,

    /// Target weight, comma separated coordinates in the fundamental basis.
    #[arg(long)]
    mu: String,

    /// Report format; only `json` is available.
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct SchubertArgs {
    /// File with one polynomial per line, rational coefficients from degree zero up.
    #[arg(long, conflicts_with = "from_weights")]
    plane: Option<PathBuf>,

    /// Weight configuration to translate into ramification conditions.
    #[arg(long)]
    from_weights: Option<String>,

    /// Lie algebra; goes with --from-weights.
    #[arg(long)]
    algebra: Option<String>,

    /// Weight at infinity, comma separated coordinates; goes with --from-weights.
    #[arg(long, conflicts_with = "l")]
    infinity: Option<String>,

    /// Variables per color; sets the weight at infinity to Lambda - sum l_i alpha_i.
    #[arg(long)]
    l: Option<String>,

    /// Ambient degree bound; defaults to the smallest valid choice and is
    /// always reported.
    #[arg(long)]
    d: Option<usize>,

    /// Extra finite points to tabulate, comma separated rationals; goes with --plane.
    #[arg(long)]
    at: Option<String>,

    /// Report format; only `json` is available.
    #[arg(long, default_value = "json")]
    format: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve(args) => commands::solve(args),
        Command::Verify(args) => commands::verify(args),
        Command::Count(args) => commands::count(args),
        Command::Schubert(args) => commands::schubert(args),
    };
    match outcome {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report.value).expect("report serializes");
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}
