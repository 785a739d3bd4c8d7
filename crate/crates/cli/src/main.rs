mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "gradus", version, about = "Deformations and stability of finite graded associative algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Algebra definition file (JSON).
    pub file: PathBuf,
    /// Read the structure constants over this field instead of the file's, e.g. `rational` or `gf(5)`.
    #[arg(long)]
    pub field: Option<String>,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Include wall-clock timing in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyArg {
    Exhaustive,
    Heuristic,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check associativity, reporting a witness triple on failure.
    Verify(Common),
    /// Graded Hochschild cohomology.
    Hh {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = gradus::hochschild::DEFAULT_P_MAX)]
        p_max: usize,
    },
    /// First-order deformation along a 2-cocycle, with its primary obstruction.
    Deform {
        #[command(flatten)]
        common: Common,
        /// Cocycle file (JSON): `{"representative": k}` or explicit blocks.
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Primary obstruction of a 2-cocycle.
    Obstruct {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Search for destabilizing test configurations.
    Stability {
        #[command(flatten)]
        common: Common,
        /// Comma-separated θ, e.g. `-3,1`. Defaults to the standard parameter.
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<String>,
        /// Defaults to exhaustive over GF(p) and heuristic over ℚ.
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
        /// Longest flag of A_1 to enumerate. Defaults to q·max d_i.
        #[arg(long)]
        r_max: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random flags drawn by the heuristic strategy.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// Extra flags of A_1 to try (JSON).
        #[arg(long)]
        flags: Option<PathBuf>,
    },
    /// Restrict to degrees `≤ q`.
    Truncate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        q: usize,
        /// Also write the truncated algebra file here.
        #[arg(long)]
        algebra_out: Option<PathBuf>,
    },
    /// Dimensions, cochain counts and structural flags.
    Info(Common),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Verify(c) => commands::verify(&c),
        Command::Hh { common, p_max } => commands::hh(&common, p_max),
        Command::Deform { common, cocycle } => commands::deform(&common, &cocycle, false),
        Command::Obstruct { common, cocycle } => commands::deform(&common, &cocycle, true),
        Command::Stability { common, theta, strategy, r_max, seed, samples, flags } => commands::stability(
            &common,
            &commands::StabilityArgs { theta, strategy, r_max, seed, samples, flags },
        ),
        Command::Truncate { common, q, algebra_out } => commands::truncate(&common, q, algebra_out.as_deref()),
        Command::Info(c) => commands::info(&c),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
