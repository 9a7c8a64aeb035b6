//! `trichoose`: solve, verify and generate list multicoloring instances on
//! triangle-free induced subgraphs of the triangular lattice.

mod commands;
mod docs;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use trichoose::color::ProblemParams;
use trichoose::generate::{ListStyle, WindowShape};

use crate::error::CliError;

#[derive(Parser)]
#[command(name = "trichoose", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Color every vertex with b colors from its a-list.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        lists: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Where to write the coloring and trace; stdout by default.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a coloring against its graph and lists.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        lists: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a random instance from a seed.
    Gen(GenArgs),
    /// Decide a weighted path or cycle exactly.
    Oracle {
        /// Document with `lists`, optional `weights` and optional `cycle`.
        #[arg(long)]
        lists: PathBuf,
        /// Demand for every vertex when the document has no weights.
        #[arg(long)]
        b: Option<usize>,
        /// Treat the lists as a cycle whatever the document says.
        #[arg(long)]
        cycle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the property suite and print one line per criterion.
    Selftest {
        /// Fraction of the full instance counts to run.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value_t = trichoose::selftest::SelfTestConfig::default().seed)]
        seed: u64,
    },
}

/// Either `--m` for (5m, 2m) or an explicit `--a` and `--b`.
#[derive(Args, Clone, Copy, Debug)]
struct ParamArgs {
    #[arg(long, conflicts_with_all = ["a", "b"])]
    m: Option<usize>,
    #[arg(long, requires = "b")]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
}

impl ParamArgs {
    fn resolve(&self) -> Result<ProblemParams, CliError> {
        let params = match (self.m, self.a, self.b) {
            (Some(m), None, None) => ProblemParams::five_two(m),
            (None, Some(a), Some(b)) => ProblemParams::new(a, b),
            _ => return Err(CliError::Malformed("give --m, or both --a and --b".into())),
        };
        params.map_err(|e| CliError::Malformed(e.to_string()))
    }

    /// The demand alone, for commands that do not need `a`.
    fn demand(&self) -> Result<usize, CliError> {
        match (self.m, self.b) {
            (Some(m), None) => Ok(2 * m),
            (None, Some(b)) => Ok(b),
            _ => Err(CliError::Malformed("give --m or --b".into())),
        }
    }
}

#[derive(Args, Clone, Debug)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    width: u32,
    #[arg(long, default_value_t = 6)]
    height: u32,
    /// Probability that a window cell becomes a vertex.
    #[arg(long, default_value_t = 0.7)]
    density: f64,
    /// Number of colors to draw from; 3a by default.
    #[arg(long)]
    palette: Option<u32>,
    /// List size is 5m.
    #[arg(long, conflicts_with = "a")]
    m: Option<usize>,
    /// List size.
    #[arg(long)]
    a: Option<usize>,
    #[arg(long, value_enum, default_value_t = StyleArg::Uniform)]
    style: StyleArg,
    #[arg(long, value_enum, default_value_t = ShapeArg::Full)]
    shape: ShapeArg,
    /// Directory for graph.json and lists.json; stdout gets one combined
    /// document otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StyleArg {
    Uniform,
    ShiftedInterval,
    NearIdentical,
}

impl From<StyleArg> for ListStyle {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::Uniform => ListStyle::Uniform,
            StyleArg::ShiftedInterval => ListStyle::ShiftedInterval,
            StyleArg::NearIdentical => ListStyle::NearIdentical,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ShapeArg {
    Full,
    Honeycomb,
}

impl From<ShapeArg> for WindowShape {
    fn from(s: ShapeArg) -> Self {
        match s {
            ShapeArg::Full => WindowShape::Full,
            ShapeArg::Honeycomb => WindowShape::Honeycomb,
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Solve {
            graph,
            lists,
            params,
            out,
        } => commands::solve(&graph, &lists, params.resolve()?, out.as_deref()),
        Command::Verify {
            graph,
            lists,
            coloring,
            params,
            out,
        } => commands::verify(&graph, &lists, &coloring, params.demand()?, out.as_deref()),
        Command::Gen(args) => commands::gen(&args),
        Command::Oracle {
            lists,
            b,
            cycle,
            out,
        } => commands::oracle(&lists, b, cycle, out.as_deref()),
        Command::Selftest { scale, seed } => commands::selftest(scale, seed),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
