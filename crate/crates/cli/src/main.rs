//! `toa`: command-line front end for the orthoalgebra workbench.
//!
//! Exit codes: 0 success, 1 invalid structure or failed property (with JSON
//! diagnostics on stdout), 2 parse or usage error (message on stderr).

mod demo;
mod verbs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Diagram {
    Hasse,
    Greechie,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoName {
    #[value(name = "example2.5")]
    Example25,
    #[value(name = "example3.3")]
    Example33,
    #[value(name = "wtriangle")]
    Wtriangle,
}

#[derive(Debug, Parser)]
#[command(
    name = "toa",
    version,
    about = "Finite orthoalgebras, test spaces and topological checks"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Validate an orthoalgebra file and report axiom violations.
    Verify { file: PathBuf },
    /// Classification, center, blocks and central decomposition.
    Analyze { file: PathBuf },
    /// The logic of a test-space file, as an orthoalgebra file.
    Logic { file: PathBuf },
    /// The canonical test space of an orthoalgebra, as a test-space file.
    Canonical { file: PathBuf },
    /// Rebuild an orthoalgebra as the logic of its canonical test space.
    Roundtrip { file: PathBuf },
    /// Topological-orthoalgebra conditions for an orthoalgebra and topology.
    TopoCheck { algebra: PathBuf, topology: PathBuf },
    /// Vertices of the state polytope.
    States { file: PathBuf },
    /// Built-in worked examples.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
        /// Numerical tolerance for projection computations.
        #[arg(long)]
        tol: Option<f64>,
        /// Seed for the sampled rank-separation check (skipped without it).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Hasse or Greechie diagram in Graphviz DOT.
    ExportDot {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "hasse")]
        diagram: Diagram,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.verb {
        Verb::Verify { file } => verbs::verify(file),
        Verb::Analyze { file } => verbs::analyze(file),
        Verb::Logic { file } => verbs::logic(file),
        Verb::Canonical { file } => verbs::canonical(file),
        Verb::Roundtrip { file } => verbs::roundtrip(file),
        Verb::TopoCheck { algebra, topology } => verbs::topo_check(algebra, topology),
        Verb::States { file } => verbs::states(file),
        Verb::Demo { name, tol, seed } => demo::run(*name, *tol, *seed),
        Verb::ExportDot { file, diagram } => verbs::export_dot(file, *diagram),
    };
    match result {
        Ok(out) | Err(verbs::Failure::Invalid(out)) => {
            let body = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&out.json).expect("reports serialize");
                    s.push('\n');
                    s
                }
                Format::Text => out.text,
            };
            print!("{body}");
            ExitCode::from(out.code)
        }
        Err(verbs::Failure::Usage(msg)) => {
            eprintln!("toa: {msg}");
            ExitCode::from(2)
        }
    }
}
