//! `fellkms` — batch front end for KMS-state computations on twisted
//! groupoid C*-algebras and twisted k-graph algebras.
//!
//! Every run reads one JSON input file, executes one subcommand, and emits
//! a JSON (or flat-table) report embedding the tool version, a config hash
//! and the achieved defects, so identical configurations produce
//! byte-identical reports.
//!
//! Exit codes: 0 success, 1 malformed input (with a line/field diagnostic),
//! 2 validation failure, 3 truncation depth exceeded.

mod commands;
mod input;

use clap::{Args, Parser, Subcommand};
use fellkms_core::CoreError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fellkms", version, about = "KMS states on twisted groupoid C*-algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Args)]
pub struct Common {
    /// Input JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Output file; stdout when omitted. Written atomically.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Numerical tolerance for float pipelines.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Box bound for lattice/periodicity truncations
    /// (default: 2·|vertices|·k for k-graph commands).
    #[arg(long = "box")]
    box_bound: Option<i64>,
    /// Truncation depth for path-groupoid searches.
    #[arg(long, default_value_t = 16)]
    depth: u32,
    /// RNG seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format.
    #[arg(long, value_parser = ["json", "table"], default_value = "json")]
    format: String,
    /// Number of sampled checks where a command samples.
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Finite groupoid operations.
    Groupoid {
        #[command(subcommand)]
        op: GroupoidOp,
    },
    /// Cocycle validation.
    Cocycle {
        #[command(subcommand)]
        op: CocycleOp,
    },
    /// KMS-state operations on a twisted groupoid.
    Kms {
        #[command(subcommand)]
        op: KmsOp,
    },
    /// Trace space of a one-unit twisted algebra.
    Trace {
        #[command(subcommand)]
        op: TraceOp,
    },
    /// Lattice bicharacter operations.
    Lattice {
        #[command(subcommand)]
        op: LatticeOp,
    },
    /// Finite k-graph operations.
    Kgraph {
        #[command(subcommand)]
        op: KgraphOp,
    },
}

#[derive(Subcommand)]
enum GroupoidOp {
    /// Check the groupoid axioms; violations are listed by name.
    Validate(Common),
}

#[derive(Subcommand)]
enum CocycleOp {
    /// Check 2-cocycle normalisation/identity (exact) and 1-cocycle
    /// additivity (within --tol).
    Validate(Common),
}

#[derive(Subcommand)]
enum KmsOp {
    /// Enumerate the extreme KMS_β states with their certificates.
    Simplex(Common),
    /// Verify a functional: KMS defect, positivity, extraction, condition
    /// (II) and gauge vanishing.
    Verify(Common),
}

#[derive(Subcommand)]
enum TraceOp {
    /// Affine description of the tracial Hermitian functionals, plus exact
    /// extreme tracial states for abelian one-unit groupoids.
    Space(Common),
}

#[derive(Subcommand)]
enum LatticeOp {
    /// Center of the antisymmetrised bicharacter, as a Hermite basis.
    Zomega(Common),
}

#[derive(Subcommand)]
enum KgraphOp {
    /// Periodicity group within a box via the exact window criterion.
    Per(Common),
    /// Adjacency matrices, spectral radii and the Perron vector.
    Spectra(Common),
    /// Cylinder masses of the Perron measure M up to the box.
    Measure(Common),
    /// The bicharacter ω_c on Per and its center.
    Omega(Common),
    /// The KMS₁ parameterisation report for the preferred dynamics.
    Kms1(Common),
}

pub enum RunOutcome {
    /// Report body plus whether all checks passed.
    Done(serde_json::Value, bool),
}

pub enum CliFailure {
    Malformed(String),
    Core(CoreError),
}

impl From<CoreError> for CliFailure {
    fn from(e: CoreError) -> Self {
        CliFailure::Core(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common) = match &cli.command {
        Command::Groupoid {
            op: GroupoidOp::Validate(c),
        } => ("groupoid validate", c),
        Command::Cocycle {
            op: CocycleOp::Validate(c),
        } => ("cocycle validate", c),
        Command::Kms {
            op: KmsOp::Simplex(c),
        } => ("kms simplex", c),
        Command::Kms {
            op: KmsOp::Verify(c),
        } => ("kms verify", c),
        Command::Trace {
            op: TraceOp::Space(c),
        } => ("trace space", c),
        Command::Lattice {
            op: LatticeOp::Zomega(c),
        } => ("lattice zomega", c),
        Command::Kgraph {
            op: KgraphOp::Per(c),
        } => ("kgraph per", c),
        Command::Kgraph {
            op: KgraphOp::Spectra(c),
        } => ("kgraph spectra", c),
        Command::Kgraph {
            op: KgraphOp::Measure(c),
        } => ("kgraph measure", c),
        Command::Kgraph {
            op: KgraphOp::Omega(c),
        } => ("kgraph omega", c),
        Command::Kgraph {
            op: KgraphOp::Kms1(c),
        } => ("kgraph kms1", c),
    };

    let raw = match std::fs::read_to_string(&common.input) {
        Ok(raw) => raw,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", common.input.display());
            return ExitCode::from(1);
        }
    };
    let parsed: input::InputDto = match serde_json::from_str(&raw) {
        Ok(p) => p,
        Err(e) => {
            eprintln!(
                "error: malformed JSON in {} at line {}, column {}: {e}",
                common.input.display(),
                e.line(),
                e.column()
            );
            return ExitCode::from(1);
        }
    };

    let outcome = commands::dispatch(name, &parsed, common);
    match outcome {
        Ok(RunOutcome::Done(body, passed)) => {
            let envelope = commands::envelope(name, common, &raw, body);
            let rendered = match common.format.as_str() {
                "table" => commands::render_table(&envelope),
                _ => {
                    let mut s = serde_json::to_string_pretty(&envelope).expect("serialisable");
                    s.push('\n');
                    s
                }
            };
            if let Some(path) = &common.out {
                if let Err(e) = atomic_write(path, rendered.as_bytes()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{rendered}");
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(CliFailure::Malformed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliFailure::Core(CoreError::DepthExceeded { depth, context })) => {
            eprintln!("error: depth {depth} exceeded while {context}");
            ExitCode::from(3)
        }
        Err(CliFailure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn atomic_write(path: &PathBuf, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)
}
