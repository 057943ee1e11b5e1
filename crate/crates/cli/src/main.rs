mod commands;
mod report;

use clap::{Parser, Subcommand, ValueEnum};
use commands::Settings;
use report::{Report, Verdict};
use std::path::PathBuf;
use std::process::ExitCode;
use tva_core::semantics::stt::{SttCaps, DEFAULT_MAX_DOMAIN, DEFAULT_MAX_INSTANCES};
use tva_core::semantics::DEFAULT_SEARCH_BOUND;

/// Finite truth values algebras, models of theories modulo, and proof
/// normalization.
///
/// Exit codes: 0 positive verdict, 1 negative verdict, 2 bad input,
/// 3 inconclusive (fuel or search bound exhausted).
#[derive(Parser)]
#[command(name = "tva", version)]
struct Cli {
    /// Rewrite steps per conversion test, or proofs visited by the
    /// normalization analysis.
    #[arg(long, global = true, default_value_t = 10_000)]
    fuel: usize,
    /// Maximum number of candidate structures a search may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_BOUND)]
    bound: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout (`complete`: output
    /// directory for the generated files).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Check the algebra conditions, the Heyting property and any stored
    /// order.
    CheckAlgebra {
        algebra: PathBuf,
        /// Also search for an order making the algebra ordered and complete.
        #[arg(long)]
        find_order: bool,
    },
    /// Build the algebra of closed sets and the embedding into it.
    Complete { algebra: PathBuf },
    /// Search for an order making the algebra ordered and complete.
    FindOrder { algebra: PathBuf },
    /// Check a structure file against a theory.
    CheckModel {
        theory: PathBuf,
        structure: PathBuf,
        /// Algebra file, overriding the structure's `algebra` line.
        #[arg(long)]
        algebra: Option<PathBuf>,
    },
    /// Enumerate structures and report the first model.
    FindModel {
        theory: PathBuf,
        algebra: PathBuf,
        /// Domain size, as `sort=n` (default 1).
        #[arg(long = "domain")]
        domains: Vec<String>,
    },
    /// Build a model of a positive theory by fixed point iteration.
    FixpointModel {
        theory: PathBuf,
        algebra: PathBuf,
        #[arg(long = "domain")]
        domains: Vec<String>,
        /// Use the construction for deterministic theories.
        #[arg(long)]
        deterministic: bool,
    },
    /// Look for models over every algebra in a directory.
    ProbeSuper { theory: PathBuf, library: PathBuf },
    /// Build the simple type theory model and check its rule instances.
    SttModel {
        algebra: PathBuf,
        /// Maximum arrow nesting of the sorts.
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_DOMAIN)]
        max_domain: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_INSTANCES)]
        max_instances: u64,
        /// Write the generated theory to this file.
        #[arg(long)]
        theory_out: Option<PathBuf>,
    },
    /// Type-check a proof file modulo a theory.
    CheckProof { theory: PathBuf, proof: PathBuf },
    /// Explore every reduction of a proof.
    NormalizeProof { theory: PathBuf, proof: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckAlgebra { .. } => "check-algebra",
            Command::Complete { .. } => "complete",
            Command::FindOrder { .. } => "find-order",
            Command::CheckModel { .. } => "check-model",
            Command::FindModel { .. } => "find-model",
            Command::FixpointModel { .. } => "fixpoint-model",
            Command::ProbeSuper { .. } => "probe-super",
            Command::SttModel { .. } => "stt-model",
            Command::CheckProof { .. } => "check-proof",
            Command::NormalizeProof { .. } => "normalize-proof",
        }
    }
}

fn run(cli: &Cli, r: &mut Report) -> anyhow::Result<()> {
    let s = Settings {
        fuel: cli.fuel,
        bound: cli.bound,
    };
    match &cli.command {
        Command::CheckAlgebra {
            algebra,
            find_order,
        } => commands::check_algebra(r, algebra, *find_order),
        Command::Complete { algebra } => commands::complete(r, algebra, cli.out.as_deref()),
        Command::FindOrder { algebra } => commands::find_order(r, algebra),
        Command::CheckModel {
            theory,
            structure,
            algebra,
        } => commands::check_model_cmd(r, theory, structure, algebra.as_deref()),
        Command::FindModel {
            theory,
            algebra,
            domains,
        } => commands::find_model_cmd(r, &s, theory, algebra, domains),
        Command::FixpointModel {
            theory,
            algebra,
            domains,
            deterministic,
        } => commands::fixpoint_cmd(r, &s, theory, algebra, domains, *deterministic),
        Command::ProbeSuper { theory, library } => commands::probe_cmd(r, &s, theory, library),
        Command::SttModel {
            algebra,
            depth,
            max_domain,
            max_instances,
            theory_out,
        } => {
            let caps = SttCaps {
                max_domain: *max_domain,
                max_instances: *max_instances,
            };
            commands::stt_cmd(r, algebra, *depth, caps, theory_out.as_deref())
        }
        Command::CheckProof { theory, proof } => commands::check_proof_cmd(r, &s, theory, proof),
        Command::NormalizeProof { theory, proof } => {
            commands::normalize_proof_cmd(r, &s, theory, proof)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut report = Report::new(cli.command.name());
    if let Err(e) = run(&cli, &mut report) {
        report = Report::error(cli.command.name(), std::mem::take(&mut report.inputs), &e);
    }
    let text = match cli.format {
        Format::Text => report.to_text(),
        Format::Structured => {
            serde_json::to_string_pretty(&report.to_json()).expect("reports serialize") + "\n"
        }
    };
    let to_file = match (&cli.command, &cli.out) {
        (Command::Complete { .. }, _) | (_, None) => None,
        (_, Some(p)) => Some(p),
    };
    match to_file {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(Verdict::Error.exit_code() as u8);
            }
        }
        None if report.verdict == Verdict::Error && cli.format == Format::Text => eprint!("{text}"),
        None => print!("{text}"),
    }
    ExitCode::from(report.verdict.exit_code() as u8)
}
