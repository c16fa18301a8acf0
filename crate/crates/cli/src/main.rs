use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use latdiag_cli::{cmd_explore_v, cmd_hnf, cmd_iso, cmd_kripke, cmd_snf, cmd_verify_paper, ExploreConfig, Output};

#[derive(Parser)]
#[command(name = "latdiag", version, about = "Exact computations on diagrams of integer lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Re-derive and check every worked example.
    VerifyPaper {
        #[arg(long)]
        json: bool,
        /// Read the chain fixtures from this directory instead of the built-in copies.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// Decide whether two chain diagrams are isomorphic.
    Iso {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, default_value_t = 5)]
        coeff_bound: u64,
        #[arg(long, default_value_t = 64)]
        max_modulus: u64,
        #[arg(long)]
        json: bool,
    },
    /// Hermite normal form of a matrix file.
    Hnf { file: PathBuf },
    /// Smith normal form of a matrix file.
    Snf { file: PathBuf },
    /// Search for a Kripke countermodel.
    Kripke {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
    },
    /// Experimental bounded survey of V-shaped diagrams.
    ExploreV {
        #[arg(long, default_value_t = 2)]
        rank_bound: usize,
        #[arg(long, default_value_t = 2)]
        entry_bound: u64,
        #[arg(long, default_value_t = 3)]
        coeff_bound: u64,
        #[arg(long, default_value_t = 16)]
        max_modulus: u64,
        #[arg(long, default_value_t = 300)]
        max_candidates: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out: Output = match cli.command {
        Command::VerifyPaper { json, fixtures } => cmd_verify_paper(fixtures.as_deref(), json),
        Command::Iso { left, right, coeff_bound, max_modulus, json } => {
            cmd_iso(&left, &right, coeff_bound, max_modulus, json)
        }
        Command::Hnf { file } => cmd_hnf(&file),
        Command::Snf { file } => cmd_snf(&file),
        Command::Kripke { formula, max_worlds } => cmd_kripke(&formula, max_worlds),
        Command::ExploreV { rank_bound, entry_bound, coeff_bound, max_modulus, max_candidates } => {
            cmd_explore_v(&ExploreConfig { rank_bound, entry_bound, coeff_bound, max_modulus, max_candidates })
        }
    };
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.code as u8)
}
