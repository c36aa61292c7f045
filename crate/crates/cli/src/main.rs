use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

#[derive(Parser)]
#[command(name = "tropk", version, about = "Exact fans, tropical K-group presentations and toric Gersten complexes")]
struct Cli {
    /// Write the output document here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Tropical hypersurface of a polynomial document.
    Hyp { polynomial: PathBuf },
    /// Dimension of F^p of a fan's support.
    Fp {
        #[arg(long)]
        fan: PathBuf,
        #[arg(short)]
        p: usize,
    },
    /// Cone of the fan containing a flag in its relative interior.
    Locate {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        flag: PathBuf,
    },
    /// Refine a fan by stellar subdivisions, a common refinement, or random subdivisions.
    Refine {
        #[arg(long)]
        fan: PathBuf,
        /// Comma-separated ray, e.g. `1,1`; may be repeated.
        #[arg(long, value_delimiter = ';')]
        stellar: Vec<String>,
        /// Second fan for the common refinement.
        #[arg(long)]
        with: Option<PathBuf>,
        /// Number of random stellar subdivisions.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cohomology of the torus-invariant Gersten complex.
    Gersten {
        #[arg(long)]
        fan: PathBuf,
        #[arg(short)]
        p: usize,
        /// Compare the top cokernel with the Chow group oracle; exit 2 on mismatch.
        #[arg(long)]
        check_chow: bool,
    },
    /// Dimension of the rational Chow group of a complete toric variety.
    Chow {
        #[arg(long)]
        fan: PathBuf,
        #[arg(short)]
        p: usize,
    },
    /// Height of a flag and of the value group it induces.
    ValHeight {
        #[arg(long)]
        flag: PathBuf,
    },
    /// Canonical form of a flag, optionally after dividing by a convex subgroup.
    ValReduce {
        #[arg(long)]
        flag: PathBuf,
        /// Keep only the first `cut` levels.
        #[arg(long)]
        cut: Option<usize>,
    },
    /// Residues: contraction along a cone pair, tame symbols, or symbol charts.
    Residue { input: PathBuf },
    /// Transfer or restriction along a finite-index sublattice.
    Transfer { input: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (doc, code) = match commands::run(&cli.command) {
        Ok(out) => out,
        Err(e) => (e.document(), e.exit_code()),
    };
    let text = serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n";
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("tropk: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
