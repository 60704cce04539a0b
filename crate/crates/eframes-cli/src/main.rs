use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eframes_cli::{run_analyze, run_gen, run_verify, Overrides};

/// Run E-frame analyses and theorem-verification campaigns.
#[derive(Parser)]
#[command(name = "eframes", version, about)]
struct Cli {
    /// Override the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override the relative tolerance (rel_tol).
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute optimal frame bounds per trial and write a JSON report.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run theorem verifiers per trial; write JSON report and CSV table.
    Verify {
        /// Comma-separated verifier names
        /// (thm3,diag,gram,bessel-id,ab,eonb,decomp,dual);
        /// defaults to the config's `theorems` list.
        #[arg(long)]
        theorems: Option<String>,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        csv: PathBuf,
    },
    /// Materialize one matrix mapping from a generator spec file.
    Gen {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = Overrides {
        seed: cli.seed,
        rel_tol: cli.tol,
    };
    let code = match &cli.command {
        Command::Analyze { config, out } => run_analyze(config, out, overrides),
        Command::Verify {
            theorems,
            config,
            out,
            csv,
        } => run_verify(theorems.as_deref(), config, out, csv, overrides),
        Command::Gen { spec, out } => run_gen(spec, out, overrides),
    };
    ExitCode::from(code as u8)
}
