use std::path::PathBuf;
use std::process::ExitCode;

use asdim_cli::{cmd_ball, cmd_reduce, cmd_report, cmd_run, cmd_tree, cmd_verify, Outcome, Overrides};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "asdim", version, about = "Verified asymptotic-dimension covers of group windows")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a pipeline and write its certificate.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        scale: Option<u64>,
        #[arg(long)]
        radius: Option<u32>,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Re-check certificates against regenerated windows.
    Verify { certificates: Vec<PathBuf> },
    /// Tabulate certificates.
    Report {
        certificates: Vec<PathBuf>,
        /// One JSON object per row instead of a table.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sphere and ball sizes of a group.
    Ball {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        radius: u32,
        #[arg(long, default_value_t = 1 << 22)]
        cap: usize,
    },
    /// Canonical forms of words.
    Reduce {
        #[arg(long)]
        config: PathBuf,
        words: Vec<String>,
    },
    /// Bass-Serre tree slice met by a ball, optionally with its tree cover.
    Tree {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        scale: Option<u64>,
        #[arg(long, default_value_t = 1 << 22)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome: Outcome = match cli.command {
        Command::Run {
            config,
            out,
            scale,
            radius,
            cap,
        } => cmd_run(&config, out.as_deref(), &Overrides { scale, radius, cap }),
        Command::Verify { certificates } => cmd_verify(&certificates),
        Command::Report { certificates, json, out } => cmd_report(&certificates, json, out.as_deref()),
        Command::Ball { config, radius, cap } => cmd_ball(&config, radius, cap),
        Command::Reduce { config, words } => cmd_reduce(&config, &words),
        Command::Tree {
            config,
            radius,
            scale,
            cap,
            out,
        } => cmd_tree(&config, radius, scale, cap, out.as_deref()),
    };
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.code as u8)
}
