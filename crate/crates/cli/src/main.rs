use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use twistqm_cli::{execute, load_config, Command, Invocation, OutputFormat};

#[derive(Parser)]
#[command(name = "twistqm", version, about = "Bound states and scattering on a twisted cylinder")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// TOML run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads; 0 picks automatically
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Closed-form bound-state energies
    Spectrum,
    /// Sampled bound-state wavefunctions
    Wavefunction,
    /// Transmission through a twisted section of an infinite cylinder
    ScatterEmbedded,
    /// Transmission of a free particle through a twisted tube
    ScatterFree,
    /// Transmission over a grid of (l, radius, alpha)
    Sweep,
    /// Run the built-in validation checks
    Validate,
}

#[derive(ValueEnum, Clone, Copy)]
enum Format {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("{{\"error\":\"config\",\"field\":\"threads\",\"line\":null,\"message\":\"{e}\"}}");
            return ExitCode::from(1);
        }
    }
    let command = match cli.command {
        Cmd::Spectrum => Command::Spectrum,
        Cmd::Wavefunction => Command::Wavefunction,
        Cmd::ScatterEmbedded => Command::ScatterEmbedded,
        Cmd::ScatterFree => Command::ScatterFree,
        Cmd::Sweep => Command::Sweep,
        Cmd::Validate => Command::Validate,
    };
    let inv = Invocation {
        command: Some(command),
        config_path: cli.config,
        out: cli.out,
        format: cli.format.map(|f| match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }),
    };
    match load_config(&inv).and_then(|c| execute(&c)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.report());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
