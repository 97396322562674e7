use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use flagcalc_cli::run::io_failure;
use flagcalc_cli::{run, CliError, Command, EXIT_INPUT};

#[derive(Parser)]
#[command(name = "flagcalc", version, about = "Exact curvature computations for flag structures on 3-manifolds")]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check d^2 = 0 and, with a [pseudoflag] section, the structure equations.
    Check { file: PathBuf },
    /// Normalize the pseudo-flag structure.
    Reduce { file: PathBuf },
    /// Full curvature report.
    Curvature { file: PathBuf },
    /// The global invariant integrand.
    Invariant {
        file: PathBuf,
        /// Drop the fiber terms and report the coefficient of the volume form.
        #[arg(long)]
        kill_fiber: bool,
        /// Multiply the volume coefficient by this expression.
        #[arg(long, value_name = "EXPR")]
        volume: Option<String>,
    },
    /// Verify the gauge law with the [gauge] element (symbolic if absent).
    Gauge { file: PathBuf },
    /// Verify the reality conditions for the [conjugation] section.
    Cr { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    let (cmd, file) = match cli.command {
        Cmd::Check { file } => (Command::Check, file),
        Cmd::Reduce { file } => (Command::Reduce, file),
        Cmd::Curvature { file } => (Command::Curvature, file),
        Cmd::Invariant {
            file,
            kill_fiber,
            volume,
        } => (Command::Invariant { kill_fiber, volume }, file),
        Cmd::Gauge { file } => (Command::Gauge, file),
        Cmd::Cr { file } => (Command::Cr, file),
    };
    let report = match std::fs::read_to_string(&file) {
        Ok(text) => run(&cmd, &text),
        Err(source) => io_failure(
            &cmd,
            CliError::Io {
                path: file.display().to_string(),
                source,
            },
        ),
    };
    if cli.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if let Some(e) = &report.error {
        eprintln!("flagcalc: {}", e.message);
    }
    ExitCode::from(report.exit_code() as u8)
}
