use std::process::ExitCode;

use clap::Parser;
use goldbach_cesaro_cli::commands::{run, write_output, Command, Failure};

#[derive(Parser)]
#[command(
    name = "gcesaro",
    version,
    about = "Numerical checks of the Cesàro-weighted Goldbach explicit formula"
)]
struct Cli {
    /// Worker threads (default: one per core)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    let output = match cli.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Failure {
                    code: 2,
                    message: format!("cannot start {t} threads: {e}"),
                })?;
            pool.install(|| run(&cli.command))?
        }
        None => run(&cli.command)?,
    };
    write_output(&output)?;
    if let Some(note) = &output.note {
        eprintln!("{note}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
