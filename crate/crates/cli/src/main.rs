use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use liddi_cli::{run, RunOptions, Task};

/// Laser-induced dipole-dipole interactions: potentials, steady states,
/// dynamics, scattering rates and the validation suite.
#[derive(Parser)]
#[command(name = "liddi", version)]
struct Args {
    /// TOML run configuration.
    config: PathBuf,
    /// Overrides the task named in the config.
    #[arg(long, value_enum)]
    task: Option<Task>,
    /// Output file; the metadata sidecar is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    // Usage errors are input errors (exit 1); code 2 is kept for failed validation.
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let options = RunOptions {
        task: args.task,
        out: args.out,
        mutation: None,
    };
    match run(&args.config, &options) {
        Ok(outcome) => {
            if outcome.failed_points > 0 {
                eprintln!("{} sweep point(s) failed; see the error column", outcome.failed_points);
            }
            eprintln!("wrote {} and {}", outcome.output.display(), outcome.meta.display());
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
