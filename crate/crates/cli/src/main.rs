use std::process::ExitCode;

use clap::Parser;

use pwreath_cli::{run, write_documents, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (subcommand, invocation) = cli.command.parts();
    let output = match run(subcommand, invocation, |key| std::env::var(key).ok()) {
        Ok(output) => output,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Err(e) = write_documents(&output.documents, invocation.out.as_deref(), &mut std::io::stdout().lock()) {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    for violation in &output.report.violations {
        eprintln!("violation: {violation}");
    }
    if let Some(mismatch) = &output.golden {
        eprintln!("golden mismatch at {mismatch}");
    }
    ExitCode::from(output.exit_code as u8)
}
