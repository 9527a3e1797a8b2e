use std::process::ExitCode;

use clap::Parser;
use hmpx::{emit, run, Cli, ExitStatus};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.common.out.clone();
    let status = match run(cli).and_then(|outcome| {
        emit(&outcome.text, out.as_deref())?;
        Ok(outcome.status)
    }) {
        Ok(status) => {
            if status == ExitStatus::CheckFailed {
                eprintln!("hmpx: check failed; see report");
            }
            status
        }
        Err(e) => {
            eprintln!("hmpx: {e}");
            e.exit_status()
        }
    };
    ExitCode::from(status.code())
}
