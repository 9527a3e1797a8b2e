//! Command-line driver for `hmpx-core`: model files, a threaded executor,
//! and CSV/JSON reports.

pub mod cli;
pub mod commands;
pub mod error;
pub mod executor;
pub mod model_file;
pub mod report;

use std::fs;
use std::path::Path;

pub use cli::{Cli, RunConfig};
pub use commands::{execute, Outcome};
pub use error::{CliError, ExitStatus};
pub use executor::ThreadExecutor;
pub use model_file::{load_model, ModelFile};

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> error::Result<()> {
    use std::io::Write;
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Write { path: p.to_owned(), source }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Write { path: "<stdout>".into(), source }),
    }
}

/// Resolves the configuration for a parsed command line and executes it.
pub fn run(cli: Cli) -> error::Result<Outcome> {
    let workers = std::thread::available_parallelism().map_or(1, usize::from);
    let config = RunConfig::resolve(cli, workers)?;
    execute(config)
}
