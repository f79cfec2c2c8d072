//! Command-line front end for `pil-core`.
//!
//! [`parse_config`] turns argv into a validated [`RunConfig`], [`run`] does the
//! work and [`emit`] serializes the result. [`execute`] strings the three
//! together and maps failures to exit codes.

mod config;
mod emit;
mod run;

use std::io::Write;
use std::path::Path;

pub use config::{parse_config, Format, RunConfig, Task};
pub use emit::{emit, to_json_bytes, Table};
pub use run::{run, Output};

/// Format version of the emitted JSON; bumped on any breaking schema change.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Rendered `--help` or `--version` text.
    #[error("{0}")]
    Help(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] pil_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub(crate) fn usage(flag: &str, msg: impl std::fmt::Display) -> Self {
        CliError::Usage(format!("{flag}: {msg}"))
    }

    /// 0 ok or help, 1 usage or invalid input, 2 numerical failure, 3 insufficient depth.
    pub fn exit_code(&self) -> i32 {
        use pil_core::Error;
        match self {
            CliError::Help(_) => 0,
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Core(Error::InsufficientDepth(_)) => 3,
            CliError::Core(e) if e.is_numerical() || matches!(e, Error::Pole(_)) => 2,
            CliError::Core(_) => 1,
        }
    }
}

/// Runs a parsed config and writes its artifact. Returns the exit code.
pub fn execute(config: &RunConfig) -> i32 {
    let result = run(config).and_then(|out| {
        let bytes = emit(&out, config.format)?;
        write_artifact(config.out.as_deref(), &bytes)
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn write_artifact(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

/// Installs the logger; `PIL_LOG` is one of `quiet`, `info`, `debug`.
pub fn init_logging() {
    let level = match std::env::var("PIL_LOG").as_deref() {
        Ok("quiet") => log::LevelFilter::Off,
        Ok("info") => log::LevelFilter::Info,
        Ok("debug") => log::LevelFilter::Debug,
        _ => log::LevelFilter::Warn,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .try_init();
}
