//! Command-line front end: argument handling, run orchestration, figure
//! presets and artifact emission (CSV, SVG, run manifest).

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod args;
pub mod commands;
pub mod manifest;
pub mod reproduce;
pub mod svg;

use std::path::PathBuf;

use bubblewave::Error as CoreError;

pub use manifest::RunManifest;
pub use svg::{emit_svg, Plot, Series};

/// Exit codes of the `bubblewave` binary.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const NUMERICAL: i32 = 2;
    pub const IO: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// Monitor violation, nonfinite state or a failed integration.
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("I/O error on {path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => exit::USAGE,
            Self::Numerical(_) => exit::NUMERICAL,
            Self::Io { .. } => exit::IO,
        }
    }

    pub fn io(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        Self::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Io(io) => Self::Io {
                path: PathBuf::new(),
                message: io.to_string(),
            },
            CoreError::Degenerate { .. }
            | CoreError::CorrectorDiverged { .. }
            | CoreError::NonFinite { .. }
            | CoreError::BubbleFailure { .. }
            | CoreError::MicroStepOverflow { .. }
            | CoreError::NonPositiveRadius(_) => Self::Numerical(e.to_string()),
            other => Self::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code. Messages go to stdout/stderr.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let matches = match args::command().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    exit::OK
                }
                _ => exit::USAGE,
            };
            let _ = e.print();
            return if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                exit::USAGE
            } else {
                code
            };
        }
    };
    match commands::run(&matches) {
        Ok(manifest) => {
            println!("{}", manifest.summary());
            exit::OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
