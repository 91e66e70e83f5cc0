//! Command-line front end for MGA experiments: runs, sweeps, merges,
//! dispatch audits, and CSV/JSON/SVG report bundles.

pub mod bundle;
pub mod cli;
pub mod figures;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config or inputs. Exit code 1.
    #[error("{0}")]
    Usage(String),
    /// The requested work failed. Exit code 2.
    #[error("{0}")]
    Run(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Run(_) => 2,
        }
    }
}

impl From<mga_core::harness::HarnessError> for CliError {
    fn from(e: mga_core::harness::HarnessError) -> Self {
        use mga_core::harness::HarnessError;
        match e {
            HarnessError::Config(_) | HarnessError::Incompatible(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Run(e.to_string()),
        }
    }
}
