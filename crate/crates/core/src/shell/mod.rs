//! Stream ingestion, persisted forecasting artifacts, run configuration and
//! the end-to-end recognize / learn / forecast pipelines.

mod artifact;
mod config;
mod ingest;
mod session;

pub use artifact::{ArtifactDocument, LearnedArtifact, ARTIFACT_FORMAT, ARTIFACT_VERSION};
pub use config::{OutputFormat, RunConfig};
pub use ingest::{parse_csv, parse_jsonl, parse_jsonl_line, Diagnostic, Ingested, StreamFormat};
pub use session::{learn, recognize, windowed, ForecastRecord, ForecastSession, Recognizer};

use crate::automaton::AutomatonError;
use crate::compiler::CompileError;
use crate::forecast::ForecastError;
use crate::pattern::PatternError;

#[derive(Debug, thiserror::Error)]
pub enum ShellError {
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Forecast(#[from] ForecastError),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Format(String),
}
