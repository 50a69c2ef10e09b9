//! End-to-end dataset generation: answers, questions, candidate sets, split.

mod config;
mod generate;
mod record;
mod report;

use std::fmt::Display;
use std::io;
use std::path::{Path, PathBuf};

pub use config::{PipelineConfig, MAX_CANDIDATES, MIN_CANDIDATES};
pub use generate::{
    dev_membership, generate, generate_dataset, Generation, MentionSource, PassageOutcome, Resources, SampleOutcome,
    Split, DEV_FILE, REPORT_FILE, TRAIN_FILE,
};
pub use record::McqaSample;
pub use report::{stats, zero_qtype_counts, DatasetStats, QtypeCounts, RunReport, SplitCounts};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("config: {0}")]
    Config(String),
    #[error("resource: {0}")]
    Resource(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl PipelineError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        Self::Io { path: path.to_owned(), source }
    }

    pub(crate) fn resource(e: impl Display) -> Self {
        Self::Resource(e.to_string())
    }

    pub(crate) fn corpus(e: crate::corpus::CorpusError) -> Self {
        match e {
            crate::corpus::CorpusError::Io { path, source } => Self::Io { path, source },
            other => Self::Resource(other.to_string()),
        }
    }

    /// Process exit code: 1 config, 2 missing or invalid resource, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 1,
            Self::Resource(_) => 2,
            Self::Io { .. } => 3,
        }
    }
}
