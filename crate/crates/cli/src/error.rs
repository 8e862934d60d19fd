use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qchardy_core::Error),

    #[error("unknown experiment `{0}` (expected one of thm1, thm2, thm3, thmA, lemma1, af_conformal)")]
    UnknownExperiment(String),

    #[error("unknown output format `{0}` (expected csv or json)")]
    UnknownFormat(String),

    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),

    #[error("experiment {experiment} cannot run on map {map}: {reason}")]
    InvalidPairing {
        experiment: String,
        map: String,
        reason: String,
    },

    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
