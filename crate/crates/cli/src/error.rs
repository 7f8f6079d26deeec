//! Every error in this crate is a configuration or IO problem and maps to
//! exit code 2; verification failures are not errors but an explicit
//! outcome, so a failing lemma never masquerades as a broken invocation.

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] matrix_tails::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
