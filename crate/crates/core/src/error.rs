use thiserror::Error;

use crate::edges::Mode;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{mode} mode is not valid for asymmetric instance `{instance}`")]
    Mode { mode: Mode, instance: String },

    #[error("invalid tour: {0}")]
    InvalidTour(String),

    #[error("tracker state error: {0}")]
    State(String),

    #[error("ordered greedy stalled after {committed} commits: {detail} (order: {order:?})")]
    Infeasible {
        committed: usize,
        detail: String,
        order: Vec<usize>,
    },

    #[error("brute force refused: n = {n} exceeds the cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
