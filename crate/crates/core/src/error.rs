use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty domain: {0}")]
    EmptyDomain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("resource limit: {what} needs {estimate} states (cap {cap})")]
    ResourceLimit {
        what: String,
        estimate: u128,
        cap: u128,
    },

    #[error(
        "triangle inequality fails: d({i},{l}) = {direct} > d({i},{j}) + d({j},{l}) = {detour}"
    )]
    TriangleViolation {
        i: usize,
        j: usize,
        l: usize,
        direct: f64,
        detour: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
