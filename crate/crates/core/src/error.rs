use thiserror::Error;

/// Errors raised by the library. Every variant corresponds to a violated
/// precondition; none of them are transient.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("size {requested} exceeds the cap of {cap} for {what}")]
    SizeCap {
        what: &'static str,
        requested: usize,
        cap: usize,
    },
    #[error("vertex {vertex} out of range for a tree on 0..={max}")]
    VertexOutOfRange { vertex: usize, max: usize },
    #[error("not an increasing tree: {0}")]
    NotATree(String),
    #[error("empty vertex set")]
    EmptyVertexSet,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("destruction trace has no removal times")]
    MissingTimes,
    #[error("invalid destruction trace: {0}")]
    InvalidTrace(String),
    #[error("unknown statistic `{0}`")]
    UnknownStatistic(String),
    #[error("quadrature did not converge at x = {x} (error estimate {estimate:e})")]
    Quadrature { x: f64, estimate: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
