use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("edge capacity is undefined for non-positive distance {0} km")]
    NonPositiveDistance(f64),

    #[error("unknown node {node} (graph has {node_count} nodes)")]
    UnknownNode { node: usize, node_count: usize },

    #[error("source and target must differ (both are node {0})")]
    SameEndpoints(usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("malformed graph document: {0}")]
    Document(String),

    #[error(
        "quadrature did not converge within {intervals} subintervals \
         (estimate {estimate:e}, error {error:e}, requested {requested:e})"
    )]
    Quadrature {
        intervals: usize,
        estimate: f64,
        error: f64,
        requested: f64,
    },

    #[error("target {target} is not bracketed on [{lo:e}, {hi:e}] (f(lo) = {f_lo:e}, f(hi) = {f_hi:e})")]
    NotBracketed {
        target: f64,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid experiment config: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParam {
        name,
        reason: reason.into(),
    }
}
