use thiserror::Error;

use crate::graph::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("no approximant at degrees ({num_degree}, {den_degree})")]
    NoApproximant {
        num_degree: usize,
        den_degree: usize,
    },

    #[error("no stable approximant at order {order}; raise the trace order")]
    NoStableApproximant { order: usize },

    #[error("invalid graph: {}", format_violations(.0))]
    Validation(Vec<Violation>),

    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),

    #[error("unknown edge id `{0}`")]
    UnknownEdge(String),

    #[error("unsupported method: {0}")]
    UnsupportedMethod(String),

    #[error("block shape error: {0}")]
    BlockShape(String),

    #[error("cusp rule violated: {0}")]
    CuspRule(String),

    #[error("{what} {value} out of range (maximum {max})")]
    Range {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("methods disagree: {0}")]
    MethodMismatch(String),

    #[error("root isolation failed: {0}")]
    RootIsolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by malformed input rather than by a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Validation(_)
                | Error::UnknownVertex(_)
                | Error::UnknownEdge(_)
                | Error::BlockShape(_)
                | Error::CuspRule(_)
                | Error::Parse(_)
                | Error::Precondition(_)
        )
    }
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
