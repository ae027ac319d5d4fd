use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid cost policy: {0}")]
    Policy(String),

    #[error("invalid scenario set: {0}")]
    Scenario(String),

    #[error("structural error: {0}")]
    Structure(String),

    #[error("invalid instance: {0}")]
    Instance(String),

    #[error("element {element} is covered by no set")]
    Uncoverable { element: usize },

    #[error("terminal {0} is unreachable from the root")]
    Unreachable(usize),

    #[error("infeasible input: {0}")]
    Infeasible(String),

    #[error("LP solve ended with status {0:?}")]
    LpStatus(crate::lp::LpStatus),

    #[error("instance exceeds oracle size cap: {0}")]
    OracleCap(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("sampler failed: {0}")]
    Sampler(String),

    #[error("SAA repetition {rep} failed: {source}")]
    Repetition {
        rep: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
