use thiserror::Error;

/// Failures on malformed input. A match that merely falls outside the
/// domain of a rewriting process is not an error; see [`crate::system::Step`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("edge `{edge}` references unknown node `{node}`")]
    DanglingEndpoint { edge: String, node: String },

    #[error("duplicate id `{0}`")]
    DuplicateId(String),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("unknown edge `{0}`")]
    UnknownEdge(String),

    #[error("morphism is not total: `{0}` has no image")]
    NotTotal(String),

    #[error("morphism does not preserve structure at `{0}`")]
    NotStructurePreserving(String),

    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    #[error("not a subgraph: {0}")]
    NotSubgraph(String),

    #[error("invalid rule: {0}")]
    InvalidRule(String),

    #[error("inadmissible match: {0}")]
    InadmissibleMatch(String),

    #[error("node `{node}` labelled `{label}` has {found} successors, arity is {arity}")]
    ArityMismatch {
        node: String,
        label: String,
        arity: usize,
        found: usize,
    },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("unlabelled node `{0}` has successors")]
    UnlabelledWithSuccessors(String),

    #[error("size cap exceeded: {0}")]
    CapExceeded(String),

    #[error("{0}")]
    Other(String),
}

pub type Result<T, E = RewriteError> = std::result::Result<T, E>;
