use thiserror::Error;

/// Structural defects detected while building a [`DirectedTree`](crate::DirectedTree).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree has no nodes")]
    Empty,
    #[error("node {node} is out of range for a tree with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },
    #[error("self loop on node {0}")]
    SelfLoop(usize),
    #[error("node {node} has two parents ({first} and {second})")]
    MultipleParents {
        node: usize,
        first: usize,
        second: usize,
    },
    #[error("no root: every node has a parent")]
    MissingRoot,
    #[error("multiple roots: nodes {first} and {second} have no parent")]
    MultipleRoots { first: usize, second: usize },
    #[error("cycle: node {0} is not reachable from the root")]
    Cycle(usize),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Tree(#[from] TreeError),

    #[error("labelling has {found} entries but the tree has {expected} nodes")]
    LabelLength { expected: usize, found: usize },

    #[error("node {node} does not exist (tree has {node_count} nodes)")]
    InvalidNode { node: usize, node_count: usize },

    #[error("influence bounds need at least 2 nodes, got {0}")]
    BoundsDomain(usize),

    #[error("labelling is not optimal: influence {influence}, optimum {optimum}")]
    NotOptimal { influence: usize, optimum: usize },

    #[error("invalid switch ({from} -> {to}): {reason}")]
    InvalidMove {
        from: usize,
        to: usize,
        reason: &'static str,
    },

    #[error("budget {budget} exceeds node count {node_count}")]
    InvalidBudget { budget: usize, node_count: usize },

    #[error("{what} exceeds the configured limit of {limit}")]
    GuardExceeded { what: String, limit: u64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: cascade '{id}': {source}")]
    Record {
        line: usize,
        id: String,
        #[source]
        source: Box<Error>,
    },

    #[error("line {line}: duplicate cascade id '{id}'")]
    DuplicateId { line: usize, id: String },

    #[error("coordinated node {node} is out of range ({node_count} nodes)")]
    LabelOutOfRange { node: usize, node_count: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
