use crate::graph::{EdgeId, VertexId};

/// Errors raised by the graph model, the solvers and the reductions.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("malformed rotation system: {0}")]
    MalformedRotation(String),
    #[error("embedding is not planar: {0}")]
    NotPlanarEmbedding(String),
    #[error("operation requires a combinatorial embedding")]
    EmbeddingMissing,
    #[error("operation requires a directed graph")]
    UndirectedInput,
    #[error("operation requires an undirected graph")]
    DirectedInput,
    #[error("graph must be simple: {0}")]
    NotSimple(String),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("edge {0} is not in the graph")]
    UnknownEdge(EdgeId),
    #[error("terminal {0} is not a vertex of the graph")]
    TerminalMissing(VertexId),
    #[error("no perfect matching exists")]
    NoPerfectMatching,
    #[error("instance too large for exhaustive search: {0}")]
    TooLargeForOracle(String),
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("decomposition width {width} exceeds bound {bound}")]
    WidthBoundExceeded { width: usize, bound: usize },
    #[error("dynamic program exceeded its state cap ({0} states)")]
    StateExplosion(usize),
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("drawing is degenerate after {0} perturbation attempts")]
    DegenerateLayout(usize),
    #[error("no face boundary visits both terminals exactly once")]
    WalkNotFound,
    #[error("graph has an odd number of vertices ({0})")]
    OddVertexCount(usize),
    #[error("instance violates a required assumption: {0}")]
    AssumptionViolated(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGraph(_) => "invalid_graph",
            Error::InvalidInput(_) => "invalid_input",
            Error::MalformedRotation(_) => "malformed_rotation",
            Error::NotPlanarEmbedding(_) => "not_planar_embedding",
            Error::EmbeddingMissing => "embedding_missing",
            Error::UndirectedInput => "undirected_input",
            Error::DirectedInput => "directed_input",
            Error::NotSimple(_) => "not_simple",
            Error::UnknownVertex(_) => "unknown_vertex",
            Error::UnknownEdge(_) => "unknown_edge",
            Error::TerminalMissing(_) => "terminal_missing",
            Error::NoPerfectMatching => "no_perfect_matching",
            Error::TooLargeForOracle(_) => "too_large_for_oracle",
            Error::InvalidDecomposition(_) => "invalid_decomposition",
            Error::WidthBoundExceeded { .. } => "width_bound_exceeded",
            Error::StateExplosion(_) => "state_explosion",
            Error::InvalidEpsilon(_) => "invalid_epsilon",
            Error::DegenerateLayout(_) => "degenerate_layout",
            Error::WalkNotFound => "walk_not_found",
            Error::OddVertexCount(_) => "odd_vertex_count",
            Error::AssumptionViolated(_) => "assumption_violated",
            Error::Json(_) => "json",
        }
    }

    /// Whether the error reports a size or state limit rather than a bad instance.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::TooLargeForOracle(_) | Error::StateExplosion(_) | Error::WidthBoundExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
