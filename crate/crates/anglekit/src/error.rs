use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("empty face not allowed here")]
    EmptyFace,

    #[error("not a face of this polytope")]
    NotAFace,

    #[error("sampling budget is zero and no exact shortcut applies")]
    EmptyBudget,

    #[error("poset is not graded: {0}")]
    NotGraded(String),

    #[error("incidence functions live on different posets")]
    HostMismatch,

    #[error("map is not a rank-preserving order-preserving surjection: {0}")]
    BadPosetMap(String),

    #[error(
        "pushforward fiber condition violated at (q={q}, q'={qp}): fibers {p1} and {p2} disagree"
    )]
    FiberCondition { q: String, qp: String, p1: String, p2: String },

    #[error("incidence function is not unipotent at {0}")]
    NotUnipotent(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
