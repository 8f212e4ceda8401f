use thiserror::Error;

/// Errors raised by complex construction, sheaf construction and the analysis layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate cell id `{0}`")]
    DuplicateId(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdgeId(String),
    #[error("duplicate covering relation {upper} > {lower} (slot {slot})")]
    DuplicateRelation {
        upper: String,
        lower: String,
        slot: u32,
    },
    #[error("relation {upper} > {lower} references an unknown cell")]
    DanglingRelation { upper: String, lower: String },
    #[error("covering relations contain a cycle through `{0}`")]
    CycleDetected(String),
    #[error(
        "rank must strictly decrease along {upper} > {lower} (ranks {upper_rank} and {lower_rank})"
    )]
    RankViolation {
        upper: String,
        lower: String,
        upper_rank: u32,
        lower_rank: u32,
    },
    #[error("edge `{edge}` has unknown endpoint `{endpoint}`")]
    UnknownEndpoint { edge: String, endpoint: String },
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error("no covering relation {upper} > {lower} (slot {slot})")]
    UnknownRelation {
        upper: String,
        lower: String,
        slot: u32,
    },
    #[error("cell `{0}` has no stalk")]
    MissingStalk(String),
    #[error("relation {upper} > {lower} (slot {slot}) has no restriction map")]
    MissingMap {
        upper: String,
        lower: String,
        slot: u32,
    },
    #[error("restriction map {upper} > {lower} (slot {slot}) is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    ShapeMismatch {
        upper: String,
        lower: String,
        slot: u32,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("`{upper}` does not lie above `{lower}`")]
    IncomparableCells { upper: String, lower: String },
    #[error("dimension mismatch at {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        actual: usize,
    },
    #[error("`{0}` is not a maximal cell")]
    NotMaximal(String),
    #[error("no value given for cell `{0}`")]
    MissingCellValue(String),
    #[error("matrix contains a non-finite entry")]
    NonFiniteEntry,
    #[error("cell `{cell}` has {count} composite upper relations; at most 2 are supported")]
    UnsupportedShape { cell: String, count: usize },
    #[error("assignment is inconsistent at `{cell}` (residual {residual:e})")]
    InconsistentAssignment { cell: String, residual: f64 },
    #[error("cover has no intervals")]
    EmptyCover,
    #[error("interval ({left}, {right}) contains no grid samples")]
    DegenerateGrid { left: f64, right: f64 },
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error(
        "local data disagree at grid index {index}: values {values:?}, difference {difference}"
    )]
    GlueConflict {
        index: usize,
        values: Vec<f64>,
        difference: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
