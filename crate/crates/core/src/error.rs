use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// What went wrong while reading a TSPLIB file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing DIMENSION header")]
    MissingDimension,
    #[error("missing EDGE_WEIGHT_TYPE header")]
    MissingEdgeWeightType,
    #[error("unsupported EDGE_WEIGHT_TYPE `{0}`")]
    UnsupportedEdgeWeightType(String),
    #[error("missing {0}")]
    MissingSection(&'static str),
    #[error("expected {expected} coordinates, found {found}")]
    CoordinateCount { expected: usize, found: usize },
    #[error("malformed numeric token `{0}`")]
    MalformedNumber(String),
    #[error("node id {0} out of range")]
    NodeIdOutOfRange(i64),
    #[error("node id {0} listed twice")]
    DuplicateNode(usize),
    #[error("expected {expected} tour entries, found {found}")]
    TourCount { expected: usize, found: usize },
    #[error("malformed line `{0}`")]
    MalformedLine(String),
}

/// A TSPLIB parse failure with the 1-based line it was detected on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn new(line: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, kind }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("unsupported bit width {0}, expected 2, 3 or 4")]
    UnsupportedBitWidth(u32),

    #[error("need at least {min} nodes, got {got}")]
    TooFewNodes { min: usize, got: usize },

    #[error("node count {got} exceeds the limit of {max}")]
    TooManyNodes { max: usize, got: usize },

    #[error("coordinate of node {0} is not finite")]
    NonFiniteCoordinate(usize),

    #[error("distance between nodes {0} and {1} overflows the integer range")]
    DistanceOverflow(usize, usize),

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("cluster count {k} out of range 1..={n}")]
    ClusterCount { k: usize, n: usize },

    #[error("maximum cluster size must be at least {min}, got {got}")]
    ClusterSize { min: usize, got: usize },

    #[error("order {order} cannot be optimized (valid orders {lo}..={hi})")]
    OrderNotOptimizable { order: usize, lo: usize, hi: usize },

    #[error("city {city} cannot be placed at order {order}: {reason}")]
    InvalidPlacement {
        order: usize,
        city: usize,
        reason: &'static str,
    },

    #[error("empty candidate set")]
    EmptyCandidates,

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("path endpoints invalid: {0}")]
    InvalidEndpoints(String),

    #[error("child path {index} does not run from {expected_entry} to {expected_exit}")]
    EndpointMismatch {
        index: usize,
        expected_entry: usize,
        expected_exit: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),
}
