use thiserror::Error;

/// Errors raised by the rigidity toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum RigidityError {
    #[error("framework has no vertices")]
    Empty,

    #[error("dimension must be positive")]
    ZeroDimension,

    #[error("vertex {vertex} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        vertex: usize,
        expected: usize,
        found: usize,
    },

    #[error("vertex {vertex} has a non-finite coordinate")]
    NonFiniteCoordinate { vertex: usize },

    #[error("edge ({0}, {1}) refers to a vertex outside 1..={2}")]
    VertexOutOfRange(usize, usize, usize),

    #[error("edge ({0}, {0}) is a self-loop")]
    SelfLoop(usize),

    #[error("edge ({0}, {1}) appears more than once")]
    DuplicateEdge(usize, usize),

    #[error("edge ({0}, {1}) joins coincident points")]
    CoincidentEndpoints(usize, usize),

    #[error("{expected} labels expected, found {found}")]
    LabelCount { expected: usize, found: usize },

    #[error("the first {count} vertices are affinely dependent; permute the vertices and retry")]
    DegenerateLeadingVertices { count: usize },

    #[error("no permutation of the vertices gives a non-degenerate leading set")]
    NoNonDegeneratePermutation,

    #[error("the flex ladder needs dim K = 1, found dim K = {0}")]
    DimKNotOne(usize),

    #[error("edge {0} has zero length along the trajectory")]
    ZeroLengthEdge(usize),

    #[error("radius {radius} exceeds the safe radius {safe}")]
    RadiusTooLarge { radius: f64, safe: f64 },

    #[error("the origin is not a critical point (gradient norm {0:e})")]
    NotACriticalPoint(f64),

    #[error("growth fit is degenerate: m(r) = {value:e} at r = {radius:e}")]
    DegenerateFit { radius: f64, value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, RigidityError>;
