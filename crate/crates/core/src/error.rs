use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polygon needs at least {min} vertices, got {got}")]
    TooFewVertices { min: usize, got: usize },

    #[error("edge {edge} has zero length")]
    ZeroLengthEdge { edge: usize },

    #[error("edges {first} and {second} intersect")]
    SelfIntersection { first: usize, second: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("points need at least 2 coordinates, got {0}")]
    DimensionTooSmall(usize),

    #[error("coordinate is not finite")]
    NonFinite,

    #[error("line is degenerate: both points coincide")]
    DegenerateLine,

    #[error("vertex {0} is an endpoint of an open polygon and has no angle")]
    EndpointVertex(usize),

    #[error("vertex index {index} out of range for {count} vertices")]
    VertexOutOfRange { index: usize, count: usize },

    #[error("arc length {s} outside [0, {length}]")]
    ArcLengthOutOfRange { s: f64, length: f64 },

    #[error("point is not on the polygon (distance {0:e})")]
    NotOnPolygon(f64),

    #[error("polygon has not been validated")]
    Unvalidated,

    #[error("truncation radius {delta} too large for edge {edge} (limit {limit})")]
    InvalidTruncation { delta: f64, edge: usize, limit: f64 },

    #[error("invalid quadrature spec: {0}")]
    InvalidQuadrature(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dyadic series decreases at level {0}")]
    NonMonotone(usize),

    #[error("polygon has no corner (every vertex is straight)")]
    NoCorner,

    #[error("p = {p} is not below the finiteness threshold {threshold}")]
    AboveThreshold { p: f64, threshold: f64 },

    #[error("malformed polygon file: {0}")]
    MalformedJson(String),

    #[error("malformed series file: {0}")]
    MalformedSeries(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable tag, used by the command line diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::TooFewVertices { .. } => "too_few_vertices",
            Error::ZeroLengthEdge { .. } => "zero_length_edge",
            Error::SelfIntersection { .. } => "self_intersection",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::DimensionTooSmall(_) => "dimension_too_small",
            Error::NonFinite => "non_finite",
            Error::DegenerateLine => "degenerate_line",
            Error::EndpointVertex(_) => "endpoint_vertex",
            Error::VertexOutOfRange { .. } => "vertex_out_of_range",
            Error::ArcLengthOutOfRange { .. } => "arc_length_out_of_range",
            Error::NotOnPolygon(_) => "not_on_polygon",
            Error::Unvalidated => "unvalidated",
            Error::InvalidTruncation { .. } => "invalid_truncation",
            Error::InvalidQuadrature(_) => "invalid_quadrature",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::NonMonotone(_) => "non_monotone",
            Error::NoCorner => "no_corner",
            Error::AboveThreshold { .. } => "above_threshold",
            Error::MalformedJson(_) => "malformed_json",
            Error::MalformedSeries(_) => "malformed_series",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
