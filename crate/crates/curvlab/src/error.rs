//! Library error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CurvError {
    #[error("intrinsic dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("torus side lengths must be positive and finite")]
    InvalidSideLength,

    #[error("log map undefined: distance {distance} >= injectivity radius {injectivity_radius}")]
    LogMapOutOfRange {
        distance: f64,
        injectivity_radius: f64,
    },

    #[error("node {0} is isolated; its neighborhood measure is undefined")]
    IsolatedNode(usize),

    #[error("edge ({0}, {1}) is not present in the graph")]
    NotAnEdge(usize, usize),

    #[error("transport problem is mass-imbalanced: {0}")]
    MassImbalance(String),

    #[error("brute-force oracle limited to supports of size <= {limit}, got {got}")]
    SupportTooLarge { limit: usize, got: usize },

    #[error("invalid discrete measure: {0}")]
    InvalidMeasure(String),

    #[error("edge weight must be positive, got {0}")]
    NonPositiveWeight(f64),

    #[error("graph has no edges")]
    EdgelessGraph,

    #[error(
        "connectivity threshold {epsilon} is not below the injectivity radius {injectivity_radius}"
    )]
    EpsilonTooLarge {
        epsilon: f64,
        injectivity_radius: f64,
    },

    #[error("manifold curvature estimate undefined for coincident points")]
    CoincidentPoints,

    #[error("graph carries no manifold metadata, required for {0}")]
    MissingManifold(&'static str),

    #[error("graph file is malformed: {0}")]
    MalformedGraphFile(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
