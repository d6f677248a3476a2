use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("irrep label must be at least 1, got {0}")]
    InvalidIrrep(u32),

    #[error("P1xP1 model requires r >= 2 for a nowhere vanishing moment map, got r = {0}")]
    InvalidTwist(u32),

    #[error("quadrature degree must be at least 1")]
    InvalidDegree,

    #[error("quadrature of degree {degree} needs {nodes} nodes, budget is {budget}")]
    NodeBudgetExceeded {
        degree: usize,
        nodes: usize,
        budget: usize,
    },

    #[error("quadrature self-test failed: character orthogonality error {0:e}")]
    QuadratureSelfTest(f64),

    #[error("quadrature degree {have} is below the required degree {need}")]
    InsufficientQuadrature { have: usize, need: usize },

    #[error("moment map value vanishes")]
    ZeroMoment,

    #[error("operation requires a {expected} point")]
    ModelMismatch { expected: &'static str },

    #[error("chart radius exceeded: |v|/sqrt(k) = {0}")]
    ChartRadius(f64),

    #[error("tangent vector has {got} components, chart needs {want}")]
    TangentDimension { got: usize, want: usize },

    #[error("stabilizer index {index} out of range (size {len})")]
    StabilizerIndex { index: usize, len: usize },

    #[error("stabilizer element {0} is central")]
    CentralElement(usize),

    #[error("near-diagonal expansion needs a stabilizer inside the center")]
    NonCentralStabilizer,

    #[error("level {level} exceeds the dense ladder budget {budget}")]
    LadderBudget { level: usize, budget: usize },

    #[error("dimension-limit integral needs a generically free action (even r), got r = {0}")]
    NotGenericallyFree(u32),

    #[error("{0}")]
    Degenerate(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
