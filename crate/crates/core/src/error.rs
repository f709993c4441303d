use thiserror::Error;

/// Errors produced by the simulation and estimation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} out of range (limit {limit})")]
    InvalidIndex { index: usize, limit: usize },
    #[error("control and target are the same qubit ({0})")]
    SameQubit(usize),
    #[error("width mismatch: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },
    #[error("invalid width {0}")]
    InvalidWidth(usize),
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("distribution is degenerate on the grid (unnormalized sum {0})")]
    DegenerateDistribution(f64),
    #[error("encoding infeasible: f(x) = {0} outside [0, 1]")]
    EncodingInfeasible(f64),
    #[error("rescaling by {factor} is infeasible: max f'(x) = {max_f}")]
    InfeasibleRescaling { factor: f64, max_f: f64 },
    #[error("expected {expected} parameters, got {got}")]
    ParameterCountMismatch { expected: usize, got: usize },
    #[error("number of trials must be positive")]
    InvalidTrials,
    #[error("parameter index {index} out of range (n_p = {count})")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("no measurement records")]
    EmptyRecords,
    #[error("ansatz initial state incompatible with this estimator: {0}")]
    AnsatzInitMismatch(&'static str),
    #[error("loose amplitude estimate is zero, cannot rescale")]
    LooseEstimateZero,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
