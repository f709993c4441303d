//! Statevector simulation of variational quantum amplitude estimation.
//!
//! The workspace's shared types live here; the CLI and benches re-use them.

pub mod ansatz;
pub mod error;
pub mod estimator;
pub mod experiment;
pub mod grover;
pub mod optimizer;
pub mod problem;
pub mod rng;
pub mod simulator;

pub use ansatz::{build_layered, build_minimal, AnsatzSpec, GateSlot, InitState, ParameterVector};
pub use error::{Error, Result};
pub use estimator::{
    run_adaptive, run_mc, run_mlae, run_vqae, AnsatzChoice, Approximation, EstimateResult,
    LedgerPoint, LikelihoodSearch, QueryLedger, SampleRecord, TracePoint, VqaeConfig,
};
pub use grover::GroverOracle;
pub use optimizer::OptimizerConfig;
pub use problem::{Distribution, ProblemSpec};
pub use rng::RunRng;
pub use simulator::{QubitIndex, Statevector};
pub use experiment::{run_sweep, Estimator, Sweep, SweepRow};
