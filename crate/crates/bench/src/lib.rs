//! Fixtures shared by the criterion benches.

use vqae_core::optimizer::VariationalTarget;
use vqae_core::{build_layered, Distribution, GroverOracle, ParameterVector, ProblemSpec, RunRng, Statevector};

pub fn gaussian(qubits: usize) -> ProblemSpec {
    ProblemSpec::new(Distribution::gaussian(), qubits, 1.0).expect("valid gaussian problem")
}

pub fn oracle(qubits: usize) -> GroverOracle {
    GroverOracle::new(&gaussian(qubits)).expect("oracle builds")
}

/// A layered circuit at random angles and the target `𝒬 |χ0⟩` for one step.
pub struct Step {
    pub ansatz: vqae_core::AnsatzSpec,
    pub params: ParameterVector,
    pub target: VariationalTarget,
}

pub fn step(qubits: usize, depth: usize, seed: u64) -> Step {
    let oracle = oracle(qubits);
    let ansatz = build_layered(oracle.width(), depth).expect("ansatz builds");
    let params = ansatz.random_init(&mut RunRng::new(seed, 0).optimizer);
    let phi: Statevector = oracle.chi0().clone();
    let target = VariationalTarget::new(&ansatz, &oracle, &phi, 1).expect("target builds");
    Step { ansatz, params, target }
}
