//! Reproducible random streams: one root seed per run, one ChaCha stream per
//! (repetition, purpose) pair.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PURPOSES: u64 = 4;
const SAMPLING: u64 = 0;
const OPTIMIZER: u64 = 1;
const LOOSE: u64 = 2;

fn stream(root: u64, repetition: u64, purpose: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(root);
    rng.set_stream(repetition * PURPOSES + purpose);
    rng
}

/// The independent streams consumed by one estimation run.
#[derive(Debug, Clone)]
pub struct RunRng {
    /// Ancilla measurements.
    pub sampling: ChaCha8Rng,
    /// Parameter initialization and Hadamard-test emulation.
    pub optimizer: ChaCha8Rng,
    /// Loose pre-estimate for rescaling.
    pub loose: ChaCha8Rng,
}

impl RunRng {
    pub fn new(root: u64, repetition: u64) -> Self {
        Self {
            sampling: stream(root, repetition, SAMPLING),
            optimizer: stream(root, repetition, OPTIMIZER),
            loose: stream(root, repetition, LOOSE),
        }
    }
}
