//! Variational approximation of `𝒬^k |φ_i⟩` by Adam ascent on the overlap
//! objective, with parameter-shift gradients that are either exact or
//! emulate a Hadamard-test measurement.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

use rand::Rng;

use crate::ansatz::{AnsatzSpec, ParameterVector};
use crate::error::{Error, Result};
use crate::estimator::QueryLedger;
use crate::grover::GroverOracle;
use crate::simulator::{draw_binomial, Statevector};

/// Shift used by the two-point gradient rule.
pub const SHIFT: f64 = FRAC_PI_4;

/// Ratio of the two-point difference to `∂F/∂λ_j`.
///
/// `F` is linear in the circuit output and `R_y(λ)` carries `λ/2`, so
/// `f_j(λ) = α cos(λ/2) + β sin(λ/2)` and the difference at `±s` is
/// `4 sin(s/2) f_j′(λ)`, about 1.531 at `s = π/4`.
pub fn shift_gain() -> f64 {
    4.0 * FRAC_PI_8.sin()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    /// Sweeps `n_s`; each sweep updates all parameters at once.
    pub sweeps: usize,
    /// Bernoulli trials `n_f` per objective evaluation; zero means exact.
    pub trials: u64,
}

impl OptimizerConfig {
    pub fn new(learning_rate: f64, sweeps: usize, trials: u64) -> Self {
        Self {
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            sweeps,
            trials,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.sweeps == 0 {
            return Err(Error::InvalidConfig("at least one sweep is required".into()));
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) || self.eps <= 0.0 {
            return Err(Error::InvalidConfig("invalid Adam moment parameters".into()));
        }
        Ok(())
    }

    pub fn is_exact(&self) -> bool {
        self.trials == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    first: Vec<f64>,
    second: Vec<f64>,
    step: u64,
}

impl AdamState {
    pub fn new(len: usize) -> Self {
        Self {
            first: vec![0.0; len],
            second: vec![0.0; len],
            step: 0,
        }
    }

    pub fn steps(&self) -> u64 {
        self.step
    }

    /// One descent step on a loss whose gradient is `grad`.
    pub fn update(&mut self, params: &mut [f64], grad: &[f64], config: &OptimizerConfig) {
        self.step += 1;
        let t = self.step as i32;
        let c1 = 1.0 - config.beta1.powi(t);
        let c2 = 1.0 - config.beta2.powi(t);
        for (((p, g), m), v) in params
            .iter_mut()
            .zip(grad)
            .zip(&mut self.first)
            .zip(&mut self.second)
        {
            *m = config.beta1 * *m + (1.0 - config.beta1) * g;
            *v = config.beta2 * *v + (1.0 - config.beta2) * g * g;
            *p -= config.learning_rate * (*m / c1) / ((*v / c2).sqrt() + config.eps);
        }
    }
}

/// The fixed part of one variational step: the circuit's input state and
/// the state `𝒬^k |φ_i⟩` it should reproduce.
#[derive(Debug, Clone)]
pub struct VariationalTarget {
    init: Statevector,
    target: Statevector,
    power: usize,
}

impl VariationalTarget {
    pub fn new(
        ansatz: &AnsatzSpec,
        oracle: &GroverOracle,
        phi: &Statevector,
        power: usize,
    ) -> Result<Self> {
        let mut target = phi.clone();
        oracle.apply(&mut target, power)?;
        Ok(Self::from_target(ansatz.init_state(oracle)?, target, power))
    }

    /// Uses an already amplified target state.
    pub fn from_target(init: Statevector, target: Statevector, power: usize) -> Self {
        Self { init, target, power }
    }

    pub fn init(&self) -> &Statevector {
        &self.init
    }

    pub fn target(&self) -> &Statevector {
        &self.target
    }

    /// Query depth `2k + 2` of one objective circuit.
    pub fn circuit_depth(&self) -> u64 {
        2 * self.power as u64 + 2
    }

    /// `F(λ) = Re⟨φ_var(λ)|𝒬^k|φ_i⟩`.
    pub fn objective(&self, ansatz: &AnsatzSpec, params: &ParameterVector) -> Result<f64> {
        Ok(ansatz.evaluate(params, &self.init)?.inner_product(&self.target)?.re)
    }
}

/// `F(λ)` from scratch; see [`VariationalTarget`] to reuse the target.
pub fn objective(
    ansatz: &AnsatzSpec,
    params: &ParameterVector,
    oracle: &GroverOracle,
    phi: &Statevector,
    power: usize,
) -> Result<f64> {
    VariationalTarget::new(ansatz, oracle, phi, power)?.objective(ansatz, params)
}

/// Hadamard-test emulation: `s ~ Binomial(n_f, (1 + F)/2)`, returns `2s/n_f − 1`.
pub fn sampled_objective<R: Rng + ?Sized>(exact: f64, trials: u64, rng: &mut R) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidTrials);
    }
    let p = (0.5 * (1.0 + exact)).clamp(0.0, 1.0);
    let s = draw_binomial(p, trials, rng)?;
    Ok(2.0 * s as f64 / trials as f64 - 1.0)
}

fn coordinate_value<R: Rng + ?Sized>(
    ansatz: &AnsatzSpec,
    params: &ParameterVector,
    target: &VariationalTarget,
    j: usize,
    shift: f64,
    trials: u64,
    rng: &mut R,
) -> Result<f64> {
    let mut shifted = params.clone();
    shifted.0[j] += shift;
    let exact = target.objective(ansatz, &shifted)?;
    if trials == 0 {
        Ok(exact)
    } else {
        sampled_objective(exact, trials, rng)
    }
}

/// `f_j(λ_j + π/4) − f_j(λ_j − π/4)`, exact when `trials == 0`.
///
/// No normalization is applied; the result is [`shift_gain`] times `∂F/∂λ_j`.
pub fn parameter_shift<R: Rng + ?Sized>(
    ansatz: &AnsatzSpec,
    params: &ParameterVector,
    j: usize,
    target: &VariationalTarget,
    trials: u64,
    rng: &mut R,
) -> Result<f64> {
    if j >= ansatz.num_params() {
        return Err(Error::IndexOutOfRange {
            index: j,
            count: ansatz.num_params(),
        });
    }
    let plus = coordinate_value(ansatz, params, target, j, SHIFT, trials, rng)?;
    let minus = coordinate_value(ansatz, params, target, j, -SHIFT, trials, rng)?;
    Ok(plus - minus)
}

/// All parameter-shift values at `params`, plus the exact objective there.
fn shift_gradient<R: Rng + ?Sized>(
    ansatz: &AnsatzSpec,
    params: &ParameterVector,
    target: &VariationalTarget,
    trials: u64,
    rng: &mut R,
) -> Result<(f64, Vec<f64>)> {
    if trials == 0 {
        let (value, mut grad) = ansatz.overlap_and_gradient(params, &target.init, &target.target)?;
        let gain = shift_gain();
        grad.iter_mut().for_each(|g| *g *= gain);
        return Ok((value, grad));
    }
    let value = target.objective(ansatz, params)?;
    let grad = (0..ansatz.num_params())
        .map(|j| parameter_shift(ansatz, params, j, target, trials, rng))
        .collect::<Result<Vec<_>>>()?;
    Ok((value, grad))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeOutcome {
    /// Parameters with the highest exact objective seen.
    pub params: ParameterVector,
    pub objective: f64,
    /// Exact objective after each sweep (index 0 is the start point).
    pub history: Vec<f64>,
}

/// Runs `n_s` Adam sweeps maximizing `F` and charges
/// `2 n_f n_p (2k + 2)` queries per sweep to `ledger`.
pub fn optimize<R: Rng + ?Sized>(
    ansatz: &AnsatzSpec,
    params0: ParameterVector,
    target: &VariationalTarget,
    config: &OptimizerConfig,
    rng: &mut R,
    ledger: &mut QueryLedger,
) -> Result<OptimizeOutcome> {
    config.validate()?;
    if params0.len() != ansatz.num_params() {
        return Err(Error::ParameterCountMismatch {
            expected: ansatz.num_params(),
            got: params0.len(),
        });
    }
    let num_params = ansatz.num_params() as u64;
    let per_sweep = 2 * config.trials * num_params * target.circuit_depth();

    let mut adam = AdamState::new(ansatz.num_params());
    let mut params = params0;
    let mut best = (f64::NEG_INFINITY, params.clone());
    let mut history = Vec::with_capacity(config.sweeps + 1);
    let mut loss_grad = vec![0.0; ansatz.num_params()];

    for _ in 0..config.sweeps {
        let (value, grad) = shift_gradient(ansatz, &params, target, config.trials, rng)?;
        ledger.charge_variational(per_sweep);
        history.push(value);
        if value > best.0 {
            best = (value, params.clone());
        }
        for (l, g) in loss_grad.iter_mut().zip(&grad) {
            *l = -g;
        }
        adam.update(&mut params.0, &loss_grad, config);
    }
    let last = target.objective(ansatz, &params)?;
    history.push(last);
    if last > best.0 {
        best = (last, params);
    }
    Ok(OptimizeOutcome {
        params: best.1,
        objective: best.0,
        history,
    })
}
