//! Estimation pipelines: classical sampling, maximum-likelihood amplitude
//! estimation on a linear schedule, and the naive / adaptive variational
//! variants that cap circuit depth at `2k + 2` queries.

mod ledger;
mod likelihood;

pub use ledger::{LedgerPoint, QueryLedger};
pub use likelihood::{
    grid_point, log_likelihood, mlae_search, search, LikelihoodGrid, LikelihoodSearch,
    SampleRecord, GRID_POINTS, GRID_SPACING, LOG_CLAMP,
};

use std::f64::consts::PI;

use rand::Rng;

use crate::ansatz::{build_layered, build_minimal, AnsatzSpec, ParameterVector};
use crate::error::{Error, Result};
use crate::grover::{infidelity_against, GroverOracle};
use crate::optimizer::{optimize, OptimizerConfig, VariationalTarget};
use crate::problem::{exact_amplitude, loose_estimate, rescale, Amplitude, ProblemSpec};
use crate::rng::RunRng;
use crate::simulator::{draw_binomial, Statevector};

/// One point of an estimation trace: the estimate using records `0..=m`
/// and the queries spent to obtain them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub m: usize,
    pub theta_hat: f64,
    pub queries: LedgerPoint,
    /// `1 − Re⟨χ_m|sampled state⟩`, for the variational pipelines.
    pub infidelity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateResult {
    pub theta_hat: f64,
    pub a_hat: f64,
    pub ledger: QueryLedger,
    pub trace: Vec<TracePoint>,
    /// Rescaling factor `r_l` (1 unless adaptive).
    pub rescale_factor: f64,
}

impl EstimateResult {
    fn from_trace(trace: Vec<TracePoint>, ledger: QueryLedger, rescale_factor: f64) -> Self {
        let theta_hat = trace.last().map_or(0.0, |p| p.theta_hat);
        Self {
            theta_hat,
            a_hat: theta_hat.sin().powi(2),
            ledger,
            trace,
            rescale_factor,
        }
    }
}

/// Classical frequency estimate from `shots` samples of `|χ₀⟩`.
pub fn run_mc(spec: &ProblemSpec, shots: u64, rng: &mut RunRng) -> Result<EstimateResult> {
    if shots == 0 {
        return Err(Error::InvalidTrials);
    }
    let a = exact_amplitude(spec)?.a;
    let count = draw_binomial(a.clamp(0.0, 1.0), shots, &mut rng.sampling)?;
    let estimate = Amplitude::from_a(count as f64 / shots as f64);
    let mut ledger = QueryLedger::default();
    ledger.charge_sampling(shots);
    let queries = ledger.snapshot(0);
    let trace = vec![TracePoint {
        m: 0,
        theta_hat: estimate.theta,
        queries,
        infidelity: None,
    }];
    let mut result = EstimateResult::from_trace(trace, ledger, 1.0);
    result.a_hat = estimate.a;
    Ok(result)
}

fn sample_record<R: Rng + ?Sized>(
    state: &Statevector,
    m: usize,
    shots: u64,
    rng: &mut R,
) -> Result<SampleRecord> {
    let p = state.ancilla_one_probability()?.clamp(0.0, 1.0);
    SampleRecord::new(m, shots, draw_binomial(p, shots, rng)?)
}

/// MLAE over `m = 0..=max_power`, each power sampled `shots` times at depth `2m + 1`.
pub fn run_mlae(
    spec: &ProblemSpec,
    max_power: usize,
    shots: u64,
    how: LikelihoodSearch,
    rng: &mut RunRng,
) -> Result<EstimateResult> {
    if max_power == 0 || shots == 0 {
        return Err(Error::InvalidConfig("MLAE needs M >= 1 and h >= 1".into()));
    }
    let oracle = GroverOracle::new(spec)?;
    let mut state = oracle.chi0().clone();
    let mut ledger = QueryLedger::default();
    let mut grid = LikelihoodGrid::default();
    let mut trace = Vec::with_capacity(max_power + 1);
    for m in 0..=max_power {
        grid.push(sample_record(&state, m, shots, &mut rng.sampling)?);
        ledger.charge_sampling(shots * (2 * m as u64 + 1));
        trace.push(TracePoint {
            m,
            theta_hat: grid.estimate(how)?,
            queries: ledger.snapshot(m),
            infidelity: None,
        });
        if m < max_power {
            oracle.apply(&mut state, 1)?;
        }
    }
    Ok(EstimateResult::from_trace(trace, ledger, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnsatzChoice {
    /// Layered circuit from `|0⟩`, started from fresh random angles every step.
    Layered { depth: usize },
    /// Six-angle circuit from `|χ₀⟩`, restarted at the identity every step.
    Minimal,
}

impl AnsatzChoice {
    pub fn build(&self, width: usize) -> Result<AnsatzSpec> {
        match *self {
            AnsatzChoice::Layered { depth } => build_layered(width, depth),
            AnsatzChoice::Minimal => build_minimal(width),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Approximation {
    /// Optimize the circuit to approximate `𝒬^k |φ_i⟩`.
    Variational,
    /// Replace `|φ_{i+1}⟩` by `𝒬^k |φ_i⟩` exactly (ideal reference).
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VqaeConfig {
    /// Variational period `k`.
    pub period: usize,
    /// Largest amplification index `M`.
    pub max_power: usize,
    /// Shots `h` per amplification index.
    pub shots: u64,
    /// Winding number `l` of the commensurate angle `π l / k`.
    pub winding: usize,
    pub loose_shots: u64,
    pub ansatz: AnsatzChoice,
    pub optimizer: OptimizerConfig,
    pub charge_variational: bool,
    pub approximation: Approximation,
    pub search: LikelihoodSearch,
}

impl VqaeConfig {
    pub fn naive(period: usize, max_power: usize, shots: u64, depth: usize, optimizer: OptimizerConfig) -> Self {
        Self {
            period,
            max_power,
            shots,
            winding: 1,
            loose_shots: 500_000,
            ansatz: AnsatzChoice::Layered { depth },
            optimizer,
            charge_variational: true,
            approximation: Approximation::Variational,
            search: LikelihoodSearch::default(),
        }
    }

    pub fn adaptive(period: usize, max_power: usize, shots: u64, optimizer: OptimizerConfig) -> Self {
        Self {
            ansatz: AnsatzChoice::Minimal,
            ..Self::naive(period, max_power, shots, 1, optimizer)
        }
    }

    /// Exact `𝒬^k` replacement with no variational cost.
    pub fn ideal(period: usize, max_power: usize, shots: u64) -> Self {
        Self {
            approximation: Approximation::Exact,
            charge_variational: false,
            ..Self::naive(period, max_power, shots, 1, OptimizerConfig::new(1e-3, 1, 0))
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.period == 0 || self.period >= self.max_power {
            return Err(Error::InvalidConfig(format!(
                "period k must satisfy 0 < k < M (k = {}, M = {})",
                self.period, self.max_power
            )));
        }
        if self.shots == 0 {
            return Err(Error::InvalidConfig("shots h must be positive".into()));
        }
        if self.winding == 0 {
            return Err(Error::InvalidConfig("winding l must be at least 1".into()));
        }
        if self.approximation == Approximation::Variational {
            self.optimizer.validate()?;
        }
        Ok(())
    }

    fn validate_adaptive(&self) -> Result<()> {
        self.validate()?;
        if 2 * self.winding >= self.period {
            return Err(Error::InvalidConfig(format!(
                "commensurate angle π l / k must be below π/2 (l = {}, k = {})",
                self.winding, self.period
            )));
        }
        if self.loose_shots == 0 {
            return Err(Error::InvalidConfig("loose_shots must be positive".into()));
        }
        if self.ansatz != AnsatzChoice::Minimal {
            return Err(Error::AnsatzInitMismatch(
                "adaptive VQAE needs the identity-at-zero ansatz acting on |χ₀'⟩",
            ));
        }
        Ok(())
    }
}

/// The sequence of states `𝒬^j |φ_i⟩` visited by the variational loop.
struct Chain<'a> {
    oracle: &'a GroverOracle,
    config: &'a VqaeConfig,
    ansatz: AnsatzSpec,
    init: Statevector,
    current: Statevector,
    exact: Statevector,
    m: usize,
}

impl<'a> Chain<'a> {
    fn new(oracle: &'a GroverOracle, config: &'a VqaeConfig) -> Result<Self> {
        let ansatz = config.ansatz.build(oracle.width())?;
        let init = ansatz.init_state(oracle)?;
        Ok(Self {
            oracle,
            config,
            ansatz,
            init,
            current: oracle.chi0().clone(),
            exact: oracle.chi0().clone(),
            m: 0,
        })
    }

    fn state(&self) -> &Statevector {
        &self.current
    }

    fn infidelity(&self) -> Result<f64> {
        infidelity_against(&self.exact, &self.current)
    }

    /// Moves from step `m` to `m + 1`, running the variational approximation
    /// when `m % k == k − 1`.
    fn advance<R: Rng + ?Sized>(&mut self, rng: &mut R, ledger: &mut QueryLedger) -> Result<()> {
        let k = self.config.period;
        self.oracle.apply(&mut self.exact, 1)?;
        self.oracle.apply(&mut self.current, 1)?;
        if self.m % k == k - 1 && self.config.approximation == Approximation::Variational {
            // current now holds 𝒬^k |φ_i⟩
            let target = VariationalTarget::from_target(self.init.clone(), self.current.clone(), k);
            let start = match self.config.ansatz {
                AnsatzChoice::Minimal => ParameterVector::zeros(self.ansatz.num_params()),
                AnsatzChoice::Layered { .. } => self.ansatz.random_init(rng),
            };
            let mut scratch = QueryLedger::default();
            let charged = if self.config.charge_variational { ledger } else { &mut scratch };
            let outcome = optimize(&self.ansatz, start, &target, &self.config.optimizer, rng, charged)?;
            self.current = self.ansatz.evaluate(&outcome.params, &self.init)?;
        }
        self.m += 1;
        Ok(())
    }
}

/// Runs the variational loop on `oracle`, returning `θ̂_m` per step.
fn drive_vqae(
    oracle: &GroverOracle,
    config: &VqaeConfig,
    rng: &mut RunRng,
    ledger: &mut QueryLedger,
) -> Result<Vec<TracePoint>> {
    let k = config.period;
    let mut chain = Chain::new(oracle, config)?;
    let mut grid = LikelihoodGrid::default();
    let mut trace = Vec::with_capacity(config.max_power + 1);
    for m in 0..=config.max_power {
        let j = (m % k) as u64;
        grid.push(sample_record(chain.state(), m, config.shots, &mut rng.sampling)?);
        ledger.charge_sampling(config.shots * (2 * j + 1));
        trace.push(TracePoint {
            m,
            theta_hat: grid.estimate(config.search)?,
            queries: ledger.snapshot(m),
            infidelity: Some(chain.infidelity()?),
        });
        // a trailing approximation at m = M would never be sampled
        if m < config.max_power {
            chain.advance(&mut rng.optimizer, ledger)?;
        }
    }
    Ok(trace)
}

/// Variational quantum amplitude estimation on `spec` as given.
pub fn run_vqae(spec: &ProblemSpec, config: &VqaeConfig, rng: &mut RunRng) -> Result<EstimateResult> {
    config.validate()?;
    let oracle = GroverOracle::new(spec)?;
    let mut ledger = QueryLedger::default();
    let trace = drive_vqae(&oracle, config, rng, &mut ledger)?;
    Ok(EstimateResult::from_trace(trace, ledger, 1.0))
}

/// Infidelities `I_m`, `m = 0..=M`, of the variational loop without sampling.
pub fn infidelity_trace(spec: &ProblemSpec, config: &VqaeConfig, rng: &mut RunRng) -> Result<Vec<f64>> {
    config.validate()?;
    let oracle = GroverOracle::new(spec)?;
    let mut chain = Chain::new(&oracle, config)?;
    let mut ledger = QueryLedger::default();
    let mut out = Vec::with_capacity(config.max_power + 1);
    for m in 0..=config.max_power {
        out.push(chain.infidelity()?);
        if m < config.max_power {
            chain.advance(&mut rng.optimizer, &mut ledger)?;
        }
    }
    Ok(out)
}

/// `a' = sin²(π l / k)`.
pub fn commensurate_amplitude(period: usize, winding: usize) -> f64 {
    (PI * winding as f64 / period as f64).sin().powi(2)
}

/// Per-rotation phase error `θ' − arcsin √(r a)` left by an inexact rescaling.
pub fn phase_deviation(period: usize, winding: usize, factor: f64, a: f64) -> f64 {
    PI * winding as f64 / period as f64 - (factor * a).clamp(0.0, 1.0).sqrt().asin()
}

/// Maps a phase estimated on the problem rescaled by `factor` back to the
/// original problem: `a = sin²θ' / r`, `θ = arcsin √a`.
pub fn inverse_transform(theta_rescaled: f64, factor: f64) -> Amplitude {
    Amplitude::from_a((theta_rescaled.sin().powi(2) / factor).clamp(0.0, 1.0))
}

/// Adaptive VQAE: loose MC pre-estimate, commensurate rescaling, VQAE with
/// the minimal ansatz, inverse transform.
pub fn run_adaptive(spec: &ProblemSpec, config: &VqaeConfig, rng: &mut RunRng) -> Result<EstimateResult> {
    config.validate_adaptive()?;
    let mut ledger = QueryLedger::default();
    let loose = loose_estimate(spec, config.loose_shots, &mut rng.loose, &mut ledger)?;
    adaptive_from(spec, config, loose, ledger, rng)
}

/// Adaptive VQAE with a caller-supplied loose estimate (no loose queries charged).
pub fn run_adaptive_from_loose(
    spec: &ProblemSpec,
    config: &VqaeConfig,
    loose: f64,
    rng: &mut RunRng,
) -> Result<EstimateResult> {
    config.validate_adaptive()?;
    adaptive_from(spec, config, loose, QueryLedger::default(), rng)
}

fn adaptive_from(
    spec: &ProblemSpec,
    config: &VqaeConfig,
    loose: f64,
    mut ledger: QueryLedger,
    rng: &mut RunRng,
) -> Result<EstimateResult> {
    if loose <= 0.0 {
        return Err(Error::LooseEstimateZero);
    }
    let factor = commensurate_amplitude(config.period, config.winding) / loose;
    let rescaled = rescale(spec, factor)?;
    let oracle = GroverOracle::new(&rescaled)?;
    let mut trace = drive_vqae(&oracle, config, rng, &mut ledger)?;
    for p in &mut trace {
        p.theta_hat = inverse_transform(p.theta_hat, factor).theta;
    }
    Ok(EstimateResult::from_trace(trace, ledger, factor))
}

/// Closed-form query counts: MLAE `h M (M + 2)`, sampling
/// `h k (k+2) ⌊M/k⌋ + h (M%k)(M%k + 2)` and variational
/// `2 n_f n_s n_p (2k + 2) ⌊M/k⌋`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PredictedCosts {
    pub mlae: u64,
    pub sampling: u64,
    pub variational: u64,
}

pub fn predicted_costs(
    max_power: u64,
    period: u64,
    shots: u64,
    trials: u64,
    sweeps: u64,
    num_params: u64,
) -> PredictedCosts {
    let blocks = max_power / period;
    let rest = max_power % period;
    PredictedCosts {
        mlae: shots * max_power * (max_power + 2),
        sampling: shots * period * (period + 2) * blocks + shots * rest * (rest + 2),
        variational: 2 * trials * sweeps * num_params * (2 * period + 2) * blocks,
    }
}

/// Sampling queries actually spent by the variational loop over `m = 0..=M`.
pub fn accumulated_sampling(max_power: u64, period: u64, shots: u64) -> u64 {
    (0..=max_power).map(|m| shots * (2 * (m % period) + 1)).sum()
}
