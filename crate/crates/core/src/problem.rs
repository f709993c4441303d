//! Discretized expectation-value problems `E_p[f] = Σ_x p(x) f(x)` with
//! `f(x) = C x` on the grid `x_j = j / 2^n`, and their state encoding.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::estimator::QueryLedger;
use crate::simulator::{draw_binomial, Statevector, MAX_WIDTH};

/// Slack allowed when checking `max f(x) ≤ 1`.
const ENCODING_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distribution {
    Gaussian { mu: f64, sigma: f64 },
    CauchyLorentz { mu: f64, sigma: f64 },
    /// Log-normal in the shifted argument `c0 + c1 x`.
    LogNormal { c0: f64, c1: f64, mu: f64, sigma: f64 },
}

impl Distribution {
    pub const fn gaussian() -> Self {
        Distribution::Gaussian { mu: 0.5, sigma: 0.1 }
    }

    pub const fn cauchy_lorentz() -> Self {
        Distribution::CauchyLorentz { mu: 0.5, sigma: 0.1 }
    }

    pub const fn log_normal() -> Self {
        Distribution::LogNormal {
            c0: 0.0,
            c1: 10.0,
            mu: 1.5,
            sigma: 0.2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Distribution::Gaussian { .. } => "gaussian",
            Distribution::CauchyLorentz { .. } => "cauchy",
            Distribution::LogNormal { .. } => "lognormal",
        }
    }

    fn sigma(&self) -> f64 {
        match *self {
            Distribution::Gaussian { sigma, .. }
            | Distribution::CauchyLorentz { sigma, .. }
            | Distribution::LogNormal { sigma, .. } => sigma,
        }
    }

    /// Unnormalized weight at `x`.
    fn weight(&self, x: f64) -> f64 {
        match *self {
            Distribution::Gaussian { mu, sigma } => {
                (-(x - mu).powi(2) / (2.0 * sigma * sigma)).exp()
            }
            Distribution::CauchyLorentz { mu, sigma } => sigma / ((x - mu).powi(2) + sigma * sigma),
            Distribution::LogNormal { c0, c1, mu, sigma } => {
                let arg = c0 + c1 * x;
                // density vanishes as arg -> 0+; the x = 0, c0 = 0 point is assigned zero
                if arg <= 0.0 {
                    0.0
                } else {
                    (-(arg.ln() - mu).powi(2) / (2.0 * sigma * sigma)).exp() / arg
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    distribution: Distribution,
    qubits: usize,
    scale: f64,
}

impl ProblemSpec {
    /// `qubits` is the data-register size `n`; `scale` is `C` in `f(x) = C x`.
    pub fn new(distribution: Distribution, qubits: usize, scale: f64) -> Result<Self> {
        if qubits == 0 || qubits + 1 > MAX_WIDTH {
            return Err(Error::InvalidWidth(qubits));
        }
        let sigma = distribution.sigma();
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidConfig(format!("sigma must be positive, got {sigma}")));
        }
        if let Distribution::LogNormal { c0, c1, .. } = distribution {
            if !(c0.is_finite() && c1.is_finite()) || c0 < 0.0 || c0 + c1 * max_grid_point(qubits) <= 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "log-normal argument c0 + c1 x must be positive on the grid (c0 = {c0}, c1 = {c1})"
                )));
            }
            if c1 < 0.0 {
                return Err(Error::InvalidConfig("log-normal c1 must be nonnegative".into()));
            }
        }
        if !(scale >= 0.0 && scale.is_finite()) {
            return Err(Error::InvalidConfig(format!("C must be nonnegative, got {scale}")));
        }
        let max_f = scale * max_grid_point(qubits);
        if max_f > 1.0 + ENCODING_SLACK {
            return Err(Error::EncodingInfeasible(max_f));
        }
        Ok(Self {
            distribution,
            qubits,
            scale,
        })
    }

    pub fn distribution(&self) -> Distribution {
        self.distribution
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    /// Register width including the ancilla.
    pub fn width(&self) -> usize {
        self.qubits + 1
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn grid_size(&self) -> usize {
        1 << self.qubits
    }

    pub fn grid_point(&self, j: usize) -> f64 {
        j as f64 / self.grid_size() as f64
    }

    pub fn f(&self, x: f64) -> f64 {
        self.scale * x
    }

    pub fn max_f(&self) -> f64 {
        self.scale * max_grid_point(self.qubits)
    }
}

fn max_grid_point(qubits: usize) -> f64 {
    let size = (1u64 << qubits) as f64;
    (size - 1.0) / size
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTable(Vec<f64>);

impl ProbabilityTable {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Order-sensitive digest `Σ_j (j + 1) p_j`, useful to compare tables.
    pub fn checksum(&self) -> f64 {
        self.0
            .iter()
            .enumerate()
            .map(|(j, p)| (j + 1) as f64 * p)
            .sum()
    }
}

pub fn tabulate(spec: &ProblemSpec) -> Result<ProbabilityTable> {
    let weights: Vec<f64> = (0..spec.grid_size())
        .map(|j| spec.distribution.weight(spec.grid_point(j)))
        .collect();
    let total: f64 = weights.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::DegenerateDistribution(total));
    }
    Ok(ProbabilityTable(weights.into_iter().map(|w| w / total).collect()))
}

/// Exact amplitude `a = E_p[f]` with its angle `θ = arcsin √a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude {
    pub a: f64,
    pub theta: f64,
}

impl Amplitude {
    pub fn from_a(a: f64) -> Self {
        Self {
            a,
            theta: a.clamp(0.0, 1.0).sqrt().asin(),
        }
    }
}

pub fn exact_amplitude(spec: &ProblemSpec) -> Result<Amplitude> {
    let table = tabulate(spec)?;
    let a = table
        .values()
        .iter()
        .enumerate()
        .map(|(j, p)| p * spec.f(spec.grid_point(j)))
        .sum();
    Ok(Amplitude::from_a(a))
}

/// Builds `|χ₀⟩ = Σ_x √(p(1−f)) |x⟩|0⟩ + √(p f) |x⟩|1⟩`.
pub fn prepare_chi0(spec: &ProblemSpec) -> Result<Statevector> {
    let table = tabulate(spec)?;
    let size = spec.grid_size();
    let mut amps = vec![Complex64::new(0.0, 0.0); 2 * size];
    for (j, &p) in table.values().iter().enumerate() {
        let f = spec.f(spec.grid_point(j));
        if !(-ENCODING_SLACK..=1.0 + ENCODING_SLACK).contains(&f) {
            return Err(Error::EncodingInfeasible(f));
        }
        let f = f.clamp(0.0, 1.0);
        amps[j] = Complex64::new((p * (1.0 - f)).sqrt(), 0.0);
        amps[size + j] = Complex64::new((p * f).sqrt(), 0.0);
    }
    Statevector::from_amplitudes(amps)
}

/// Scales `C` by `factor`, requiring `0 ≤ factor · f(x) ≤ 1` on the grid.
pub fn rescale(spec: &ProblemSpec, factor: f64) -> Result<ProblemSpec> {
    let max_f = factor * spec.max_f();
    if !(factor > 0.0 && factor.is_finite()) || max_f > 1.0 + ENCODING_SLACK {
        return Err(Error::InfeasibleRescaling { factor, max_f });
    }
    Ok(ProblemSpec {
        scale: spec.scale * factor,
        ..*spec
    })
}

/// Frequency estimate of `a` from `shots` depth-one samples of `|χ₀⟩`.
pub fn loose_estimate<R: Rng + ?Sized>(
    spec: &ProblemSpec,
    shots: u64,
    rng: &mut R,
    ledger: &mut QueryLedger,
) -> Result<f64> {
    if shots == 0 {
        return Err(Error::InvalidTrials);
    }
    let a = exact_amplitude(spec)?.a;
    let count = draw_binomial(a.clamp(0.0, 1.0), shots, rng)?;
    ledger.charge_loose(shots);
    Ok(count as f64 / shots as f64)
}
