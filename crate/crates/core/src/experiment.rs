//! Repetition sweeps, RMS aggregation and log-log fits.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimator::{
    infidelity_trace, run_adaptive, run_mc, run_mlae, run_vqae, Approximation, EstimateResult,
    LedgerPoint, VqaeConfig,
};
use crate::problem::{exact_amplitude, ProblemSpec};
use crate::rng::RunRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    Mc,
    Mlae,
    VqaeNaive,
    VqaeAdaptive,
    VqaeIdeal,
}

impl Estimator {
    pub const ALL: [Estimator; 5] = [
        Estimator::Mc,
        Estimator::Mlae,
        Estimator::VqaeNaive,
        Estimator::VqaeAdaptive,
        Estimator::VqaeIdeal,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Estimator::Mc => "mc",
            Estimator::Mlae => "mlae",
            Estimator::VqaeNaive => "vqae-naive",
            Estimator::VqaeAdaptive => "vqae-adaptive",
            Estimator::VqaeIdeal => "vqae-ideal",
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Estimator::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown estimator '{s}'")))
    }
}

/// One repetition. `mc_shots` is used by [`Estimator::Mc`] only.
pub fn run_repetition(
    spec: &ProblemSpec,
    estimator: Estimator,
    config: &VqaeConfig,
    mc_shots: u64,
    seed: u64,
    rep: u64,
) -> Result<EstimateResult> {
    let mut rng = RunRng::new(seed, rep);
    match estimator {
        Estimator::Mc => run_mc(spec, mc_shots, &mut rng),
        Estimator::Mlae => run_mlae(spec, config.max_power, config.shots, config.search, &mut rng),
        Estimator::VqaeNaive => run_vqae(spec, config, &mut rng),
        Estimator::VqaeIdeal => {
            let ideal = VqaeConfig {
                approximation: Approximation::Exact,
                charge_variational: false,
                ..*config
            };
            run_vqae(spec, &ideal, &mut rng)
        }
        Estimator::VqaeAdaptive => run_adaptive(spec, config, &mut rng),
    }
}

/// Aggregate over repetitions of one trace point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub m: usize,
    pub queries: LedgerPoint,
    /// RMS of `θ̂ − θ` over repetitions.
    pub delta_theta: f64,
    pub infidelity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub spec: ProblemSpec,
    pub estimator: Estimator,
    pub config: VqaeConfig,
    /// Shot counts for the MC estimator, one row each.
    pub mc_shots: Vec<u64>,
    pub reps: u64,
    pub seed: u64,
}

fn repetitions(sweep: &Sweep, mc_shots: u64) -> Result<Vec<EstimateResult>> {
    (0..sweep.reps)
        .into_par_iter()
        .map(|rep| run_repetition(&sweep.spec, sweep.estimator, &sweep.config, mc_shots, sweep.seed, rep))
        .collect()
}

/// Runs every repetition (in parallel on the current rayon pool) and reduces
/// them in repetition order, so rows do not depend on scheduling.
pub fn run_sweep(sweep: &Sweep) -> Result<Vec<SweepRow>> {
    if sweep.reps == 0 {
        return Err(Error::InvalidConfig("reps must be at least 1".into()));
    }
    let theta = exact_amplitude(&sweep.spec)?.theta;
    if sweep.estimator == Estimator::Mc {
        if sweep.mc_shots.is_empty() {
            return Err(Error::InvalidConfig("MC sweep needs at least one shot count".into()));
        }
        return sweep
            .mc_shots
            .iter()
            .enumerate()
            .map(|(i, &shots)| {
                let results = repetitions(sweep, shots)?;
                let errors: Vec<f64> = results.iter().map(|r| r.theta_hat - theta).collect();
                Ok(SweepRow {
                    m: i,
                    queries: results[0].trace[0].queries,
                    delta_theta: rms(&errors),
                    infidelity: None,
                })
            })
            .collect();
    }
    let results = repetitions(sweep, 0)?;
    let len = results[0].trace.len();
    Ok((0..len)
        .map(|t| {
            let errors: Vec<f64> = results.iter().map(|r| r.trace[t].theta_hat - theta).collect();
            let infidelity = results[0].trace[t].infidelity.map(|_| {
                results.iter().filter_map(|r| r.trace[t].infidelity).sum::<f64>() / results.len() as f64
            });
            SweepRow {
                m: results[0].trace[t].m,
                queries: results[0].trace[t].queries,
                delta_theta: rms(&errors),
                infidelity,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfidelityRow {
    pub depth: usize,
    pub m: usize,
    pub mean: f64,
    /// Standard error of the mean over initializations.
    pub sem: f64,
    pub inits: u64,
}

/// Infidelity traces of the naive loop for each layered depth, averaged over
/// `inits` random initializations.
pub fn infidelity_study(
    spec: &ProblemSpec,
    config: &VqaeConfig,
    depths: &[usize],
    inits: u64,
    seed: u64,
) -> Result<Vec<InfidelityRow>> {
    if inits == 0 {
        return Err(Error::InvalidConfig("at least one initialization is required".into()));
    }
    let mut rows = Vec::new();
    for &depth in depths {
        let cfg = VqaeConfig {
            ansatz: crate::estimator::AnsatzChoice::Layered { depth },
            ..*config
        };
        let traces: Vec<Vec<f64>> = (0..inits)
            .into_par_iter()
            .map(|i| infidelity_trace(spec, &cfg, &mut RunRng::new(seed, i)))
            .collect::<Result<_>>()?;
        for m in 0..traces[0].len() {
            let values: Vec<f64> = traces.iter().map(|t| t[m]).collect();
            let (mean, sem) = mean_sem(&values);
            rows.push(InfidelityRow {
                depth,
                m,
                mean,
                sem,
                inits,
            });
        }
    }
    Ok(rows)
}

pub fn rms(values: &[f64]) -> f64 {
    (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt()
}

/// Mean and standard error (sample standard deviation over `√n`).
pub fn mean_sem(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Least-squares slope and intercept of `y` on `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly).0
}

/// Distinct rounded values `10^(lo + i/per_decade)` from `10^lo` to `10^hi`.
pub fn log_spaced(lo: u32, hi: u32, per_decade: u32) -> Vec<u64> {
    let steps = (hi - lo) * per_decade;
    let mut out: Vec<u64> = (0..=steps)
        .map(|i| 10f64.powf(lo as f64 + i as f64 / per_decade as f64).round() as u64)
        .collect();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::OptimizerConfig;
    use crate::problem::Distribution;

    #[test]
    fn estimator_names_round_trip() {
        for e in Estimator::ALL {
            assert_eq!(e.name().parse::<Estimator>().unwrap(), e);
        }
        assert!("qpe".parse::<Estimator>().is_err());
    }

    #[test]
    fn fits_and_statistics() {
        let x = [1.0, 10.0, 100.0, 1000.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-0.75)).collect();
        assert!((loglog_slope(&x, &y) + 0.75).abs() < 1e-12);
        assert!((rms(&[3.0, -4.0]) - (12.5f64).sqrt()).abs() < 1e-15);
        let (m, s) = mean_sem(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(log_spaced(3, 4, 2), vec![1000, 3162, 10000]);
    }

    #[test]
    fn mc_error_matches_binomial_spread() {
        let spec = ProblemSpec::new(Distribution::gaussian(), 5, 1.0).unwrap();
        let a = exact_amplitude(&spec).unwrap().a;
        let shots = 10_000;
        let errors: Vec<f64> = (0..100)
            .map(|rep| {
                let cfg = VqaeConfig::ideal(1, 2, 1);
                run_repetition(&spec, Estimator::Mc, &cfg, shots, 17, rep).unwrap().a_hat - a
            })
            .collect();
        let expected = (a * (1.0 - a) / shots as f64).sqrt();
        assert!((rms(&errors) / expected - 1.0).abs() < 0.2);
    }

    #[test]
    fn sweep_is_deterministic_and_rows_are_consistent() {
        let spec = ProblemSpec::new(Distribution::cauchy_lorentz(), 4, 1.0).unwrap();
        let sweep = Sweep {
            spec,
            estimator: Estimator::VqaeNaive,
            config: VqaeConfig::naive(2, 5, 200, 1, OptimizerConfig::new(0.1, 5, 10)),
            mc_shots: vec![],
            reps: 4,
            seed: 3,
        };
        let a = run_sweep(&sweep).unwrap();
        let b = run_sweep(&sweep).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 6);
        assert!(a.iter().all(|r| r.infidelity.is_some()));
        let mc = Sweep {
            estimator: Estimator::Mc,
            mc_shots: vec![100, 1000],
            ..sweep
        };
        let rows = run_sweep(&mc).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].queries.total(), 1000);
    }

    #[test]
    fn infidelity_study_shape() {
        let spec = ProblemSpec::new(Distribution::gaussian(), 3, 1.0).unwrap();
        let cfg = VqaeConfig::naive(1, 3, 1, 1, OptimizerConfig::new(0.1, 20, 0));
        let rows = infidelity_study(&spec, &cfg, &[1, 2], 3, 0).unwrap();
        assert_eq!(rows.len(), 8);
        assert!(rows.iter().filter(|r| r.m == 0).all(|r| r.mean.abs() < 1e-12));
    }
}
