//! Grover operator `𝒬 = −R_χ R_good` built from exact rank-1 reflections.

use num_complex::Complex64;

use crate::error::Result;
use crate::problem::{prepare_chi0, ProblemSpec};
use crate::simulator::Statevector;

/// Queries (applications of the state-preparation operator) per `𝒬`.
pub const QUERIES_PER_GROVER: u64 = 2;

/// `state ← state − 2⟨axis|state⟩ axis`. `axis` must have unit norm.
pub fn reflect(state: &mut Statevector, axis: &Statevector) -> Result<()> {
    let overlap = axis.inner_product(state)?;
    state.axpy(-2.0 * overlap, axis)
}

#[derive(Debug, Clone)]
pub struct GroverOracle {
    chi0: Statevector,
    good_axis: Statevector,
    bad_axis: Statevector,
    theta: f64,
}

impl GroverOracle {
    pub fn new(spec: &ProblemSpec) -> Result<Self> {
        Self::from_chi0(prepare_chi0(spec)?)
    }

    /// Splits `|χ₀⟩` into its ancilla sectors. An empty sector gets the
    /// sector's lowest basis state as its axis, which leaves `𝒬` well defined.
    pub fn from_chi0(chi0: Statevector) -> Result<Self> {
        let half = chi0.dim() / 2;
        let sector = |upper: bool| -> Result<Statevector> {
            let amps: Vec<Complex64> = chi0
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(i, &a)| if (i >= half) == upper { a } else { Complex64::new(0.0, 0.0) })
                .collect();
            let mut v = Statevector::from_amplitudes(amps)?;
            let norm = v.norm_sqr().sqrt();
            if norm == 0.0 {
                return Statevector::basis_state(chi0.width(), if upper { half } else { 0 });
            }
            v.scale(1.0 / norm);
            Ok(v)
        };
        let good_axis = sector(true)?;
        let bad_axis = sector(false)?;
        let a = chi0.ancilla_one_probability()?;
        Ok(Self {
            theta: a.clamp(0.0, 1.0).sqrt().asin(),
            chi0,
            good_axis,
            bad_axis,
        })
    }

    pub fn chi0(&self) -> &Statevector {
        &self.chi0
    }

    /// `|ψ_good⟩|1⟩`.
    pub fn good_axis(&self) -> &Statevector {
        &self.good_axis
    }

    /// `|ψ_bad⟩|0⟩`.
    pub fn bad_axis(&self) -> &Statevector {
        &self.bad_axis
    }

    /// Exact angle `θ = arcsin √a`, for diagnostics only.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn width(&self) -> usize {
        self.chi0.width()
    }

    /// Applies `𝒬^power` in place.
    pub fn apply(&self, state: &mut Statevector, power: usize) -> Result<()> {
        for _ in 0..power {
            reflect(state, &self.good_axis)?;
            reflect(state, &self.chi0)?;
            state.scale(-1.0);
        }
        Ok(())
    }

    /// `|χ_m⟩ = 𝒬^m |χ₀⟩`.
    pub fn chi(&self, m: usize) -> Result<Statevector> {
        let mut s = self.chi0.clone();
        self.apply(&mut s, m)?;
        Ok(s)
    }
}

/// `sin²((2m+1)θ)`.
pub fn closed_form_good_probability(theta: f64, m: usize) -> f64 {
    ((2 * m + 1) as f64 * theta).sin().powi(2)
}

/// `1 − Re⟨χ_m|approx⟩`.
pub fn infidelity(oracle: &GroverOracle, approx: &Statevector, m: usize) -> Result<f64> {
    let exact = oracle.chi(m)?;
    infidelity_against(&exact, approx)
}

/// `1 − Re⟨exact|approx⟩` for a precomputed `|χ_m⟩`.
pub fn infidelity_against(exact: &Statevector, approx: &Statevector) -> Result<f64> {
    Ok(1.0 - exact.inner_product(approx)?.re)
}
