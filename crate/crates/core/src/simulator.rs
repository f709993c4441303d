//! Dense statevector simulation.
//!
//! Basis index bit `i` is qubit `i`. Data qubits occupy `0..n`, the ancilla
//! is the highest qubit `n`, so the ancilla-one sector is the upper half of
//! the amplitude vector.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};

/// Largest register this simulator accepts.
pub const MAX_WIDTH: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QubitIndex(pub usize);

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    width: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// Computational basis state `|idx⟩` on `width` qubits.
    pub fn basis_state(width: usize, idx: usize) -> Result<Self> {
        if width == 0 || width > MAX_WIDTH {
            return Err(Error::InvalidWidth(width));
        }
        let dim = 1usize << width;
        if idx >= dim {
            return Err(Error::InvalidIndex { index: idx, limit: dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[idx] = Complex64::new(1.0, 0.0);
        Ok(Self { width, amps })
    }

    /// Wraps a raw amplitude vector. The length must be a power of two; the
    /// caller is responsible for normalization.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidWidth(dim));
        }
        let width = dim.trailing_zeros() as usize;
        if width > MAX_WIDTH {
            return Err(Error::InvalidWidth(width));
        }
        Ok(Self { width, amps })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::from_amplitudes(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Largest absolute imaginary part over all amplitudes.
    pub fn max_imag(&self) -> f64 {
        self.amps.iter().fold(0.0, |m, a| m.max(a.im.abs()))
    }

    fn check_qubit(&self, q: QubitIndex) -> Result<()> {
        if q.0 >= self.width {
            return Err(Error::InvalidIndex {
                index: q.0,
                limit: self.width,
            });
        }
        Ok(())
    }

    fn check_width(&self, other: &Self) -> Result<()> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                left: self.width,
                right: other.width,
            });
        }
        Ok(())
    }

    /// Applies `R_y(angle) = exp(-i angle σ_y / 2)` on qubit `q` in place.
    pub fn apply_ry(&mut self, q: QubitIndex, angle: f64) -> Result<()> {
        self.check_qubit(q)?;
        let (s, c) = (0.5 * angle).sin_cos();
        let stride = 1usize << q.0;
        for block in self.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x0, x1) = (*a0, *a1);
                *a0 = x0 * c - x1 * s;
                *a1 = x0 * s + x1 * c;
            }
        }
        Ok(())
    }

    /// Flips `target` on every basis state whose `control` bit is set.
    pub fn apply_cnot(&mut self, control: QubitIndex, target: QubitIndex) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::SameQubit(control.0));
        }
        let cmask = 1usize << control.0;
        let tmask = 1usize << target.0;
        for i in 0..self.amps.len() {
            if i & cmask != 0 && i & tmask == 0 {
                self.amps.swap(i, i | tmask);
            }
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        self.check_width(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `self += alpha * other`.
    pub fn axpy(&mut self, alpha: Complex64, other: &Self) -> Result<()> {
        self.check_width(other)?;
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += alpha * b;
        }
        Ok(())
    }

    pub fn scale(&mut self, factor: f64) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }

    /// Probability of measuring the ancilla (highest qubit) in `|1⟩`.
    pub fn ancilla_one_probability(&self) -> Result<f64> {
        if self.width < 2 {
            return Err(Error::InvalidWidth(self.width));
        }
        let half = self.amps.len() / 2;
        Ok(self.amps[half..].iter().map(|a| a.norm_sqr()).sum())
    }

    /// Euclidean distance `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_width(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

/// Draws `Binomial(trials, p)`.
pub fn draw_binomial<R: Rng + ?Sized>(p: f64, trials: u64, rng: &mut R) -> Result<u64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    if trials == 0 || p == 0.0 {
        return Ok(0);
    }
    if p == 1.0 {
        return Ok(trials);
    }
    let dist = Binomial::new(trials, p).map_err(|_| Error::InvalidProbability(p))?;
    Ok(dist.sample(rng))
}
