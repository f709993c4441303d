//! Product likelihood over amplified measurements and its brute-force
//! maximization.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Grid size of the brute-force search.
pub const GRID_POINTS: usize = 5000;

/// Lower clamp inside the logarithms.
pub const LOG_CLAMP: f64 = 1e-300;

/// Spacing of the search grid on `(0, π/2)`.
pub const GRID_SPACING: f64 = FRAC_PI_2 / GRID_POINTS as f64;

/// Ancilla statistics for one amplification power `m`. Counts are stored as
/// reals so that idealized (expected) counts can be fed in directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRecord {
    pub m: usize,
    pub shots: f64,
    pub ones: f64,
}

impl SampleRecord {
    pub fn new(m: usize, shots: u64, ones: u64) -> Result<Self> {
        if ones > shots {
            return Err(Error::InvalidConfig(format!(
                "record count {ones} exceeds shots {shots}"
            )));
        }
        Ok(Self {
            m,
            shots: shots as f64,
            ones: ones as f64,
        })
    }

    /// Expected counts `h sin²((2m+1)θ)` without sampling noise.
    pub fn noiseless(m: usize, shots: f64, theta: f64) -> Self {
        Self {
            m,
            shots,
            ones: shots * ((2 * m + 1) as f64 * theta).sin().powi(2),
        }
    }

    fn log_likelihood(&self, x: f64) -> f64 {
        let s = ((2 * self.m + 1) as f64 * x).sin().powi(2);
        let c = 1.0 - s;
        self.ones * s.max(LOG_CLAMP).ln() + (self.shots - self.ones) * c.max(LOG_CLAMP).ln()
    }
}

/// `ln L({h_m}, x)`.
pub fn log_likelihood(records: &[SampleRecord], x: f64) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    Ok(records.iter().map(|r| r.log_likelihood(x)).sum())
}

/// Grid abscissae: cell midpoints of `(0, π/2)`.
pub fn grid_point(i: usize) -> f64 {
    (i as f64 + 0.5) * GRID_SPACING
}

/// How the likelihood maximum is located.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum LikelihoodSearch {
    /// Brute-force grid argmax only.
    Grid,
    /// Grid argmax, then a root search of the score inside the two
    /// neighbouring cells.
    #[default]
    GridRefined,
}

/// Log-likelihood accumulated on the search grid, so that the estimate after
/// each new record costs one pass over the grid.
#[derive(Debug, Clone)]
pub struct LikelihoodGrid {
    values: Vec<f64>,
    records: Vec<SampleRecord>,
}

impl Default for LikelihoodGrid {
    fn default() -> Self {
        Self {
            values: vec![0.0; GRID_POINTS],
            records: Vec::new(),
        }
    }
}

impl LikelihoodGrid {
    pub fn push(&mut self, record: SampleRecord) {
        for (i, v) in self.values.iter_mut().enumerate() {
            *v += record.log_likelihood(grid_point(i));
        }
        self.records.push(record);
    }

    pub fn records(&self) -> &[SampleRecord] {
        &self.records
    }

    /// Index of the largest grid value; ties go to the smallest `x`.
    pub fn argmax(&self) -> Result<usize> {
        if self.records.is_empty() {
            return Err(Error::EmptyRecords);
        }
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate().skip(1) {
            if v > self.values[best] {
                best = i;
            }
        }
        Ok(best)
    }

    pub fn estimate(&self, search: LikelihoodSearch) -> Result<f64> {
        let i = self.argmax()?;
        match search {
            LikelihoodSearch::Grid => Ok(grid_point(i)),
            LikelihoodSearch::GridRefined => Ok(refine(&self.records, i)),
        }
    }
}

/// Bisection on the score `∂ ln L/∂x` inside `[x_{i−1}, x_{i+1}]`. The grid
/// point is kept when the score does not change sign there.
fn refine(records: &[SampleRecord], i: usize) -> f64 {
    let center = grid_point(i);
    let ll = |x: f64| records.iter().map(|r| r.log_likelihood(x)).sum::<f64>();
    let mut lo = (center - GRID_SPACING).max(0.0);
    let mut hi = (center + GRID_SPACING).min(FRAC_PI_2);
    let (s_lo, s_hi) = (score(records, lo), score(records, hi));
    if !(s_lo > 0.0 && s_hi < 0.0) {
        return center;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if score(records, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    if ll(x) >= ll(center) {
        x
    } else {
        center
    }
}

/// Half the derivative of `ln L` at `x`.
fn score(records: &[SampleRecord], x: f64) -> f64 {
    records
        .iter()
        .map(|r| {
            let w = (2 * r.m + 1) as f64;
            let (s, c) = (w * x).sin_cos();
            let mut d = 0.0;
            if r.ones > 0.0 {
                d += r.ones * c / s;
            }
            if r.shots > r.ones {
                d -= (r.shots - r.ones) * s / c;
            }
            w * d
        })
        .sum()
}

/// Brute-force maximum-likelihood phase over the 5000-point grid.
pub fn mlae_search(records: &[SampleRecord]) -> Result<f64> {
    search(records, LikelihoodSearch::Grid)
}

pub fn search(records: &[SampleRecord], how: LikelihoodSearch) -> Result<f64> {
    let mut grid = LikelihoodGrid::default();
    for r in records {
        grid.push(*r);
    }
    grid.estimate(how)
}
