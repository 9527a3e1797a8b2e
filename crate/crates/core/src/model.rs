//! Model parameters: a strictly positive transition matrix `M` and a noise
//! generator `T` defining the emission matrix `R(ε) = I + εT`.
//!
//! Inputs are checked at `1e-9` on row sums and then renormalized, so the
//! stored matrices satisfy their row-sum constraints to rounding. Sign checks
//! are exact.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::math::{abs, ln};

/// Tolerance on input row sums.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

fn flatten<R: AsRef<[f64]>>(rows: &[R]) -> Result<(usize, Vec<f64>)> {
    let s = rows.len();
    let mut flat = Vec::with_capacity(s * s);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_ref();
        if row.len() != s {
            return Err(Error::NonSquare { row: i, len: row.len(), expected: s });
        }
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
        flat.extend_from_slice(row);
    }
    if s < 2 {
        return Err(Error::AlphabetTooSmall(s));
    }
    Ok((s, flat))
}

/// Row-stochastic, strictly positive transition matrix with its stationary
/// distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    size: usize,
    entries: Vec<f64>,
    stationary: Vec<f64>,
}

impl StochasticMatrix {
    /// Validates a transition matrix and solves for its stationary
    /// distribution.
    pub fn new<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let (s, mut entries) = flatten(rows)?;
        for i in 0..s {
            let row = &mut entries[i * s..(i + 1) * s];
            for (j, &v) in row.iter().enumerate() {
                if v <= 0.0 {
                    return Err(Error::NonPositiveEntry { row: i, col: j, value: v });
                }
            }
            let sum: f64 = row.iter().sum();
            if abs(sum - 1.0) > ROW_SUM_TOLERANCE {
                return Err(Error::RowSumViolation { row: i, sum, expected: 1.0 });
            }
            row.iter_mut().for_each(|v| *v /= sum);
        }
        let stationary = stationary_distribution(s, &entries)?;
        Ok(Self { size: s, entries, stationary })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.entries[from * self.size + to]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    /// Entropy rate of the chain itself, `-Σ_i π_i Σ_j m_ij ln m_ij`, in nats.
    pub fn entropy_rate(&self) -> f64 {
        (0..self.size)
            .map(|i| {
                let row: f64 = self.row(i).iter().map(|&m| -m * ln(m)).sum();
                self.stationary[i] * row
            })
            .sum()
    }

    /// Largest balance residual `max_j |Σ_i π_i m_ij - π_j|`.
    pub fn balance_residual(&self) -> f64 {
        (0..self.size)
            .map(|j| {
                let flow: f64 = (0..self.size).map(|i| self.stationary[i] * self.get(i, j)).sum();
                abs(flow - self.stationary[j])
            })
            .fold(0.0, f64::max)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.size).map(<[f64]>::to_vec).collect()
    }
}

/// Solves `π M = π`, `Σ π = 1` by Grassmann-Taksar-Heyman state reduction.
/// Subtraction-free, so every component keeps full relative accuracy.
fn stationary_distribution(s: usize, m: &[f64]) -> Result<Vec<f64>> {
    let mut a = m.to_vec();
    for n in (1..s).rev() {
        let outflow: f64 = (0..n).map(|j| a[n * s + j]).sum();
        if outflow <= 0.0 {
            return Err(Error::SingularSystem);
        }
        for i in 0..n {
            a[i * s + n] /= outflow;
        }
        for i in 0..n {
            let w = a[i * s + n];
            for j in 0..n {
                a[i * s + j] += w * a[n * s + j];
            }
        }
    }
    let mut pi = alloc::vec![0.0; s];
    pi[0] = 1.0;
    for n in 1..s {
        pi[n] = (0..n).map(|i| pi[i] * a[i * s + n]).sum();
    }
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|p| *p /= total);
    if pi.iter().any(|&p| p <= 0.0 || !p.is_finite()) {
        return Err(Error::SingularSystem);
    }
    Ok(pi)
}

/// Noise generator `T`: zero row sums, negative diagonal, nonnegative
/// off-diagonal. The all-zero matrix is accepted as the noiseless channel.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseGenerator {
    size: usize,
    entries: Vec<f64>,
    epsilon_max: f64,
}

impl NoiseGenerator {
    pub fn new<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let (s, mut entries) = flatten(rows)?;
        let degenerate = entries.iter().all(|&v| v == 0.0);
        if !degenerate {
            for i in 0..s {
                for j in 0..s {
                    let v = entries[i * s + j];
                    let bad = if i == j { v >= 0.0 } else { v < 0.0 };
                    if bad {
                        return Err(Error::SignViolation { row: i, col: j, value: v });
                    }
                }
            }
        }
        for i in 0..s {
            let row = &mut entries[i * s..(i + 1) * s];
            let sum: f64 = row.iter().sum();
            if abs(sum) > ROW_SUM_TOLERANCE {
                return Err(Error::RowSumViolation { row: i, sum, expected: 0.0 });
            }
            let off: f64 = row.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).sum();
            row[i] = -off;
        }
        let epsilon_max = (0..s)
            .map(|i| entries[i * s + i])
            .filter(|&d| d != 0.0)
            .map(|d| 1.0 / abs(d))
            .fold(f64::INFINITY, f64::min);
        Ok(Self { size: s, entries, epsilon_max })
    }

    /// The zero generator of the given size.
    pub fn zero(size: usize) -> Self {
        Self { size, entries: alloc::vec![0.0; size * size], epsilon_max: f64::INFINITY }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.entries[from * self.size + to]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Largest ε for which `I + εT` is row-stochastic; infinite for `T = 0`.
    pub fn epsilon_max(&self) -> f64 {
        self.epsilon_max
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0.0)
    }

    pub fn check_epsilon(&self, epsilon: f64) -> Result<()> {
        if epsilon.is_nan() || epsilon < 0.0 || epsilon > self.epsilon_max {
            return Err(Error::EpsilonOutOfRange { epsilon, max: self.epsilon_max });
        }
        Ok(())
    }

    /// Row-major emission matrix `R(ε) = I + εT`.
    pub fn emission_at(&self, epsilon: f64) -> Result<Vec<f64>> {
        self.check_epsilon(epsilon)?;
        let s = self.size;
        Ok((0..s * s)
            .map(|idx| {
                let delta = if idx / s == idx % s { 1.0 } else { 0.0 };
                delta + epsilon * self.entries[idx]
            })
            .collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.size).map(<[f64]>::to_vec).collect()
    }
}

/// A transition matrix paired with a noise generator of the same size.
#[derive(Debug, Clone, PartialEq)]
pub struct HmpModel {
    transition: StochasticMatrix,
    noise: NoiseGenerator,
}

impl HmpModel {
    pub fn new(transition: StochasticMatrix, noise: NoiseGenerator) -> Result<Self> {
        if transition.size() != noise.size() {
            return Err(Error::DimensionMismatch { transition: transition.size(), noise: noise.size() });
        }
        Ok(Self { transition, noise })
    }

    pub fn from_rows<A: AsRef<[f64]>, B: AsRef<[f64]>>(transition: &[A], noise: &[B]) -> Result<Self> {
        Self::new(StochasticMatrix::new(transition)?, NoiseGenerator::new(noise)?)
    }

    /// Binary chain with flip probability `p` observed through a binary
    /// symmetric channel (`T = [[-1, 1], [1, -1]]`).
    pub fn binary_symmetric(p: f64) -> Result<Self> {
        Self::from_rows(&[[1.0 - p, p], [p, 1.0 - p]], &[[-1.0, 1.0], [1.0, -1.0]])
    }

    /// Random strictly positive chain with a random full-support generator.
    pub fn random<G: Rng + ?Sized>(rng: &mut G, size: usize) -> Result<Self> {
        let m: Vec<Vec<f64>> = (0..size)
            .map(|_| {
                let row: Vec<f64> = (0..size).map(|_| rng.gen_range(0.05..1.0)).collect();
                let total: f64 = row.iter().sum();
                row.into_iter().map(|v| v / total).collect()
            })
            .collect();
        let t: Vec<Vec<f64>> = (0..size)
            .map(|i| {
                let mut row: Vec<f64> = (0..size).map(|j| if i == j { 0.0 } else { rng.gen_range(0.1..1.0) }).collect();
                row[i] = -row.iter().sum::<f64>();
                row
            })
            .collect();
        Self::from_rows(&m, &t)
    }

    pub fn transition(&self) -> &StochasticMatrix {
        &self.transition
    }

    pub fn noise(&self) -> &NoiseGenerator {
        &self.noise
    }

    pub fn alphabet(&self) -> usize {
        self.transition.size()
    }

    pub fn epsilon_max(&self) -> f64 {
        self.noise.epsilon_max()
    }
}
