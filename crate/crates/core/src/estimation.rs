//! Independent cross-checks: sampled paths, a Shannon-McMillan-Breiman
//! estimate of the entropy rate, and conditional-entropy bounds.
//!
//! Sampling uses ChaCha20 (`rand_chacha`) seeded through `seed_from_u64`,
//! with inverse-CDF draws from `gen::<f64>()`. Every estimator here is a pure
//! function of its arguments.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::engine::{Engine, Executor};
use crate::error::{Error, Result};
use crate::math::{ln, sqrt, CompensatedSum};
use crate::model::HmpModel;

/// Description of the generator recorded in output metadata.
pub const RNG_DESCRIPTION: &str = "ChaCha20 (rand_chacha 0.3, seed_from_u64), inverse-CDF sampling";

pub const MIN_MC_LENGTH: usize = 10_000;
pub const MIN_BATCHES: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRun {
    pub seed: u64,
    pub epsilon: f64,
    pub hidden: Vec<usize>,
    pub observed: Vec<usize>,
    /// `ln P([Y]_1^L)` in nats.
    pub loglik: f64,
}

impl SampleRun {
    pub fn len(&self) -> usize {
        self.observed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observed.is_empty()
    }
}

fn draw<R: Rng>(rng: &mut R, weights: &[f64]) -> usize {
    let u: f64 = rng.gen();
    let mut cumulative = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        cumulative += w;
        if u < cumulative {
            return i;
        }
    }
    // u landed in the rounding slack above the last cumulative sum
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(weights.len() - 1)
}

/// Samples `X_1 ~ π`, `X_{i+1} ~ M[X_i]`, `Y_i ~ R(ε)[X_i]`.
pub fn sample_paths(model: &HmpModel, epsilon: f64, length: usize, seed: u64) -> Result<SampleRun> {
    let emission = model.noise().emission_at(epsilon)?;
    if length == 0 {
        return Err(Error::InvalidArgument("path length must be at least 1".into()));
    }
    let s = model.alphabet();
    let m = model.transition();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut hidden = Vec::with_capacity(length);
    let mut observed = Vec::with_capacity(length);
    let mut state = draw(&mut rng, m.stationary());
    for i in 0..length {
        if i > 0 {
            state = draw(&mut rng, m.row(state));
        }
        hidden.push(state);
        observed.push(draw(&mut rng, &emission[state * s..(state + 1) * s]));
    }
    let loglik = log_likelihood(model, epsilon, &observed)?;
    Ok(SampleRun { seed, epsilon, hidden, observed, loglik })
}

/// `ln P(y_t | y_1..y_{t-1})` for each t, by the normalized forward pass.
pub fn log_likelihood_increments(model: &HmpModel, epsilon: f64, observed: &[usize]) -> Result<Vec<f64>> {
    let emission = model.noise().emission_at(epsilon)?;
    let s = model.alphabet();
    let m = model.transition();
    if let Some(&bad) = observed.iter().find(|&&y| y >= s) {
        return Err(Error::SymbolOutOfRange { symbol: bad, alphabet: s });
    }
    let mut alpha: Vec<f64> = m.stationary().to_vec();
    let mut next = alloc::vec![0.0; s];
    let mut out = Vec::with_capacity(observed.len());
    for (t, &y) in observed.iter().enumerate() {
        if t == 0 {
            for x in 0..s {
                next[x] = alpha[x] * emission[x * s + y];
            }
        } else {
            for to in 0..s {
                let flow: f64 = (0..s).map(|from| alpha[from] * m.get(from, to)).sum();
                next[to] = flow * emission[to * s + y];
            }
        }
        let norm: f64 = next.iter().sum();
        if !(norm > 0.0) {
            return Err(Error::UnreachableSequence(norm));
        }
        for x in 0..s {
            alpha[x] = next[x] / norm;
        }
        out.push(ln(norm));
    }
    Ok(out)
}

/// `ln P([Y]_1^L = observed)`.
pub fn log_likelihood(model: &HmpModel, epsilon: f64, observed: &[usize]) -> Result<f64> {
    let mut acc = CompensatedSum::new(1);
    for v in log_likelihood_increments(model, epsilon, observed)? {
        acc.add(&[v]);
    }
    Ok(acc.finish()[0])
}

#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    /// `-(1/L) ln P([Y]_1^L)` in nats per symbol.
    pub estimate: f64,
    /// Batch-means standard error.
    pub standard_error: f64,
    pub batches: usize,
    pub length: usize,
    pub seed: u64,
}

/// Entropy-rate estimate from one sampled path of length `length`, with a
/// standard error from `batches` contiguous batch means.
pub fn mc_entropy_rate(model: &HmpModel, epsilon: f64, length: usize, seed: u64, batches: usize) -> Result<McEstimate> {
    if length < MIN_MC_LENGTH {
        return Err(Error::InvalidArgument(alloc::format!("path length {length} below minimum {MIN_MC_LENGTH}")));
    }
    if batches < MIN_BATCHES || batches > length {
        return Err(Error::InvalidArgument(alloc::format!(
            "batch count {batches} must be in [{MIN_BATCHES}, {length}]"
        )));
    }
    let run = sample_paths(model, epsilon, length, seed)?;
    let increments = log_likelihood_increments(model, epsilon, &run.observed)?;
    let means: Vec<f64> = (0..batches)
        .map(|b| {
            let (lo, hi) = (b * length / batches, (b + 1) * length / batches);
            -increments[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect();
    let grand = -run.loglik / length as f64;
    let mean_of_means = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - mean_of_means) * (m - mean_of_means)).sum::<f64>() / (batches - 1) as f64;
    Ok(McEstimate { estimate: grand, standard_error: sqrt(var / batches as f64), batches, length, seed })
}

/// Sandwich `lower <= H̄ <= upper` at length `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalBounds {
    pub length: usize,
    /// `C_N(ε) = H(Y_N | [Y]_1^{N-1})`.
    pub upper: f64,
    /// `H(Y_N | [Y]_1^{N-1}, X_1)`, clipped to `upper` against rounding.
    pub lower: f64,
}

impl ConditionalBounds {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64, slack: f64) -> bool {
        self.lower - slack <= value && value <= self.upper + slack
    }
}

pub fn conditional_bounds<X: Executor>(engine: &Engine<X>, epsilon: f64, length: usize) -> Result<ConditionalBounds> {
    if length < 2 {
        return Err(Error::InvalidArgument(alloc::format!("bounds need N >= 2, got {length}")));
    }
    let profile = engine.scalar_profile(epsilon, length)?;
    let upper = engine.multi_site_f(&profile)?;
    let lower = engine.conditional_entropy_given_first_state(&profile)?.min(upper);
    Ok(ConditionalBounds { length, upper, lower })
}

/// Bounds for `N = 2..=max_length`.
pub fn bounds_curve<X: Executor>(
    engine: &Engine<X>,
    epsilon: f64,
    max_length: usize,
) -> Result<Vec<ConditionalBounds>> {
    (2..=max_length).map(|n| conditional_bounds(engine, epsilon, n)).collect()
}
