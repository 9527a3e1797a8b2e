//! Exact finite-length entropies by enumerating every observation sequence.
//!
//! Sequence probabilities come from the forward algorithm, run over any
//! [`Scalar`]: plain `f64` for values at a fixed ε, [`UniJet`] for the Taylor
//! series in a shared ε, [`MultiJet`](crate::MultiJet) for per-site noise
//! variables. Entropy sums use compensated accumulation in lexicographic order
//! within each chunk, and chunks are merged in chunk order, so a result is
//! reproducible for a fixed chunk count.

mod enumerate;
mod profile;

use alloc::vec::Vec;

pub use enumerate::{enumerate_sequences, sequence_count, Sequences};
pub use profile::SiteProfile;

use crate::error::{Error, Result};
use crate::jet::{MultiJet, MultiJetConfig, Scalar, UniJet, MAX_DEGREE, MAX_VARIABLES};
use crate::math::CompensatedSum;
use crate::model::HmpModel;

/// Default cap on the number of enumerated sequences, `2^24`.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Sequence probabilities below this (and nonzero) abort the computation.
pub const UNDERFLOW_GUARD: f64 = 1e-300;

/// Runs independent tasks and returns their results in task order.
pub trait Executor: Sync {
    fn run<T, F>(&self, tasks: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync;
}

/// Runs tasks one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn run<T, F>(&self, tasks: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        (0..tasks).map(job).collect()
    }
}

/// Entropy computations for one model.
#[derive(Debug, Clone)]
pub struct Engine<X = Sequential> {
    model: HmpModel,
    budget: u64,
    chunks: usize,
    executor: X,
}

impl Engine<Sequential> {
    pub fn new(model: HmpModel) -> Self {
        Self { model, budget: DEFAULT_BUDGET, chunks: 1, executor: Sequential }
    }
}

impl<X: Executor> Engine<X> {
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// Splits each enumeration into `chunks` contiguous rank ranges handed to
    /// `executor`.
    pub fn with_executor<Y: Executor>(self, executor: Y, chunks: usize) -> Engine<Y> {
        Engine { model: self.model, budget: self.budget, chunks: chunks.max(1), executor }
    }

    pub fn model(&self) -> &HmpModel {
        &self.model
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn chunks(&self) -> usize {
        self.chunks
    }

    pub fn sequences(&self, length: usize) -> Result<Sequences> {
        enumerate_sequences(self.model.alphabet(), length, self.budget)
    }

    pub fn scalar_profile(&self, epsilon: f64, sites: usize) -> Result<SiteProfile<f64>> {
        SiteProfile::uniform(self.model.noise(), epsilon, sites)
    }

    pub fn jet_profile(&self, order: usize, sites: usize) -> Result<SiteProfile<UniJet>> {
        SiteProfile::shared_variable(self.model.noise(), order, sites)
    }

    pub fn profile<S: Scalar>(&self, epsilons: Vec<S>) -> Result<SiteProfile<S>> {
        SiteProfile::new(self.model.noise(), epsilons)
    }

    /// `P([Y]_1^N = y)` by the forward recursion
    /// `α_1(x) = π_x r¹_{x,y_1}`, `α_{i+1}(x') = Σ_x α_i(x) m_{xx'} r^{i+1}_{x',y_{i+1}}`.
    pub fn sequence_probability<S: Scalar>(&self, y: &[usize], profile: &SiteProfile<S>) -> Result<S> {
        self.check_sequence(y, profile)?;
        Ok(self.forward(self.model.transition().stationary(), y, profile))
    }

    /// `P([Y]_1^N = y | X_1 = state)`.
    pub fn sequence_probability_given_first_state<S: Scalar>(
        &self,
        y: &[usize],
        profile: &SiteProfile<S>,
        state: usize,
    ) -> Result<S> {
        self.check_sequence(y, profile)?;
        let init = self.indicator(state)?;
        Ok(self.forward(&init, y, profile))
    }

    fn check_sequence<S: Scalar>(&self, y: &[usize], profile: &SiteProfile<S>) -> Result<()> {
        if profile.len() != y.len() {
            return Err(Error::ProfileLengthMismatch { expected: y.len(), found: profile.len() });
        }
        let s = self.model.alphabet();
        if let Some(&bad) = y.iter().find(|&&v| v >= s) {
            return Err(Error::SymbolOutOfRange { symbol: bad, alphabet: s });
        }
        Ok(())
    }

    fn indicator(&self, state: usize) -> Result<Vec<f64>> {
        let s = self.model.alphabet();
        if state >= s {
            return Err(Error::SymbolOutOfRange { symbol: state, alphabet: s });
        }
        let mut init = alloc::vec![0.0; s];
        init[state] = 1.0;
        Ok(init)
    }

    fn forward<S: Scalar>(&self, init: &[f64], y: &[usize], profile: &SiteProfile<S>) -> S {
        let config = profile.epsilons()[0].config();
        let s = self.model.alphabet();
        let m = self.model.transition();
        let mut alpha: Vec<S> = (0..s)
            .map(|x| {
                let mut a = S::constant(&config, 0.0);
                a.add_scaled(init[x], profile.emission(0, x, y[0]));
                a
            })
            .collect();
        let mut next = Vec::with_capacity(s);
        for (site, &sym) in y.iter().enumerate().skip(1) {
            next.clear();
            for to in 0..s {
                let mut flow = S::constant(&config, 0.0);
                for (from, a) in alpha.iter().enumerate() {
                    flow.add_scaled(m.get(from, to), a);
                }
                next.push(flow.times(profile.emission(site, to, sym)));
            }
            core::mem::swap(&mut alpha, &mut next);
        }
        let mut total = alpha.pop().expect("alphabet is nonempty");
        for a in &alpha {
            total.add_scaled(1.0, a);
        }
        total
    }

    /// `H_N = -Σ_y P(y) ln P(y)` with `N = profile.len()`; `H_0 = 0`.
    pub fn block_entropy<S: Scalar>(&self, profile: &SiteProfile<S>) -> Result<S> {
        let stationary = self.model.transition().stationary().to_vec();
        self.entropy_sum(profile, &stationary)
    }

    /// `H([Y]_1^N | X_1 = state)`.
    pub fn block_entropy_given_first_state<S: Scalar>(&self, profile: &SiteProfile<S>, state: usize) -> Result<S> {
        let init = self.indicator(state)?;
        self.entropy_sum(profile, &init)
    }

    fn entropy_sum<S: Scalar>(&self, profile: &SiteProfile<S>, init: &[f64]) -> Result<S> {
        let n = profile.len();
        if n == 0 {
            return Err(Error::InvalidArgument("entropy of an empty block needs a jet configuration".into()));
        }
        let s = self.model.alphabet();
        let total = sequence_count(s, n, self.budget)?;
        let config = profile.epsilons()[0].config();
        let lanes = S::constant(&config, 0.0).coeffs().len();
        let chunks = self.chunks.min(usize::try_from(total).unwrap_or(usize::MAX)).max(1);
        let partials = self.executor.run(chunks, |c| {
            let lo = total * c as u64 / chunks as u64;
            let hi = total * (c as u64 + 1) / chunks as u64;
            let mut acc = CompensatedSum::new(lanes);
            Sequences::range(s, n, lo, hi).visit(|y| {
                let p = self.forward(init, y, profile);
                let p0 = p.value();
                if p0 == 0.0 && lanes == 1 {
                    // 0 ln 0 = 0
                    return Ok(());
                }
                if !(p0 >= UNDERFLOW_GUARD) {
                    return Err(Error::UnreachableSequence(p0));
                }
                let term = p.times(&p.log()?);
                acc.add(term.coeffs());
                Ok(())
            })?;
            Ok(acc)
        });
        let mut sum = CompensatedSum::new(lanes);
        for partial in partials {
            sum.merge(&partial?);
        }
        let mut out = S::constant(&config, 0.0);
        for (dst, v) in out.coeffs_mut().iter_mut().zip(sum.finish()) {
            *dst = -v;
        }
        Ok(out)
    }

    /// `F_N = H([Z]_1^N) - H([Z]_1^{N-1})` for per-site noise; with a uniform
    /// profile this is `C_N`. The two entropies are separate enumerations.
    pub fn multi_site_f<S: Scalar>(&self, profile: &SiteProfile<S>) -> Result<S> {
        if profile.len() < 2 {
            return Err(Error::InvalidArgument(alloc::format!("F_N needs N >= 2, got {}", profile.len())));
        }
        let mut h = self.block_entropy(profile)?;
        let h_prev = self.block_entropy(&profile.prefix(profile.len() - 1))?;
        h.add_scaled(-1.0, &h_prev);
        Ok(h)
    }

    /// `H(Y_N | [Y]_1^{N-1}, X_1) = Σ_x π_x [H(Y^N | X_1 = x) - H(Y^{N-1} | X_1 = x)]`.
    pub fn conditional_entropy_given_first_state<S: Scalar>(&self, profile: &SiteProfile<S>) -> Result<S> {
        if profile.len() < 2 {
            return Err(Error::InvalidArgument("needs N >= 2".into()));
        }
        let prefix = profile.prefix(profile.len() - 1);
        let config = profile.epsilons()[0].config();
        let mut out = S::constant(&config, 0.0);
        for (x, &weight) in self.model.transition().stationary().iter().enumerate() {
            let mut diff = self.block_entropy_given_first_state(profile, x)?;
            diff.add_scaled(-1.0, &self.block_entropy_given_first_state(&prefix, x)?);
            out.add_scaled(weight, &diff);
        }
        Ok(out)
    }

    pub fn block_entropy_at(&self, length: usize, epsilon: f64) -> Result<f64> {
        self.block_entropy(&self.scalar_profile(epsilon, length)?)
    }

    pub fn block_entropy_series(&self, length: usize, order: usize) -> Result<UniJet> {
        self.block_entropy(&self.jet_profile(order, length)?)
    }

    /// `C_N(ε) = H_N - H_{N-1}`, `N >= 2`.
    pub fn conditional_entropy_at(&self, length: usize, epsilon: f64) -> Result<f64> {
        self.multi_site_f(&self.scalar_profile(epsilon, length)?)
    }

    /// Taylor series of `C_N` in ε to `order`.
    pub fn conditional_entropy_series(&self, length: usize, order: usize) -> Result<UniJet> {
        self.multi_site_f(&self.jet_profile(order, length)?)
    }

    /// `F_N^{k} = ∂^{|k|} F_N / ∂ε_1^{k_1} ... ∂ε_N^{k_N}` at `ε = 0`, with
    /// `N = k.len()`.
    pub fn mixed_partial_f(&self, k: &[u32]) -> Result<f64> {
        if k.len() > MAX_VARIABLES {
            return Err(Error::TooManyVariables { count: k.len(), cap: MAX_VARIABLES });
        }
        let weight: u32 = k.iter().sum();
        if weight as usize > MAX_DEGREE {
            return Err(Error::DegreeExceedsCap { degree: weight as usize, cap: MAX_DEGREE });
        }
        // Restricting to monomials below k loses nothing at k itself.
        let config = MultiJetConfig::bounded(k)?;
        let profile = SiteProfile::<MultiJet>::independent_variables(self.model.noise(), &config)?;
        self.multi_site_f(&profile)?.mixed_partial(k)
    }
}
