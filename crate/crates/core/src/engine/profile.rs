use alloc::vec::Vec;

use crate::error::Result;
use crate::jet::{MultiJet, MultiJetConfig, Scalar, UniJet};
use crate::model::NoiseGenerator;

/// Per-site noise values `ε_1..ε_N` with their emission matrices
/// `R_i = I + ε_i T` precomputed.
#[derive(Debug, Clone)]
pub struct SiteProfile<S: Scalar> {
    alphabet: usize,
    epsilons: Vec<S>,
    // site-major, then state, then symbol
    emissions: Vec<S>,
}

impl<S: Scalar> SiteProfile<S> {
    /// Each ε's constant term must lie in `[0, epsilon_max]`.
    pub fn new(noise: &NoiseGenerator, epsilons: Vec<S>) -> Result<Self> {
        let s = noise.size();
        let mut emissions = Vec::with_capacity(epsilons.len() * s * s);
        for eps in &epsilons {
            noise.check_epsilon(eps.value())?;
            let config = eps.config();
            for x in 0..s {
                for y in 0..s {
                    let mut r = S::constant(&config, if x == y { 1.0 } else { 0.0 });
                    let t = noise.get(x, y);
                    if t != 0.0 {
                        r.add_scaled(t, eps);
                    }
                    emissions.push(r);
                }
            }
        }
        Ok(Self { alphabet: s, epsilons, emissions })
    }

    pub fn len(&self) -> usize {
        self.epsilons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epsilons.is_empty()
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn epsilons(&self) -> &[S] {
        &self.epsilons
    }

    /// The first `n` sites.
    pub fn prefix(&self, n: usize) -> Self {
        let n = n.min(self.len());
        let per_site = self.alphabet * self.alphabet;
        Self {
            alphabet: self.alphabet,
            epsilons: self.epsilons[..n].to_vec(),
            emissions: self.emissions[..n * per_site].to_vec(),
        }
    }

    /// Sites `from..N` (0-based).
    pub fn suffix(&self, from: usize) -> Self {
        let from = from.min(self.len());
        let per_site = self.alphabet * self.alphabet;
        Self {
            alphabet: self.alphabet,
            epsilons: self.epsilons[from..].to_vec(),
            emissions: self.emissions[from * per_site..].to_vec(),
        }
    }

    /// `r^{(site)}_{state, symbol}`
    #[inline]
    pub fn emission(&self, site: usize, state: usize, symbol: usize) -> &S {
        let s = self.alphabet;
        &self.emissions[(site * s + state) * s + symbol]
    }
}

impl SiteProfile<f64> {
    /// The same ε at every site.
    pub fn uniform(noise: &NoiseGenerator, epsilon: f64, sites: usize) -> Result<Self> {
        Self::new(noise, alloc::vec![epsilon; sites])
    }
}

impl SiteProfile<UniJet> {
    /// Every site carries the shared expansion variable ε, truncated at `order`.
    pub fn shared_variable(noise: &NoiseGenerator, order: usize, sites: usize) -> Result<Self> {
        Self::new(noise, alloc::vec![UniJet::variable(order); sites])
    }
}

impl SiteProfile<MultiJet> {
    /// Site `i` carries variable `i`, for `config.vars()` sites.
    pub fn independent_variables(noise: &NoiseGenerator, config: &MultiJetConfig) -> Result<Self> {
        let eps = (0..config.vars()).map(|i| MultiJet::variable(config, i)).collect::<Result<Vec<_>>>()?;
        Self::new(noise, eps)
    }
}
