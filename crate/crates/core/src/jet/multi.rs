use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{Scalar, UniJet};
use crate::error::{Error, Result};
use crate::math::{factorial, ln};

pub const MAX_VARIABLES: usize = 10;
pub const MAX_DEGREE: usize = 12;
/// Upper bound on the size of the precomputed monomial product table.
pub const MAX_PRODUCT_PAIRS: usize = 4_000_000;

/// Monomial basis shared by all jets of one configuration.
///
/// Monomials are ordered by total degree, then lexicographically, so index 0
/// is the constant monomial and every divisor of a monomial precedes it. The
/// basis is down-closed: it holds every exponent vector with total degree at
/// most `degree_cap` and, when `var_caps` is set, `e_i <= var_caps[i]`.
#[derive(Debug)]
struct Basis {
    vars: usize,
    degree_cap: usize,
    var_caps: Option<Vec<u8>>,
    // Flattened, `vars` entries per monomial.
    exponents: Vec<u8>,
    degrees: Vec<u32>,
    index: BTreeMap<Vec<u8>, u32>,
    // Pairs (left, right) with m_left + m_right = m_target, grouped by target.
    pair_starts: Vec<u32>,
    pairs: Vec<(u32, u32)>,
}

impl Basis {
    fn build(vars: usize, degree_cap: usize, var_caps: Option<Vec<u8>>) -> Result<Self> {
        if vars > MAX_VARIABLES {
            return Err(Error::TooManyVariables { count: vars, cap: MAX_VARIABLES });
        }
        if degree_cap > MAX_DEGREE {
            return Err(Error::DegreeExceedsCap { degree: degree_cap, cap: MAX_DEGREE });
        }
        let caps: Vec<u8> = match &var_caps {
            Some(c) => c.iter().map(|&v| v.min(degree_cap as u8)).collect(),
            None => alloc::vec![degree_cap as u8; vars],
        };

        let mut monomials: Vec<Vec<u8>> = Vec::new();
        let mut current = alloc::vec![0u8; vars];
        enumerate_monomials(&caps, degree_cap, 0, 0, &mut current, &mut monomials);
        monomials.sort_by(|a, b| {
            let (da, db) = (degree(a), degree(b));
            da.cmp(&db).then_with(|| b.cmp(a))
        });

        let pair_count: usize = monomials.iter().map(|m| m.iter().map(|&e| e as usize + 1).product::<usize>()).sum();
        if pair_count > MAX_PRODUCT_PAIRS {
            return Err(Error::BasisTooLarge { pairs: pair_count, limit: MAX_PRODUCT_PAIRS });
        }

        let index: BTreeMap<Vec<u8>, u32> = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
        let mut pair_starts = Vec::with_capacity(monomials.len() + 1);
        let mut pairs = Vec::with_capacity(pair_count);
        let mut left = alloc::vec![0u8; vars];
        let mut right = alloc::vec![0u8; vars];
        for target in &monomials {
            pair_starts.push(pairs.len() as u32);
            left.iter_mut().for_each(|e| *e = 0);
            loop {
                for i in 0..vars {
                    right[i] = target[i] - left[i];
                }
                pairs.push((index[&left], index[&right]));
                // odometer over left <= target
                let mut pos = 0;
                while pos < vars {
                    if left[pos] < target[pos] {
                        left[pos] += 1;
                        break;
                    }
                    left[pos] = 0;
                    pos += 1;
                }
                if pos == vars {
                    break;
                }
            }
        }
        pair_starts.push(pairs.len() as u32);

        let degrees = monomials.iter().map(|m| degree(m) as u32).collect();
        let exponents = monomials.concat();
        Ok(Self { vars, degree_cap, var_caps, exponents, degrees, index, pair_starts, pairs })
    }

    fn len(&self) -> usize {
        self.degrees.len()
    }

    fn monomial(&self, i: usize) -> &[u8] {
        &self.exponents[i * self.vars..(i + 1) * self.vars]
    }

    fn pairs_for(&self, target: usize) -> &[(u32, u32)] {
        let (lo, hi) = (self.pair_starts[target] as usize, self.pair_starts[target + 1] as usize);
        &self.pairs[lo..hi]
    }

    fn same_shape(&self, other: &Basis) -> bool {
        self.vars == other.vars && self.degree_cap == other.degree_cap && self.var_caps == other.var_caps
    }
}

fn degree(m: &[u8]) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

fn enumerate_monomials(
    caps: &[u8],
    budget: usize,
    pos: usize,
    used: usize,
    current: &mut Vec<u8>,
    out: &mut Vec<Vec<u8>>,
) {
    if pos == caps.len() {
        out.push(current.clone());
        return;
    }
    let max = (caps[pos] as usize).min(budget - used);
    for e in 0..=max {
        current[pos] = e as u8;
        enumerate_monomials(caps, budget, pos + 1, used + e, current, out);
    }
    current[pos] = 0;
}

/// Shape of a multivariate jet: variable count, total-degree cap, and
/// optional per-variable exponent caps.
#[derive(Debug, Clone)]
pub struct MultiJetConfig {
    basis: Arc<Basis>,
}

impl MultiJetConfig {
    /// All monomials in `vars` variables with total degree at most `degree_cap`.
    pub fn total_degree(vars: usize, degree_cap: usize) -> Result<Self> {
        Ok(Self { basis: Arc::new(Basis::build(vars, degree_cap, None)?) })
    }

    /// All monomials `e` with `e <= caps` componentwise.
    ///
    /// This is the smallest basis that still determines the coefficient at
    /// `caps` exactly under products and logarithms.
    pub fn bounded(caps: &[u32]) -> Result<Self> {
        let degree_cap: u32 = caps.iter().sum();
        if degree_cap as usize > MAX_DEGREE {
            return Err(Error::DegreeExceedsCap { degree: degree_cap as usize, cap: MAX_DEGREE });
        }
        let caps8 = caps.iter().map(|&c| c as u8).collect();
        Ok(Self { basis: Arc::new(Basis::build(caps.len(), degree_cap as usize, Some(caps8))?) })
    }

    pub fn vars(&self) -> usize {
        self.basis.vars
    }

    pub fn degree_cap(&self) -> usize {
        self.basis.degree_cap
    }

    /// Number of stored coefficients.
    pub fn basis_len(&self) -> usize {
        self.basis.len()
    }

    fn index_of(&self, exponents: &[u32]) -> Result<Option<usize>> {
        if exponents.len() != self.vars() {
            return Err(Error::InvalidArgument(alloc::format!(
                "exponent vector has {} entries, jet has {} variables",
                exponents.len(),
                self.vars()
            )));
        }
        let total: u32 = exponents.iter().sum();
        if total as usize > self.degree_cap() {
            return Err(Error::DegreeExceedsCap { degree: total as usize, cap: self.degree_cap() });
        }
        if exponents.iter().any(|&e| e > u8::MAX as u32) {
            return Ok(None);
        }
        let key: Vec<u8> = exponents.iter().map(|&e| e as u8).collect();
        Ok(self.basis.index.get(&key).map(|&i| i as usize))
    }
}

impl PartialEq for MultiJetConfig {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.basis, &other.basis) || self.basis.same_shape(&other.basis)
    }
}

/// Power series in several variables, truncated to a monomial basis.
///
/// Monomials outside the basis have coefficient zero.
#[derive(Debug, Clone)]
pub struct MultiJet {
    config: MultiJetConfig,
    coeffs: Vec<f64>,
}

impl MultiJet {
    pub fn constant(config: &MultiJetConfig, value: f64) -> Self {
        let mut coeffs = alloc::vec![0.0; config.basis_len()];
        coeffs[0] = value;
        Self { config: config.clone(), coeffs }
    }

    /// The `i`-th variable (0-based). If the basis has no room for it the
    /// result is the zero jet.
    pub fn variable(config: &MultiJetConfig, i: usize) -> Result<Self> {
        if i >= config.vars() {
            return Err(Error::InvalidArgument(alloc::format!(
                "variable {i} out of range for {} variables",
                config.vars()
            )));
        }
        let mut jet = Self::constant(config, 0.0);
        let mut exps = alloc::vec![0u32; config.vars()];
        exps[i] = 1;
        if config.degree_cap() >= 1 {
            if let Some(idx) = config.index_of(&exps)? {
                jet.coeffs[idx] = 1.0;
            }
        }
        Ok(jet)
    }

    pub fn config(&self) -> &MultiJetConfig {
        &self.config
    }

    fn check(&self, rhs: &Self) -> Result<()> {
        if self.config != rhs.config {
            return Err(Error::ConfigMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        let mut out = self.clone();
        out.add_scaled(1.0, rhs);
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        let mut out = self.clone();
        out.add_scaled(-1.0, rhs);
        Ok(out)
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { config: self.config.clone(), coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Natural logarithm via the Euler-operator recurrence `a · E(b) = E(a)`,
    /// where `E` multiplies each monomial's coefficient by its total degree.
    pub fn ln(&self) -> Result<Self> {
        let a = &self.coeffs;
        let a0 = a[0];
        if !(a0 > 0.0) {
            return Err(Error::NonPositiveConstantTerm(a0));
        }
        let basis = &self.config.basis;
        let mut b = alloc::vec![0.0; a.len()];
        b[0] = ln(a0);
        for k in 1..a.len() {
            let mut acc = 0.0;
            for &(l, r) in basis.pairs_for(k) {
                let (l, r) = (l as usize, r as usize);
                // skip the a_0 * b_k term and the b_0 terms (weight |0| = 0)
                if l == 0 || r == 0 {
                    continue;
                }
                acc += a[l] * f64::from(basis.degrees[r]) * b[r];
            }
            b[k] = (a[k] - acc / f64::from(basis.degrees[k])) / a0;
        }
        Ok(Self { config: self.config.clone(), coeffs: b })
    }

    /// Taylor coefficient of the monomial `Π ε_i^{e_i}`.
    pub fn coefficient(&self, exponents: &[u32]) -> Result<f64> {
        Ok(self.config.index_of(exponents)?.map_or(0.0, |i| self.coeffs[i]))
    }

    /// `∂^{|k|} f / ∂ε_1^{k_1} ... ∂ε_n^{k_n}` at zero: the coefficient times
    /// `Π k_i!`.
    pub fn mixed_partial(&self, exponents: &[u32]) -> Result<f64> {
        let scale: f64 = exponents.iter().map(|&k| factorial(k)).product();
        Ok(self.coefficient(exponents)? * scale)
    }

    /// Sets every variable equal to one shared variable; the result has order
    /// `degree_cap`. Only defined on total-degree bases.
    pub fn specialize_to_univariate(&self) -> Result<UniJet> {
        let basis = &self.config.basis;
        if basis.var_caps.is_some() {
            return Err(Error::PartialBasis);
        }
        let mut out = alloc::vec![0.0; basis.degree_cap + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[basis.degrees[i] as usize] += c;
        }
        UniJet::from_coeffs(out)
    }

    /// Nonzero terms as `(exponents, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&[u8], f64)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0.0).map(move |(i, &c)| (self.config.basis.monomial(i), c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let basis = &self.config.basis;
        let (a, b) = (&self.coeffs, &rhs.coeffs);
        let coeffs = (0..a.len())
            .map(|k| basis.pairs_for(k).iter().map(|&(l, r)| a[l as usize] * b[r as usize]).sum())
            .collect();
        Self { config: self.config.clone(), coeffs }
    }
}

impl PartialEq for MultiJet {
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config && self.coeffs == other.coeffs
    }
}

impl Scalar for MultiJet {
    type Config = MultiJetConfig;

    fn constant(config: &MultiJetConfig, value: f64) -> Self {
        MultiJet::constant(config, value)
    }

    fn config(&self) -> MultiJetConfig {
        self.config.clone()
    }

    #[inline]
    fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    #[inline]
    fn times(&self, rhs: &Self) -> Self {
        debug_assert!(self.config == rhs.config);
        self.mul_unchecked(rhs)
    }

    fn log(&self) -> Result<Self> {
        self.ln()
    }
}
