//! Numerical checks of the three identities behind the settling theorem.
//!
//! - Blocking: with `ε_j = 0`, `F_N(ε_1..ε_N) = F_{N-j+1}(ε_j..ε_N)`.
//! - Zero prepend: for `k_1 <= 1`, `F_N^{k} = F_{N+r}^{(0,..,0,k)}`.
//! - No hole: if some `i < j < N` has `k_i >= 1` and `k_j <= 1`, `F_N^{k} = 0`.
//!
//! Indices in this module's public API are 1-based to match how the
//! identities are usually written.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::engine::{Engine, Executor};
use crate::error::{Error, Result};
use crate::jet::MAX_VARIABLES;
use crate::math::abs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lemma {
    Blocking = 1,
    ZeroPrepend = 2,
    NoHole = 3,
}

impl Lemma {
    pub fn id(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Lemma::Blocking => "blocking",
            Lemma::ZeroPrepend => "zero-prepend",
            Lemma::NoHole => "no-hole",
        };
        write!(f, "lemma {} ({name})", self.id())
    }
}

/// Outcome of one identity check. `pass` holds iff `residual <= tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub lemma: Lemma,
    pub instance: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl LemmaReport {
    fn new(lemma: Lemma, instance: String, residual: f64, tolerance: f64) -> Self {
        Self { lemma, instance, residual, tolerance, pass: residual <= tolerance }
    }
}

/// Compares `F_N(profile)` with `F_{N-j+1}` on the suffix starting at site
/// `j`, which must have `ε_j = 0` and `1 < j < N`.
pub fn verify_lemma_blocking<X: Executor>(
    engine: &Engine<X>,
    j: usize,
    profile: &[f64],
    tolerance: f64,
) -> Result<LemmaReport> {
    let n = profile.len();
    if !(1 < j && j < n) {
        return Err(Error::HypothesisNotMet(format!("need 1 < j < N, got j = {j}, N = {n}")));
    }
    if profile[j - 1] != 0.0 {
        return Err(Error::HypothesisNotMet(format!("ε_{j} = {} is not zero", profile[j - 1])));
    }
    let full = engine.profile(profile.to_vec())?;
    let lhs = engine.multi_site_f(&full)?;
    let rhs = engine.multi_site_f(&full.suffix(j - 1))?;
    Ok(LemmaReport::new(Lemma::Blocking, format!("N={n} j={j} eps={profile:?}"), abs(lhs - rhs), tolerance))
}

/// Compares `F_N^{k}` with `F_{N+r}^{(0^r, k)}`; requires `k_1 <= 1`.
pub fn verify_lemma_zero_prepend<X: Executor>(
    engine: &Engine<X>,
    k: &[u32],
    r: usize,
    tolerance: f64,
) -> Result<LemmaReport> {
    if k.len() < 2 {
        return Err(Error::InvalidArgument(format!("F_N needs N >= 2, got {}", k.len())));
    }
    if k[0] > 1 {
        return Err(Error::HypothesisNotMet(format!("k_1 = {} > 1", k[0])));
    }
    if k.len() + r > MAX_VARIABLES {
        return Err(Error::TooManyVariables { count: k.len() + r, cap: MAX_VARIABLES });
    }
    let mut padded = alloc::vec![0u32; r];
    padded.extend_from_slice(k);
    let lhs = engine.mixed_partial_f(k)?;
    let rhs = engine.mixed_partial_f(&padded)?;
    Ok(LemmaReport::new(Lemma::ZeroPrepend, format!("k={k:?} r={r}"), abs(lhs - rhs), tolerance))
}

/// Checks `F_N^{k} = 0` for a `k` with a hole: some `i < j < N` (1-based)
/// with `k_i >= 1` and `k_j <= 1`.
pub fn verify_lemma_no_hole<X: Executor>(engine: &Engine<X>, k: &[u32], tolerance: f64) -> Result<LemmaReport> {
    if !has_hole(k) {
        return Err(Error::HypothesisNotMet(format!("k={k:?} has no i < j < N with k_i >= 1 and k_j <= 1")));
    }
    let value = engine.mixed_partial_f(k)?;
    Ok(LemmaReport::new(Lemma::NoHole, format!("k={k:?}"), abs(value), tolerance))
}

pub(crate) fn has_hole(k: &[u32]) -> bool {
    let n = k.len();
    // 0-based: j in 1..n-1, some i < j with k_i >= 1
    (1..n.saturating_sub(1)).any(|j| k[j] <= 1 && k[..j].iter().any(|&v| v >= 1))
}

/// Random `(j, profile)` with `N` in `3..=max_length`, `ε_j = 0`, and the
/// other entries uniform in `[0, 0.2 · epsilon_max]` (`[0, 0.2]` when
/// `epsilon_max` is infinite).
pub fn random_blocking_instance<R: Rng + ?Sized>(
    rng: &mut R,
    epsilon_max: f64,
    max_length: usize,
) -> (usize, Vec<f64>) {
    let n = rng.gen_range(3..=max_length.max(3));
    let j = rng.gen_range(2..n);
    let hi = if epsilon_max.is_finite() { 0.2 * epsilon_max } else { 0.2 };
    let profile = (1..=n).map(|site| if site == j { 0.0 } else { rng.gen_range(0.0..=hi) }).collect();
    (j, profile)
}

/// Random `(k, r)` with `k_1 <= 1`, `ω(k) <= max_weight`, `N >= 2`, `r >= 1`
/// and `N + r <= max_length`.
pub fn random_zero_prepend_instance<R: Rng + ?Sized>(
    rng: &mut R,
    max_length: usize,
    max_weight: u32,
) -> (Vec<u32>, usize) {
    let max_length = max_length.max(3);
    let n = rng.gen_range(2..max_length);
    let r = rng.gen_range(1..=max_length - n);
    let mut k = alloc::vec![0u32; n];
    k[0] = rng.gen_range(0..=1.min(max_weight));
    let mut weight = rng.gen_range(k[0]..=max_weight);
    weight -= k[0];
    for _ in 0..weight {
        let pos = rng.gen_range(1..n);
        k[pos] += 1;
    }
    (k, r)
}

/// Random `k` satisfying the no-hole hypothesis with `3 <= N <= max_length`
/// and `ω(k) <= max_weight` (at least 1).
pub fn random_no_hole_instance<R: Rng + ?Sized>(rng: &mut R, max_length: usize, max_weight: u32) -> Vec<u32> {
    let n = rng.gen_range(3..=max_length.max(3));
    let j = rng.gen_range(1..n - 1);
    let i = rng.gen_range(0..j);
    let mut k = alloc::vec![0u32; n];
    k[i] = 1;
    let max_weight = max_weight.max(1);
    if max_weight >= 2 && rng.gen_bool(0.5) {
        k[j] = 1;
    }
    let used = k.iter().sum::<u32>();
    let extra = rng.gen_range(0..=max_weight - used);
    for _ in 0..extra {
        let mut pos = rng.gen_range(0..n - 1);
        if pos >= j {
            pos += 1;
        }
        k[pos] += 1;
    }
    debug_assert!(has_hole(&k));
    k
}
