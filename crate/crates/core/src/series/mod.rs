//! Entropy-rate Taylor coefficients from finite-length conditional entropies.
//!
//! The k-th coefficient of `C_N(ε)` equals the k-th coefficient of the
//! entropy rate once `N >= ceil((k + 3) / 2)`. [`entropy_rate_series`] reads
//! all coefficients up to order `K` from one jet computation at the smallest
//! such `N` and cross-checks them against the other valid lengths.

mod lemmas;

use alloc::vec::Vec;

pub use lemmas::{
    random_blocking_instance, random_no_hole_instance, random_zero_prepend_instance, verify_lemma_blocking,
    verify_lemma_no_hole, verify_lemma_zero_prepend, Lemma, LemmaReport,
};

use crate::engine::{sequence_count, Engine, Executor, SiteProfile};
use crate::error::{Error, Result};
use crate::jet::{MultiJet, MultiJetConfig, UniJet};
use crate::math::{abs, powi};

/// Default relative tolerance for settled-coefficient agreement.
pub const DEFAULT_SETTLING_TOLERANCE: f64 = 1e-8;
/// Default absolute tolerance on lemma residuals.
pub const DEFAULT_LEMMA_TOLERANCE: f64 = 1e-9;

/// Smallest `N` with `C_N^(k) = C^(k)`: `ceil((k + 3) / 2)`.
pub fn settling_threshold(k: usize) -> usize {
    (k + 4) / 2
}

/// Entropy-rate coefficients `C^(0..=K)` in nats.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesResult {
    pub order: usize,
    pub coefficients: Vec<f64>,
    /// `N_k = ceil((k + 3) / 2)` for each k.
    pub thresholds: Vec<usize>,
    /// Length the coefficients were read from.
    pub reference_length: usize,
    /// Per-k maximum `|C_N^(k) - C_{N*}^(k)|` over the other checked lengths
    /// with `N >= N_k`.
    pub settle_residuals: Vec<f64>,
    /// Lengths whose jets were computed.
    pub checked_lengths: Vec<usize>,
    pub epsilon_max: f64,
}

impl SeriesResult {
    /// Fails with [`Error::SettlingViolation`] at the first k whose residual
    /// exceeds `tolerance * max(1, |C^(k)|)`.
    pub fn check(&self, tolerance: f64) -> Result<()> {
        for (k, (&res, &c)) in self.settle_residuals.iter().zip(&self.coefficients).enumerate() {
            let allowed = tolerance * abs(c).max(1.0);
            if !(res <= allowed) {
                return Err(Error::SettlingViolation { k, residual: res, tolerance: allowed });
            }
        }
        Ok(())
    }

    pub fn as_jet(&self) -> UniJet {
        UniJet::from_coeffs(self.coefficients.clone()).expect("order >= 0")
    }

    /// Truncated sum `Σ_{k<=K} C^(k) ε^k`.
    pub fn evaluate(&self, epsilon: f64) -> Result<SeriesEvaluation> {
        if epsilon.is_nan() || epsilon < 0.0 || epsilon > self.epsilon_max {
            return Err(Error::EpsilonOutOfRange { epsilon, max: self.epsilon_max });
        }
        let value = self.as_jet().eval(epsilon);
        let last = abs(self.coefficients[self.order]);
        let remainder_estimate =
            if epsilon < 1.0 { last * powi(epsilon, self.order as u32 + 1) / (1.0 - epsilon) } else { f64::INFINITY };
        Ok(SeriesEvaluation { value, remainder_estimate })
    }
}

/// Truncated series value with a heuristic size for the omitted tail.
///
/// The remainder `|C^(K)| ε^{K+1} / (1 - ε)` assumes geometric decay of the
/// coefficients; no radius of convergence is known, so it is not a bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEvaluation {
    pub value: f64,
    pub remainder_estimate: f64,
}

/// Computes `C^(0..=order)` without gating on agreement.
pub fn compute_series<X: Executor>(engine: &Engine<X>, order: usize) -> Result<SeriesResult> {
    let reference = settling_threshold(order);
    let longest = reference + 1;
    sequence_count(engine.model().alphabet(), longest, engine.budget())?;

    let lengths: Vec<usize> = (settling_threshold(0)..=longest).collect();
    let jets = lengths.iter().map(|&n| engine.conditional_entropy_series(n, order)).collect::<Result<Vec<_>>>()?;
    let reference_jet = &jets[reference - lengths[0]];

    let thresholds: Vec<usize> = (0..=order).map(settling_threshold).collect();
    let settle_residuals = thresholds
        .iter()
        .enumerate()
        .map(|(k, &threshold)| {
            lengths
                .iter()
                .zip(&jets)
                .filter(|(&n, _)| n >= threshold && n != reference)
                .map(|(_, jet)| abs(jet.coeff(k) - reference_jet.coeff(k)))
                .fold(0.0, f64::max)
        })
        .collect();

    Ok(SeriesResult {
        order,
        coefficients: reference_jet.coeffs().to_vec(),
        thresholds,
        reference_length: reference,
        settle_residuals,
        checked_lengths: lengths,
        epsilon_max: engine.model().epsilon_max(),
    })
}

/// Entropy-rate coefficients to `order`, failing with
/// [`Error::SettlingViolation`] if any settled coefficient disagrees across
/// lengths by more than `tolerance` (relative to `max(1, |C^(k)|)`).
pub fn entropy_rate_series<X: Executor>(engine: &Engine<X>, order: usize, tolerance: f64) -> Result<SeriesResult> {
    let result = compute_series(engine, order)?;
    result.check(tolerance)?;
    Ok(result)
}

/// `C_N^(k)` for `N = 2..=max_length`, `k = 0..=order`.
#[derive(Debug, Clone, PartialEq)]
pub struct SettlingTable {
    pub order: usize,
    pub lengths: Vec<usize>,
    /// `cells[row][k]` with `row` indexing `lengths`.
    pub cells: Vec<Vec<f64>>,
}

impl SettlingTable {
    pub fn is_settled(&self, length: usize, k: usize) -> bool {
        length >= settling_threshold(k)
    }

    /// The coefficient from the smallest settled length, if any row is settled.
    pub fn settled_value(&self, k: usize) -> Option<f64> {
        self.lengths.iter().position(|&n| self.is_settled(n, k)).map(|row| self.cells[row][k])
    }

    /// Largest pairwise difference among settled cells of column `k`.
    pub fn column_disagreement(&self, k: usize) -> Option<f64> {
        let settled: Vec<f64> = self
            .lengths
            .iter()
            .zip(&self.cells)
            .filter(|(&n, _)| self.is_settled(n, k))
            .map(|(_, row)| row[k])
            .collect();
        if settled.is_empty() {
            return None;
        }
        let lo = settled.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = settled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(hi - lo)
    }

    /// Unsettled cells as `(N, k, |C_N^(k) - C^(k)|)`.
    pub fn unsettled_gaps(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for (row, &n) in self.lengths.iter().enumerate() {
            for k in 0..=self.order {
                if self.is_settled(n, k) {
                    continue;
                }
                if let Some(settled) = self.settled_value(k) {
                    out.push((n, k, abs(self.cells[row][k] - settled)));
                }
            }
        }
        out
    }
}

pub fn settling_table<X: Executor>(engine: &Engine<X>, order: usize, max_length: usize) -> Result<SettlingTable> {
    if max_length < 2 {
        return Err(Error::InvalidArgument(alloc::format!("N_max must be >= 2, got {max_length}")));
    }
    sequence_count(engine.model().alphabet(), max_length, engine.budget())?;
    let lengths: Vec<usize> = (2..=max_length).collect();
    let cells = lengths
        .iter()
        .map(|&n| engine.conditional_entropy_series(n, order).map(UniJet::into_coeffs))
        .collect::<Result<Vec<_>>>()?;
    Ok(SettlingTable { order, lengths, cells })
}

/// `ω(k) = Σ k_i`.
pub fn weight(k: &[u32]) -> u32 {
    k.iter().sum()
}

/// Rebuilds `C_N^(k)` from the mixed partials of `F_N`.
///
/// Since `C_N(ε) = F_N(ε, ..., ε)`, the Taylor coefficient is
/// `Σ_{ω(k)=order} F_N^{k} / Π k_i!`. With `skip_holes`, the index vectors
/// that the no-hole identity says vanish are left out of the sum.
pub fn coefficient_from_partials<X: Executor>(
    engine: &Engine<X>,
    length: usize,
    order: usize,
    skip_holes: bool,
) -> Result<f64> {
    let config = MultiJetConfig::total_degree(length, order)?;
    let profile = SiteProfile::<MultiJet>::independent_variables(engine.model().noise(), &config)?;
    let f = engine.multi_site_f(&profile)?;
    let mut total = 0.0;
    for (exps, coeff) in f.terms() {
        let k: Vec<u32> = exps.iter().map(|&e| u32::from(e)).collect();
        if weight(&k) as usize != order || (skip_holes && lemmas::has_hole(&k)) {
            continue;
        }
        // the stored Taylor coefficient is already F_N^{k} / Π k_i!
        total += coeff;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Engine;
    use crate::math::ln;
    use crate::model::{HmpModel, NoiseGenerator};

    fn bsc(p: f64) -> Engine {
        Engine::new(HmpModel::binary_symmetric(p).unwrap())
    }

    #[test]
    fn thresholds() {
        assert_eq!(settling_threshold(0), 2);
        assert_eq!(settling_threshold(1), 2);
        assert_eq!(settling_threshold(2), 3);
        assert_eq!(settling_threshold(3), 3);
        assert_eq!(settling_threshold(11), 7);
        for k in 0..40 {
            assert_eq!(settling_threshold(k), (k + 3).div_ceil(2));
        }
    }

    #[test]
    fn zeroth_order_is_binary_entropy() {
        let r = entropy_rate_series(&bsc(0.3), 0, DEFAULT_SETTLING_TOLERANCE).unwrap();
        let h = -0.3 * ln(0.3) - 0.7 * ln(0.7);
        assert!((r.coefficients[0] - h).abs() < 1e-14);
        assert!((r.coefficients[0] - 0.6108643).abs() < 1e-7);
    }

    #[test]
    fn zero_generator_has_flat_series() {
        let model = HmpModel::new(
            crate::model::StochasticMatrix::new(&[[0.6, 0.4], [0.1, 0.9]]).unwrap(),
            NoiseGenerator::zero(2),
        )
        .unwrap();
        let rate = model.transition().entropy_rate();
        let r = entropy_rate_series(&Engine::new(model), 5, DEFAULT_SETTLING_TOLERANCE).unwrap();
        assert!((r.coefficients[0] - rate).abs() < 1e-14);
        assert!(r.coefficients[1..].iter().all(|&c| c.abs() < 1e-14));
        for eps in [0.0, 0.3, 7.0] {
            assert!((r.evaluate(eps).unwrap().value - r.coefficients[0]).abs() < 1e-13);
        }
    }

    #[test]
    fn evaluation_range() {
        let r = compute_series(&bsc(0.3), 3).unwrap();
        assert_eq!(r.evaluate(0.0).unwrap().value, r.coefficients[0]);
        assert!(matches!(r.evaluate(1.1), Err(Error::EpsilonOutOfRange { .. })));
        assert!(matches!(r.evaluate(-0.1), Err(Error::EpsilonOutOfRange { .. })));
    }

    #[test]
    fn check_reports_first_bad_coefficient() {
        let mut r = compute_series(&bsc(0.3), 3).unwrap();
        r.settle_residuals[2] = 1.0;
        assert!(matches!(r.check(1e-8), Err(Error::SettlingViolation { k: 2, .. })));
    }

    #[test]
    fn series_budget_names_required_length() {
        let e = bsc(0.3).with_budget(1 << 5);
        assert_eq!(compute_series(&e, 7).unwrap_err(), Error::BudgetExceeded { alphabet: 2, length: 6, budget: 32 });
    }

    #[test]
    fn partial_sums_rebuild_coefficients() {
        let e = bsc(0.3);
        for (n, k) in [(2, 1), (3, 2), (4, 4), (4, 5)] {
            let direct = e.conditional_entropy_series(n, k).unwrap().coeff(k);
            let all = coefficient_from_partials(&e, n, k, false).unwrap();
            let pruned = coefficient_from_partials(&e, n, k, true).unwrap();
            let tol = 1e-10 * direct.abs().max(1.0);
            assert!((all - direct).abs() <= tol, "N={n} k={k}: {all} vs {direct}");
            assert!((pruned - direct).abs() <= tol, "N={n} k={k}: {pruned} vs {direct}");
        }
        assert_eq!(weight(&[2, 0, 1]), 3);
    }

    #[test]
    fn table_marks_settled_cells() {
        let t = settling_table(&bsc(0.3), 3, 5).unwrap();
        assert_eq!(t.lengths, [2, 3, 4, 5]);
        assert!(!t.is_settled(2, 3));
        assert!(t.is_settled(3, 3));
        assert!(t.column_disagreement(3).unwrap() <= 1e-9);
        assert!(t.column_disagreement(0).unwrap() <= 1e-14);
        let gap = t.unsettled_gaps().into_iter().find(|&(n, k, _)| n == 2 && k == 3).unwrap();
        assert!(gap.2 > 1e-6, "{gap:?}");
    }
}
