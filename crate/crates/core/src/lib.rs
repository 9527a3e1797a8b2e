//! Taylor expansion of the entropy rate of a hidden Markov process around the
//! noiseless limit.
//!
//! The observed process `Y` is a strictly positive Markov chain `X` seen
//! through a memoryless channel `R(ε) = I + εT`. The k-th Taylor coefficient
//! of the conditional entropy `C_N = H_N - H_{N-1}` stops depending on `N` once
//! `N >= ceil((k + 3) / 2)`, and then equals the k-th coefficient of the
//! entropy rate. This crate computes those finite-system entropies exactly, by
//! enumerating observation sequences with a forward pass over truncated
//! power series ("jets"), and verifies the supporting identities numerically.
//!
//! Layout:
//!
//! - [`model`]: transition matrix, noise generator, stationary distribution.
//! - [`jet`]: univariate and multivariate truncated Taylor arithmetic.
//! - [`engine`]: sequence enumeration, forward algorithm, block and
//!   conditional entropies, per-site noise functions `F_N`.
//! - [`series`]: entropy-rate coefficients, settling tables, identity checks.
//! - [`estimation`]: path sampling, Monte Carlo rate estimate, bounds.
//!
//! The crate is `no_std` and only needs `alloc`. All logarithms are natural.

#![no_std]
// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod math;

pub mod engine;
pub mod estimation;
pub mod jet;
pub mod model;
pub mod series;

pub use engine::{Engine, Executor, Sequential, SiteProfile, DEFAULT_BUDGET};
pub use error::{Error, Result};
pub use jet::{MultiJet, MultiJetConfig, Scalar, UniJet};
pub use model::{HmpModel, NoiseGenerator, StochasticMatrix};
pub use series::{LemmaReport, SeriesResult, SettlingTable};

/// Version string embedded in machine-readable outputs.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
