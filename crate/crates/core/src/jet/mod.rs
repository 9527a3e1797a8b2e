//! Truncated Taylor arithmetic.
//!
//! [`UniJet`] carries the coefficients of a power series in one variable up
//! to a fixed order. [`MultiJet`] does the same in several variables over a
//! down-closed set of monomials. Both, and plain `f64`, implement [`Scalar`],
//! which is all the entropy engine needs.

mod multi;
mod uni;

pub use multi::{MultiJet, MultiJetConfig, MAX_DEGREE, MAX_PRODUCT_PAIRS, MAX_VARIABLES};
pub use uni::UniJet;

use crate::error::Result;

/// Number type the forward algorithm and entropy sums run over.
///
/// Values built from the same configuration share a coefficient layout, and
/// coefficient 0 is always the constant term. Arithmetic through this trait
/// assumes matching configurations; the checked inherent methods on the jet
/// types report mismatches as errors.
pub trait Scalar: Clone + Send + Sync {
    type Config: Clone + Send + Sync;

    fn constant(config: &Self::Config, value: f64) -> Self;

    fn config(&self) -> Self::Config;

    fn coeffs(&self) -> &[f64];

    fn coeffs_mut(&mut self) -> &mut [f64];

    /// Truncated product.
    fn times(&self, rhs: &Self) -> Self;

    /// Natural logarithm; fails unless the constant term is positive.
    fn log(&self) -> Result<Self>;

    /// Constant term.
    #[inline]
    fn value(&self) -> f64 {
        self.coeffs()[0]
    }

    /// `self += factor * rhs`
    #[inline]
    fn add_scaled(&mut self, factor: f64, rhs: &Self) {
        let dst = self.coeffs_mut();
        debug_assert_eq!(dst.len(), rhs.coeffs().len());
        for (d, s) in dst.iter_mut().zip(rhs.coeffs()) {
            *d += factor * s;
        }
    }

    #[inline]
    fn negate(&mut self) {
        self.coeffs_mut().iter_mut().for_each(|c| *c = -*c);
    }
}

impl Scalar for f64 {
    type Config = ();

    #[inline]
    fn constant(_: &(), value: f64) -> Self {
        value
    }

    fn config(&self) {}

    #[inline]
    fn coeffs(&self) -> &[f64] {
        core::slice::from_ref(self)
    }

    #[inline]
    fn coeffs_mut(&mut self) -> &mut [f64] {
        core::slice::from_mut(self)
    }

    #[inline]
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn log(&self) -> Result<Self> {
        if *self > 0.0 {
            Ok(crate::math::ln(*self))
        } else {
            Err(crate::Error::NonPositiveConstantTerm(*self))
        }
    }
}
