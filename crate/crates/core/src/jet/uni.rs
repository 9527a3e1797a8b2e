use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use super::Scalar;
use crate::error::{Error, Result};
use crate::math::{factorial, ln};

/// Power series in one variable truncated after `ε^order`.
///
/// `coeffs()[k]` is the Taylor coefficient of `ε^k`, i.e. `f^(k)(0) / k!`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniJet {
    coeffs: Vec<f64>,
}

impl UniJet {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = alloc::vec![0.0; order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// The expansion variable `ε` itself. At order 0 this is the zero jet.
    pub fn variable(order: usize) -> Self {
        let mut jet = Self::constant(0.0, order);
        if order >= 1 {
            jet.coeffs[1] = 1.0;
        }
        jet
    }

    /// Builds a jet from explicit coefficients; the order is `len - 1`.
    pub fn from_coeffs(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a jet needs at least one coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// k-th derivative at 0.
    pub fn derivative(&self, k: usize) -> f64 {
        self.coeff(k) * factorial(k as u32)
    }

    fn check(&self, rhs: &Self) -> Result<()> {
        if self.order() != rhs.order() {
            return Err(Error::OrderMismatch { left: self.order(), right: rhs.order() });
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(self.zip_with(rhs, |a, b| a + b))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(self.zip_with(rhs, |a, b| a - b))
    }

    /// Cauchy product truncated at the common order.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Natural logarithm via `b' = a' / a`, solved order by order:
    /// `b_k = (a_k - (1/k) Σ_{j=1}^{k-1} j b_j a_{k-j}) / a_0`.
    pub fn ln(&self) -> Result<Self> {
        let a = &self.coeffs;
        let a0 = a[0];
        if !(a0 > 0.0) {
            return Err(Error::NonPositiveConstantTerm(a0));
        }
        let mut b = alloc::vec![0.0; a.len()];
        b[0] = ln(a0);
        for k in 1..a.len() {
            let mut acc = 0.0;
            for j in 1..k {
                acc += j as f64 * b[j] * a[k - j];
            }
            b[k] = (a[k] - acc / k as f64) / a0;
        }
        Ok(Self { coeffs: b })
    }

    /// Horner evaluation of the truncated polynomial at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        Self { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| f(a, b)).collect() }
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len();
        let (a, b) = (&self.coeffs, &rhs.coeffs);
        let mut c = alloc::vec![0.0; n];
        for (k, ck) in c.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in 0..=k {
                acc += a[j] * b[k - j];
            }
            *ck = acc;
        }
        Self { coeffs: c }
    }
}

impl Scalar for UniJet {
    type Config = usize;

    fn constant(order: &usize, value: f64) -> Self {
        UniJet::constant(value, *order)
    }

    fn config(&self) -> usize {
        self.order()
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
        debug_assert_eq!(self.order(), rhs.order());
        self.mul_unchecked(rhs)
    }

    fn log(&self) -> Result<Self> {
        self.ln()
    }
}

// Operator forms panic on an order mismatch; use the `try_*` methods to get
// an error instead.

impl Add for &UniJet {
    type Output = UniJet;
    fn add(self, rhs: &UniJet) -> UniJet {
        self.try_add(rhs).expect("jet orders differ")
    }
}

impl Sub for &UniJet {
    type Output = UniJet;
    fn sub(self, rhs: &UniJet) -> UniJet {
        self.try_sub(rhs).expect("jet orders differ")
    }
}

impl Mul for &UniJet {
    type Output = UniJet;
    fn mul(self, rhs: &UniJet) -> UniJet {
        self.try_mul(rhs).expect("jet orders differ")
    }
}

impl Neg for &UniJet {
    type Output = UniJet;
    fn neg(self) -> UniJet {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn jet(c: &[f64]) -> UniJet {
        UniJet::from_coeffs(c.to_vec()).unwrap()
    }

    #[test]
    fn constants_and_variables() {
        assert_eq!(UniJet::constant(1.0, 3).coeffs(), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(UniJet::variable(3).coeffs(), &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(UniJet::variable(0).coeffs(), &[0.0]);
    }

    #[test]
    fn products() {
        let x = UniJet::variable(3);
        let one = UniJet::constant(1.0, 3);
        assert_eq!((&(&one + &x) * &(&one - &x)).coeffs(), &[1.0, 0.0, -1.0, 0.0]);
        let p = jet(&[1.0, 1.0, 0.0]);
        assert_eq!((&p * &p).coeffs(), &[1.0, 2.0, 1.0]);
        let x1 = UniJet::variable(1);
        assert_eq!((&x1 * &x1).coeffs(), &[0.0, 0.0]);
    }

    #[test]
    fn order_mismatch() {
        let err = UniJet::variable(2).try_mul(&UniJet::variable(3)).unwrap_err();
        assert_eq!(err, Error::OrderMismatch { left: 2, right: 3 });
        assert!(UniJet::variable(2).try_add(&UniJet::variable(1)).is_err());
    }

    #[test]
    fn log_mercator() {
        let a = jet(&[1.0, 1.0, 0.0, 0.0, 0.0]);
        let b = a.ln().unwrap();
        let expected = [0.0, 1.0, -0.5, 1.0 / 3.0, -0.25];
        for (got, want) in b.coeffs().iter().zip(expected) {
            assert!((got - want).abs() <= 1e-15, "{got} vs {want}");
        }
    }

    #[test]
    fn log_of_constant() {
        let b = UniJet::constant(3.0, 4).ln().unwrap();
        assert_eq!(b.coeff(0), ln(3.0));
        assert!(b.coeffs()[1..].iter().all(|&c| c == 0.0));
        assert!(matches!(UniJet::variable(2).ln(), Err(Error::NonPositiveConstantTerm(_))));
    }

    #[test]
    fn horner_and_derivatives() {
        let p = jet(&[1.0, -2.0, 3.0]);
        assert_eq!(p.eval(2.0), 1.0 - 4.0 + 12.0);
        assert_eq!(p.derivative(2), 6.0);
    }

    fn arb_jet(order: usize) -> impl Strategy<Value = UniJet> {
        prop::collection::vec(-2.0f64..2.0, order + 1).prop_map(|c| UniJet::from_coeffs(c).unwrap())
    }

    fn arb_positive_jet(order: usize) -> impl Strategy<Value = UniJet> {
        (0.2f64..3.0, prop::collection::vec(-1.0f64..1.0, order)).prop_map(|(c0, rest)| {
            let mut c = vec![c0];
            c.extend(rest);
            UniJet::from_coeffs(c).unwrap()
        })
    }

    fn close(a: &UniJet, b: &UniJet, rel: f64) -> bool {
        let scale = a.coeffs().iter().chain(b.coeffs()).fold(1.0f64, |m, c| m.max(c.abs()));
        a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| (x - y).abs() <= rel * scale)
    }

    proptest! {
        #[test]
        fn log_of_square_is_twice_log(a in arb_positive_jet(8)) {
            let lhs = (&a * &a).ln().unwrap();
            let rhs = a.ln().unwrap().scale(2.0);
            prop_assert!(close(&lhs, &rhs, 1e-12));
        }

        #[test]
        fn log_of_product_is_sum(a in arb_positive_jet(8), b in arb_positive_jet(8)) {
            let lhs = (&a * &b).ln().unwrap();
            let rhs = &a.ln().unwrap() + &b.ln().unwrap();
            prop_assert!(close(&lhs, &rhs, 1e-12));
        }

        #[test]
        fn product_is_commutative(a in arb_jet(6), b in arb_jet(6)) {
            prop_assert!(close(&(&a * &b), &(&b * &a), 1e-12));
        }
    }
}
