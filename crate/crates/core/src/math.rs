//! Float helpers that work without `std`.

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn powi(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..n {
        acc *= x;
    }
    acc
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * f64::from(i))
}

/// Neumaier compensated accumulator over a fixed number of lanes.
///
/// Each lane keeps a running sum and a running error term. Adding values in a
/// fixed order yields a bit-reproducible result.
#[derive(Debug, Clone, PartialEq)]
pub struct CompensatedSum {
    sum: alloc::vec::Vec<f64>,
    comp: alloc::vec::Vec<f64>,
}

impl CompensatedSum {
    pub fn new(lanes: usize) -> Self {
        Self { sum: alloc::vec![0.0; lanes], comp: alloc::vec![0.0; lanes] }
    }

    pub fn lanes(&self) -> usize {
        self.sum.len()
    }

    #[inline]
    pub fn add(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.sum.len());
        for ((s, c), &v) in self.sum.iter_mut().zip(self.comp.iter_mut()).zip(values) {
            neumaier_add(s, c, v);
        }
    }

    /// Folds another partial sum into this one, keeping both error terms.
    pub fn merge(&mut self, other: &CompensatedSum) {
        debug_assert_eq!(other.lanes(), self.lanes());
        for i in 0..self.sum.len() {
            neumaier_add(&mut self.sum[i], &mut self.comp[i], other.sum[i]);
            neumaier_add(&mut self.sum[i], &mut self.comp[i], other.comp[i]);
        }
    }

    pub fn finish(&self) -> alloc::vec::Vec<f64> {
        self.sum.iter().zip(&self.comp).map(|(s, c)| s + c).collect()
    }
}

#[inline]
fn neumaier_add(sum: &mut f64, comp: &mut f64, v: f64) {
    let t = *sum + v;
    if abs(*sum) >= abs(v) {
        *comp += (*sum - t) + v;
    } else {
        *comp += (v - t) + *sum;
    }
    *sum = t;
}
