//! Test-only oracles that share no code path with the engine.

#![allow(dead_code)]

/// Stationary distribution by power iteration on the raw matrix.
pub fn power_stationary(m: &[Vec<f64>]) -> Vec<f64> {
    let s = m.len();
    let mut pi = vec![1.0 / s as f64; s];
    for _ in 0..20_000 {
        let next: Vec<f64> = (0..s).map(|j| (0..s).map(|i| pi[i] * m[i][j]).sum()).collect();
        let total: f64 = next.iter().sum();
        pi = next.into_iter().map(|v| v / total).collect();
    }
    pi
}

/// `P(y)` as the explicit double sum over hidden paths:
/// `Σ_x π_{x1} Π m_{x_i x_{i+1}} Π (δ_{x_i y_i} + ε_i t_{x_i y_i})`.
/// Accepts any ε, including negative values.
pub fn joint_sum_probability(m: &[Vec<f64>], t: &[Vec<f64>], pi: &[f64], eps: &[f64], y: &[usize]) -> f64 {
    let s = m.len();
    let n = y.len();
    let mut total = 0.0;
    let mut x = vec![0usize; n];
    loop {
        let mut p = pi[x[0]];
        for i in 0..n {
            if i > 0 {
                p *= m[x[i - 1]][x[i]];
            }
            let delta = if x[i] == y[i] { 1.0 } else { 0.0 };
            p *= delta + eps[i] * t[x[i]][y[i]];
        }
        total += p;
        let mut pos = n;
        loop {
            if pos == 0 {
                return total;
            }
            pos -= 1;
            x[pos] += 1;
            if x[pos] < s {
                break;
            }
            x[pos] = 0;
        }
    }
}

/// `H([Z]_1^N)` by summing over every (hidden, observed) pair.
pub fn brute_block_entropy(m: &[Vec<f64>], t: &[Vec<f64>], pi: &[f64], eps: &[f64]) -> f64 {
    let s = m.len();
    let n = eps.len();
    let mut y = vec![0usize; n];
    let mut h = 0.0;
    loop {
        let p = joint_sum_probability(m, t, pi, eps, &y);
        if p > 0.0 {
            h -= p * p.ln();
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return h;
            }
            pos -= 1;
            y[pos] += 1;
            if y[pos] < s {
                break;
            }
            y[pos] = 0;
        }
    }
}

pub fn brute_conditional_entropy(m: &[Vec<f64>], t: &[Vec<f64>], pi: &[f64], eps: &[f64]) -> f64 {
    brute_block_entropy(m, t, pi, eps) - brute_block_entropy(m, t, pi, &eps[..eps.len() - 1])
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Central k-th difference quotient with points at `(k/2 - j) h`.
pub fn central_derivative(f: &dyn Fn(f64) -> f64, k: u32, h: f64) -> f64 {
    let mut acc = 0.0;
    for j in 0..=k {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binomial(k, j) * f((f64::from(k) / 2.0 - f64::from(j)) * h);
    }
    acc / h.powi(k as i32)
}

/// Two Richardson steps on the O(h²) central difference, leaving O(h⁶).
pub fn richardson_derivative(f: &dyn Fn(f64) -> f64, k: u32, h: f64) -> f64 {
    let d: Vec<f64> = (0..3).map(|i| central_derivative(f, k, h / f64::from(1u32 << i))).collect();
    let r0 = (4.0 * d[1] - d[0]) / 3.0;
    let r1 = (4.0 * d[2] - d[1]) / 3.0;
    (16.0 * r1 - r0) / 15.0
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * f64::from(i))
}

pub fn binary_entropy(p: f64) -> f64 {
    -p * p.ln() - (1.0 - p) * (1.0 - p).ln()
}

pub fn bsc_rows(p: f64) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    (vec![vec![1.0 - p, p], vec![p, 1.0 - p]], vec![vec![-1.0, 1.0], vec![1.0, -1.0]])
}
