//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::power_stationary;
use hmpx_core::estimation::{conditional_bounds, mc_entropy_rate};
use hmpx_core::series::{self, settling_threshold, DEFAULT_SETTLING_TOLERANCE};
use hmpx_core::series::{
    random_blocking_instance, random_no_hole_instance, random_zero_prepend_instance, verify_lemma_blocking,
    verify_lemma_no_hole, verify_lemma_zero_prepend,
};
use hmpx_core::{Engine, HmpModel, MultiJet, MultiJetConfig, UniJet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn settling() -> Outcome {
    let engine = Engine::new(HmpModel::binary_symmetric(0.3).unwrap());
    let table = series::settling_table(&engine, 11, 8).unwrap();
    let mut worst = 0.0f64;
    let mut worst_k = 0;
    for k in 0..=11 {
        let settled: Vec<f64> = table
            .lengths
            .iter()
            .zip(&table.cells)
            .filter(|(n, _)| **n >= settling_threshold(k))
            .map(|(_, row)| row[k])
            .collect();
        for a in &settled {
            for b in &settled {
                let rel = (a - b).abs() / a.abs().max(b.abs());
                if rel > worst {
                    worst = rel;
                    worst_k = k;
                }
            }
        }
    }
    outcome(
        worst <= 1e-8,
        format!("p=0.3, K=11, N=2..8: max relative disagreement {worst:.3e} (k={worst_k}), tolerance 1e-8"),
    )
}

fn threshold_tightness() -> Outcome {
    for p in [0.3, 0.2, 0.4] {
        let engine = Engine::new(HmpModel::binary_symmetric(p).unwrap());
        let table = series::settling_table(&engine, 11, 8).unwrap();
        let gaps = table.unsettled_gaps();
        if let Some(&(n, k, _)) = gaps.iter().filter(|g| g.2 > 1e-6).max_by(|a, b| a.2.total_cmp(&b.2)) {
            let cell = table.cells[table.lengths.iter().position(|&l| l == n).unwrap()][k];
            let settled = table.settled_value(k).unwrap();
            let count = gaps.iter().filter(|g| g.2 > 1e-6).count();
            return outcome(
                true,
                format!(
                    "p={p}: {count} below-threshold cells differ by > 1e-6; largest C_{n}^({k}) = {cell:.10e} vs settled {settled:.10e}"
                ),
            );
        }
    }
    outcome(false, "no below-threshold cell differs by > 1e-6 for p in {0.3, 0.2, 0.4}".into())
}

fn zero_order_closed_form() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for trial in 0..50 {
        let size = 2 + trial % 2;
        let model = HmpModel::random(&mut rng, size).unwrap();
        let m = model.transition().to_rows();
        let pi = power_stationary(&m);
        let closed: f64 = -(0..size).map(|i| pi[i] * m[i].iter().map(|v| v * v.ln()).sum::<f64>()).sum::<f64>();
        let engine = Engine::new(model);
        let c0 = series::entropy_rate_series(&engine, 0, DEFAULT_SETTLING_TOLERANCE).unwrap().coefficients[0];
        worst = worst.max((c0 - closed).abs());
    }
    outcome(
        worst <= 1e-12,
        format!("50 random models, s in {{2,3}}: max |C^(0) - closed form| {worst:.3e}, tolerance 1e-12"),
    )
}

fn lemma_batteries() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    let mut worst = [0.0f64; 3];
    let mut failures = Vec::new();
    for trial in 0..100 {
        let model = HmpModel::random(&mut rng, 2 + trial % 2).unwrap();
        let engine = Engine::new(model);
        let (j, profile) = random_blocking_instance(&mut rng, engine.model().epsilon_max(), 6);
        let (k, r) = random_zero_prepend_instance(&mut rng, 6, 6);
        let hole = random_no_hole_instance(&mut rng, 6, 6);
        let reports = [
            verify_lemma_blocking(&engine, j, &profile, 1e-9).unwrap(),
            verify_lemma_zero_prepend(&engine, &k, r, 1e-9).unwrap(),
            verify_lemma_no_hole(&engine, &hole, 1e-9).unwrap(),
        ];
        for (slot, report) in reports.into_iter().enumerate() {
            worst[slot] = worst[slot].max(report.residual);
            if !report.pass {
                failures.push(format!("{} {}", report.lemma, report.instance));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "100 instances each: max residual blocking {:.3e}, zero-prepend {:.3e}, no-hole {:.3e}, tolerance 1e-9{}",
            worst[0],
            worst[1],
            worst[2],
            if failures.is_empty() { String::new() } else { format!("; failing: {failures:?}") }
        ),
    )
}

fn truncation_scaling() -> Outcome {
    let engine = Engine::new(HmpModel::binary_symmetric(0.3).unwrap());
    let result = series::entropy_rate_series(&engine, 5, DEFAULT_SETTLING_TOLERANCE).unwrap();
    let err = |eps: f64| (result.evaluate(eps).unwrap().value - engine.conditional_entropy_at(7, eps).unwrap()).abs();
    let errors = [err(0.02), err(0.01), err(0.005)];
    let ratios = [errors[0] / errors[1], errors[1] / errors[2]];
    let floor = 32.0 * 0.8;
    outcome(
        ratios.iter().all(|&r| r >= floor),
        format!(
            "K=5 vs C_7: errors {:.3e}, {:.3e}, {:.3e}; ratios {:.2}, {:.2}, required >= {floor}",
            errors[0], errors[1], errors[2], ratios[0], ratios[1]
        ),
    )
}

fn cross_engine() -> (Outcome, Outcome) {
    let model = HmpModel::binary_symmetric(0.3).unwrap();
    let engine = Engine::new(model.clone());
    let eps = 0.05;
    let series_value =
        series::entropy_rate_series(&engine, 11, DEFAULT_SETTLING_TOLERANCE).unwrap().evaluate(eps).unwrap().value;
    let mc = mc_entropy_rate(&model, eps, 1_000_000, 2024, 30).unwrap();
    let bounds = conditional_bounds(&engine, eps, 6).unwrap();
    let z = (mc.estimate - series_value) / mc.standard_error;
    let main = outcome(
        z.abs() <= 4.0 && bounds.contains(series_value, 1e-6),
        format!(
            "p=0.3, eps=0.05: MC {:.8} (SE {:.2e}, z = {z:.2}) vs series {series_value:.10}; bounds(6) [{:.12}, {:.12}], series offset {:.3e}, slack 1e-6",
            mc.estimate,
            mc.standard_error,
            bounds.lower,
            bounds.upper,
            series_value - bounds.upper.min(series_value).max(bounds.lower)
        ),
    );
    let extra = outcome(
        bounds.contains(mc.estimate, 4.0 * mc.standard_error),
        format!("MC estimate within [lower(6), upper(6)] +- 4 SE ({:.2e})", 4.0 * mc.standard_error),
    );
    (main, extra)
}

fn random_uni(rng: &mut ChaCha20Rng, order: usize) -> UniJet {
    let mut c: Vec<f64> = (0..=order).map(|_| rng.gen_range(-0.5..0.5)).collect();
    c[0] = rng.gen_range(1.0..2.0);
    UniJet::from_coeffs(c).unwrap()
}

fn random_multi(rng: &mut ChaCha20Rng, config: &MultiJetConfig) -> MultiJet {
    let mut jet = MultiJet::constant(config, rng.gen_range(1.0..2.0));
    let vars: Vec<MultiJet> = (0..config.vars()).map(|i| MultiJet::variable(config, i).unwrap()).collect();
    // random polynomial in the variables, truncated by the basis
    for _ in 0..6 {
        let mut term = MultiJet::constant(config, rng.gen_range(-0.5..0.5));
        for _ in 0..rng.gen_range(1..=4) {
            term = term.try_mul(&vars[rng.gen_range(0..vars.len())]).unwrap();
        }
        jet = jet.try_add(&term).unwrap();
    }
    jet
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn jet_algebra() -> Outcome {
    let order = 11;
    let log1p =
        UniJet::from_coeffs((0..=order).map(|k| if k <= 1 { 1.0 } else { 0.0 }).collect()).unwrap().ln().unwrap();
    let mercator = (1..=order).map(|k| (log1p.coeff(k) - if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64).abs());
    let log_err = mercator.fold(log1p.coeff(0).abs(), f64::max);

    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let mut ring = 0.0f64;
    let mut homo = 0.0f64;
    let zero = UniJet::constant(0.0, order);
    let one = UniJet::constant(1.0, order);
    for _ in 0..1000 {
        let (a, b, c) = (random_uni(&mut rng, order), random_uni(&mut rng, order), random_uni(&mut rng, order));
        let checks = [
            max_diff((&a + &b).coeffs(), (&b + &a).coeffs()),
            max_diff((&a * &b).coeffs(), (&b * &a).coeffs()),
            max_diff((&(&a + &b) + &c).coeffs(), (&a + &(&b + &c)).coeffs()),
            max_diff((&(&a * &b) * &c).coeffs(), (&a * &(&b * &c)).coeffs()),
            max_diff((&a * &(&b + &c)).coeffs(), (&(&a * &b) + &(&a * &c)).coeffs()),
            max_diff((&a + &zero).coeffs(), a.coeffs()),
            max_diff((&a * &one).coeffs(), a.coeffs()),
            max_diff((&a + &(-&a)).coeffs(), zero.coeffs()),
        ];
        ring = checks.into_iter().fold(ring, f64::max);
        let product_log = (&a * &b).ln().unwrap();
        let sum_log = &a.ln().unwrap() + &b.ln().unwrap();
        homo = homo.max(max_diff(product_log.coeffs(), sum_log.coeffs()));
    }

    let config = MultiJetConfig::total_degree(3, order).unwrap();
    for _ in 0..1000 {
        let (a, b) = (random_multi(&mut rng, &config), random_multi(&mut rng, &config));
        let prod = a.try_mul(&b).unwrap();
        let (ua, ub) = (a.specialize_to_univariate().unwrap(), b.specialize_to_univariate().unwrap());
        homo = homo.max(max_diff(prod.specialize_to_univariate().unwrap().coeffs(), (&ua * &ub).coeffs()));
        homo =
            homo.max(max_diff(a.ln().unwrap().specialize_to_univariate().unwrap().coeffs(), ua.ln().unwrap().coeffs()));
        let sym = max_diff(
            a.try_mul(&b).unwrap().terms().map(|t| t.1).collect::<Vec<_>>().as_slice(),
            b.try_mul(&a).unwrap().terms().map(|t| t.1).collect::<Vec<_>>().as_slice(),
        );
        ring = ring.max(sym);
    }
    outcome(
        log_err <= 1e-15 && ring <= 1e-12 && homo <= 1e-12,
        format!(
            "log(1+x) coefficient error {log_err:.3e} (tol 1e-15); K=11 over 1000 jets: ring {ring:.3e}, homomorphism {homo:.3e} (tol 1e-12)"
        ),
    )
}

fn normalization() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let order = 8;
    let mut worst = 0.0f64;
    for trial in 0..20 {
        let size = 2 + trial % 2;
        let length = if size == 2 { 6 } else { 5 } - trial % 3;
        let engine = Engine::new(HmpModel::random(&mut rng, size).unwrap());
        let profile = engine.jet_profile(order, length).unwrap();
        let mut total = UniJet::constant(0.0, order);
        for y in engine.sequences(length).unwrap() {
            total = &total + &engine.sequence_probability(&y, &profile).unwrap();
        }
        let mut unit = vec![0.0; order + 1];
        unit[0] = 1.0;
        worst = worst.max(max_diff(total.coeffs(), &unit));
    }
    outcome(
        worst <= 1e-12,
        format!("20 random models, N <= 6, K=8: max coefficient error {worst:.3e}, tolerance 1e-12"),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut all = true;
    let mut report = |label: &str, o: Outcome| {
        all &= o.pass;
        println!("{} {label}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    };
    report("[1] settling theorem", settling());
    report("[2] threshold tightness", threshold_tightness());
    report("[3] zero-order closed form", zero_order_closed_form());
    report("[4] lemma batteries", lemma_batteries());
    report("[5] truncation-order scaling", truncation_scaling());
    let (main, extra) = cross_engine();
    report("[6] cross-engine consistency", main);
    report("[6b] MC inside bounds", extra);
    report("[7] jet algebra", jet_algebra());
    report("[8] normalization as series", normalization());
    println!("acceptance finished in {:.2?}", start.elapsed());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
