use std::num::NonZeroUsize;

use hmpx_core::estimation::{self, RNG_DESCRIPTION};
use hmpx_core::series::{self, Lemma, LemmaReport};
use hmpx_core::{Engine, HmpModel};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::cli::{Command, LemmaChoice, RunConfig};
use crate::error::{CliError, ExitStatus, Result};
use crate::executor::ThreadExecutor;
use crate::model_file::load_model;
use crate::report::*;

/// Longest instance and largest total derivative order used by `verify`.
pub const VERIFY_MAX_LENGTH: usize = 6;
pub const VERIFY_MAX_WEIGHT: u32 = 6;

/// Rendered output plus the status the process should exit with.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub status: ExitStatus,
}

type CliEngine = Engine<ThreadExecutor>;

pub fn execute(config: RunConfig) -> Result<Outcome> {
    let model = load_model(&config.model)?;
    check_epsilon(&config, &model)?;
    let workers =
        NonZeroUsize::new(config.workers).ok_or_else(|| CliError::Validation("--workers must be at least 1".into()))?;
    let engine =
        Engine::new(model).with_budget(config.budget).with_executor(ThreadExecutor::new(workers), config.chunks);
    match config.command.clone() {
        Command::Expand { order } => expand(&engine, config, order),
        Command::Table { order, n_max } => table(&engine, config, order, n_max),
        Command::Entropy { n, epsilon } => entropy(&engine, config, n, epsilon),
        Command::Verify { lemma, trials, seed } => verify(&engine, config, lemma, trials, seed),
        Command::Mc { epsilon, length, seed, batches, order } => {
            mc(&engine, config, epsilon, length, seed, batches, order)
        }
        Command::Bounds { epsilon, n_max } => bounds(&engine, config, epsilon, n_max),
    }
}

fn check_epsilon(config: &RunConfig, model: &HmpModel) -> Result<()> {
    if let Some(eps) = config.command.epsilon() {
        model.noise().check_epsilon(eps)?;
    }
    Ok(())
}

fn finish<T: Serialize + Tabular>(config: RunConfig, rng: Option<&str>, result: T, status: ExitStatus) -> Outcome {
    let document = Document { metadata: Metadata::new(config.log_base, rng), config, result };
    Outcome { text: document.render(), status }
}

fn expand(engine: &CliEngine, config: RunConfig, order: usize) -> Result<Outcome> {
    let result = series::compute_series(engine, order)?;
    let settled = result.check(config.settling_tolerance).is_ok();
    let base = config.log_base;
    let report = ExpandResult {
        order,
        coefficients: result.coefficients.iter().map(|&c| base.convert(c)).collect(),
        thresholds: result.thresholds.clone(),
        settle_residuals: result.settle_residuals.iter().map(|&r| base.convert(r)).collect(),
        reference_length: result.reference_length,
        checked_lengths: result.checked_lengths.clone(),
        epsilon_max: Some(result.epsilon_max).filter(|v| v.is_finite()),
        settled,
    };
    let status = if settled { ExitStatus::Success } else { ExitStatus::CheckFailed };
    Ok(finish(config, None, report, status))
}

fn table(engine: &CliEngine, config: RunConfig, order: usize, n_max: usize) -> Result<Outcome> {
    let table = series::settling_table(engine, order, n_max)?;
    let base = config.log_base;
    let cells = table
        .lengths
        .iter()
        .zip(&table.cells)
        .flat_map(|(&n, row)| {
            let table = &table;
            row.iter().enumerate().map(move |(k, &c)| TableRow {
                n,
                k,
                coefficient: base.convert(c),
                settled: table.is_settled(n, k),
            })
        })
        .collect();
    let report = TableResult { order, lengths: table.lengths.clone(), cells };
    Ok(finish(config, None, report, ExitStatus::Success))
}

fn entropy(engine: &CliEngine, config: RunConfig, n: usize, epsilon: f64) -> Result<Outcome> {
    let block = engine.block_entropy_at(n, epsilon)?;
    let conditional = if n == 1 { block } else { engine.conditional_entropy_at(n, epsilon)? };
    let base = config.log_base;
    let report = EntropyResult {
        n,
        epsilon,
        block_entropy: base.convert(block),
        conditional_entropy: base.convert(conditional),
    };
    Ok(finish(config, None, report, ExitStatus::Success))
}

fn verify(engine: &CliEngine, config: RunConfig, choice: LemmaChoice, trials: usize, seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let tol = config.lemma_tolerance;
    let eps_max = engine.model().epsilon_max();
    let mut reports: Vec<LemmaReport> = Vec::new();
    for _ in 0..trials {
        // every instance is drawn so a given seed yields the same instances
        // whichever lemmas are selected
        let (j, profile) = series::random_blocking_instance(&mut rng, eps_max, VERIFY_MAX_LENGTH);
        let (k, r) = series::random_zero_prepend_instance(&mut rng, VERIFY_MAX_LENGTH, VERIFY_MAX_WEIGHT);
        let hole = series::random_no_hole_instance(&mut rng, VERIFY_MAX_LENGTH, VERIFY_MAX_WEIGHT);
        if choice.includes(Lemma::Blocking.id()) {
            reports.push(series::verify_lemma_blocking(engine, j, &profile, tol)?);
        }
        if choice.includes(Lemma::ZeroPrepend.id()) {
            reports.push(series::verify_lemma_zero_prepend(engine, &k, r, tol)?);
        }
        if choice.includes(Lemma::NoHole.id()) {
            reports.push(series::verify_lemma_no_hole(engine, &hole, tol)?);
        }
    }
    let base = config.log_base;
    let failures = reports.iter().filter(|r| !r.pass).count();
    let max_residual = base.convert(reports.iter().map(|r| r.residual).fold(0.0, f64::max));
    let rows = reports
        .into_iter()
        .map(|r| LemmaRow {
            lemma: r.lemma.id(),
            instance: r.instance,
            residual: base.convert(r.residual),
            tolerance: base.convert(r.tolerance),
            pass: r.pass,
        })
        .collect();
    let report = VerifyResult { trials, seed, failures, max_residual, reports: rows };
    let status = if failures == 0 { ExitStatus::Success } else { ExitStatus::CheckFailed };
    Ok(finish(config, Some(RNG_DESCRIPTION), report, status))
}

fn mc(
    engine: &CliEngine,
    config: RunConfig,
    epsilon: f64,
    length: usize,
    seed: u64,
    batches: usize,
    order: Option<usize>,
) -> Result<Outcome> {
    // the series is computed first so budget and settling failures surface
    // before the long sampling run
    let series_value = order
        .map(|k| -> Result<_> {
            let result = series::entropy_rate_series(engine, k, config.settling_tolerance)?;
            Ok((k, result.evaluate(epsilon)?))
        })
        .transpose()?;
    let estimate = estimation::mc_entropy_rate(engine.model(), epsilon, length, seed, batches)?;
    let base = config.log_base;
    let series = series_value.map(|(k, eval)| SeriesComparison {
        order: k,
        value: base.convert(eval.value),
        remainder_estimate: Some(base.convert(eval.remainder_estimate)).filter(|v| v.is_finite()),
        z_score: (estimate.estimate - eval.value) / estimate.standard_error,
    });
    let report = McResult {
        epsilon,
        length,
        seed,
        batches,
        estimate: base.convert(estimate.estimate),
        standard_error: base.convert(estimate.standard_error),
        series,
    };
    Ok(finish(config, Some(RNG_DESCRIPTION), report, ExitStatus::Success))
}

fn bounds(engine: &CliEngine, config: RunConfig, epsilon: f64, n_max: usize) -> Result<Outcome> {
    let base = config.log_base;
    let rows = estimation::bounds_curve(engine, epsilon, n_max)?
        .into_iter()
        .map(|b| BoundsRow {
            n: b.length,
            lower: base.convert(b.lower),
            upper: base.convert(b.upper),
            gap: base.convert(b.gap()),
        })
        .collect();
    let report = BoundsResult { epsilon, rows };
    Ok(finish(config, None, report, ExitStatus::Success))
}
