use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cli::{Format, LogBase, RunConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub engine_version: String,
    pub log_base: LogBase,
    pub unit: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rng: Option<String>,
}

impl Metadata {
    pub fn new(log_base: LogBase, rng: Option<&str>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            engine_version: hmpx_core::ENGINE_VERSION.into(),
            log_base,
            unit: log_base.unit().into(),
            rng: rng.map(Into::into),
        }
    }
}

/// One output document: provenance plus a command-specific result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document<T> {
    pub metadata: Metadata,
    pub config: RunConfig,
    pub result: T,
}

/// Tabular view used for CSV output.
pub trait Tabular {
    fn header(&self) -> &'static str;
    fn rows(&self) -> Vec<Vec<String>>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpandResult {
    pub order: usize,
    pub coefficients: Vec<f64>,
    pub thresholds: Vec<usize>,
    pub settle_residuals: Vec<f64>,
    pub reference_length: usize,
    pub checked_lengths: Vec<usize>,
    /// `None` when the noise generator is zero.
    pub epsilon_max: Option<f64>,
    pub settled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: usize,
    pub coefficient: f64,
    pub settled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableResult {
    pub order: usize,
    pub lengths: Vec<usize>,
    pub cells: Vec<TableRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult {
    #[serde(rename = "N")]
    pub n: usize,
    pub epsilon: f64,
    pub block_entropy: f64,
    pub conditional_entropy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaRow {
    pub lemma: u8,
    pub instance: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyResult {
    pub trials: usize,
    pub seed: u64,
    pub failures: usize,
    pub max_residual: f64,
    pub reports: Vec<LemmaRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesComparison {
    pub order: usize,
    pub value: f64,
    /// Heuristic tail size; `None` when not finite.
    pub remainder_estimate: Option<f64>,
    pub z_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McResult {
    pub epsilon: f64,
    pub length: usize,
    pub seed: u64,
    pub batches: usize,
    pub estimate: f64,
    pub standard_error: f64,
    pub series: Option<SeriesComparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsResult {
    pub epsilon: f64,
    pub rows: Vec<BoundsRow>,
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn optional(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

impl Tabular for ExpandResult {
    fn header(&self) -> &'static str {
        "k,coefficient,threshold,settle_residual"
    }

    fn rows(&self) -> Vec<Vec<String>> {
        (0..=self.order)
            .map(|k| {
                vec![
                    k.to_string(),
                    float(self.coefficients[k]),
                    self.thresholds[k].to_string(),
                    float(self.settle_residuals[k]),
                ]
            })
            .collect()
    }
}

impl Tabular for TableResult {
    fn header(&self) -> &'static str {
        "N,k,coefficient,settled"
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.cells
            .iter()
            .map(|c| vec![c.n.to_string(), c.k.to_string(), float(c.coefficient), c.settled.to_string()])
            .collect()
    }
}

impl Tabular for EntropyResult {
    fn header(&self) -> &'static str {
        "N,epsilon,block_entropy,conditional_entropy"
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![self.n.to_string(), float(self.epsilon), float(self.block_entropy), float(self.conditional_entropy)]]
    }
}

impl Tabular for VerifyResult {
    fn header(&self) -> &'static str {
        "lemma,instance,residual,tolerance,pass"
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.reports
            .iter()
            .map(|r| {
                vec![r.lemma.to_string(), r.instance.clone(), float(r.residual), float(r.tolerance), r.pass.to_string()]
            })
            .collect()
    }
}

impl Tabular for McResult {
    fn header(&self) -> &'static str {
        "epsilon,length,seed,batches,estimate,standard_error,series_order,series_value,z_score"
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let series = self.series.as_ref();
        vec![vec![
            float(self.epsilon),
            self.length.to_string(),
            self.seed.to_string(),
            self.batches.to_string(),
            float(self.estimate),
            float(self.standard_error),
            series.map(|s| s.order.to_string()).unwrap_or_default(),
            optional(series.map(|s| s.value)),
            optional(series.map(|s| s.z_score)),
        ]]
    }
}

impl Tabular for BoundsResult {
    fn header(&self) -> &'static str {
        "N,lower,upper,gap"
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows.iter().map(|r| vec![r.n.to_string(), float(r.lower), float(r.upper), float(r.gap)]).collect()
    }
}

impl<T: Serialize + Tabular> Document<T> {
    pub fn render(&self) -> String {
        match self.config.format {
            Format::Json => {
                let mut text = serde_json::to_string_pretty(self).expect("documents serialize");
                text.push('\n');
                text
            }
            Format::Csv => self.render_csv(),
        }
    }

    /// Provenance goes in leading `#` comment lines, then the header and rows.
    fn render_csv(&self) -> String {
        let mut out = String::new();
        let metadata = serde_json::to_string(&self.metadata).expect("metadata serializes");
        let config = serde_json::to_string(&self.config).expect("config serializes");
        writeln!(out, "# metadata: {metadata}").unwrap();
        writeln!(out, "# config: {config}").unwrap();
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(self.result.header().split(',')).expect("in-memory write");
        for row in self.result.rows() {
            writer.write_record(&row).expect("in-memory write");
        }
        let body = writer.into_inner().expect("in-memory flush");
        out.push_str(std::str::from_utf8(&body).expect("fields are UTF-8"));
        out
    }
}
