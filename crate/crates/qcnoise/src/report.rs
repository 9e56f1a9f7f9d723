//! Report types for the CLI and their JSON/CSV rendering.
//!
//! JSON comes straight from serde (shortest-round-trip floats, so values
//! reparse exactly); the field layout is pinned by the schemas in
//! `schemas/`. CSV is a flat `key,value` view of the same object with
//! dotted paths for nesting, except for the row-shaped reports (λ profile,
//! weight histogram) which have their own layouts.

use serde::Serialize;
use serde_json::Value;

use qcnoise_core::bounds::DivergenceReport;
use qcnoise_core::{BiasExponent, WeightStats};

use crate::io::fmt_f64;

/// Output rendering picked by `--format`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// A report the CLI can emit in either format.
pub trait Render: Serialize {
    fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    fn to_csv(&self) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        flat_csv(&value)
    }

    fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
        }
    }
}

/// `key,value` rows with dotted paths, keys in sorted order.
pub fn flat_csv(value: &Value) -> String {
    let mut rows = Vec::new();
    walk(value, String::new(), &mut rows);
    let mut out = String::from("key,value\n");
    for (key, val) in rows {
        out.push_str(&csv_field(&key));
        out.push(',');
        out.push_str(&csv_field(&val));
        out.push('\n');
    }
    out
}

fn walk(value: &Value, path: String, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let next = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                walk(v, next, rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                walk(v, format!("{path}[{i}]"), rows);
            }
        }
        Value::Null => rows.push((path, String::new())),
        Value::Bool(b) => rows.push((path, b.to_string())),
        Value::Number(num) => {
            let text = if let Some(i) = num.as_i64() {
                i.to_string()
            } else if let Some(u) = num.as_u64() {
                u.to_string()
            } else {
                fmt_f64(num.as_f64().expect("number is one of i64/u64/f64"))
            };
            rows.push((path, text));
        }
        Value::String(s) => rows.push((path, s.clone())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Divergence analysis of one configuration (commands `exact` and `bounds`).
#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    /// Support lists of the fixed polynomials, when they were supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<String>>,
    #[serde(flatten)]
    pub divergence: DivergenceReport,
}

impl Render for AnalysisReport {}

/// The sandwich check: reverse-Pinsker lower bound and Pinsker upper bound
/// around the exact statistical distance.
#[derive(Debug, Serialize)]
pub struct SandwichReport {
    pub t: Vec<String>,
    #[serde(flatten)]
    pub divergence: DivergenceReport,
    pub sandwich: SandwichCheck,
}

#[derive(Debug, Serialize)]
pub struct SandwichCheck {
    /// Whether the preconditions held and the assertion was evaluated.
    pub checked: bool,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// None when the preconditions failed (informational run).
    pub pass: Option<bool>,
}

impl Render for SandwichReport {}

/// λ profile export (command `lambda`).
#[derive(Debug, Serialize)]
pub struct LambdaReport {
    pub n: usize,
    pub s: usize,
    pub tau: usize,
    pub t: Vec<String>,
    pub lambda: Vec<usize>,
}

impl Render for LambdaReport {
    fn to_csv(&self) -> String {
        let mut out = String::from("d,lambda\n");
        for (d, value) in self.lambda.iter().enumerate() {
            out.push_str(&format!("{d},{value}\n"));
        }
        out
    }
}

/// Closed-form pairwise joint law plus the residual against the exact
/// marginalized table when enumerable (command `pair`).
#[derive(Debug, Serialize)]
pub struct PairReport {
    pub n: usize,
    pub s: usize,
    pub tau: usize,
    pub omega: BiasExponent,
    pub t: Vec<String>,
    pub i: usize,
    pub j: usize,
    pub lambda: usize,
    pub table: PairCells,
    /// Pr[Cᵢ = 1] = Pr[Cⱼ = 1] = p(τω).
    pub marginal: f64,
    /// max |closed-form − exact| over the four cells; absent above the cap.
    pub residual: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct PairCells {
    pub p00: f64,
    pub p01: f64,
    pub p10: f64,
    pub p11: f64,
}

impl Render for PairReport {}

/// Weight experiment summary plus histogram (command `weights`).
#[derive(Debug, Serialize)]
pub struct WeightReport {
    pub n: usize,
    pub s: usize,
    pub tau: usize,
    pub omega: BiasExponent,
    pub t: Vec<String>,
    pub trials: u64,
    pub seed: u64,
    pub mean: f64,
    pub variance: f64,
    pub expected_mean: f64,
    pub z_score: f64,
    /// Populated bins as [weight, count] pairs, in weight order.
    pub histogram: Vec<(usize, u64)>,
    #[serde(skip)]
    pub stats: WeightStats,
}

impl Render for WeightReport {
    fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        crate::io::write_weight_csv(&mut buf, &self.stats).expect("vec write");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}
