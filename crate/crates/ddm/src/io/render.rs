use std::fmt::Write;

use ddm_core::{DividendPoint, ValuationResult};
use serde::{Deserialize, Serialize};

/// Output flavour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    /// Human-readable report, values to 5 decimals.
    #[default]
    Text,
    /// One JSON object per record, full precision.
    Json,
}

/// Market price relative to the model value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    /// Price below value.
    Underpriced,
    /// Price above value.
    Overpriced,
    /// Price within [`Verdict::FAIR_BAND`] of value.
    Fair,
}

impl Verdict {
    /// Relative distance from P₀ still called fair.
    pub const FAIR_BAND: f64 = 1e-4;

    /// Compares an observed price with the model value.
    pub fn assess(present_value: f64, market_price: f64) -> Self {
        if (market_price - present_value).abs() <= Self::FAIR_BAND * present_value.abs() {
            Verdict::Fair
        } else if market_price < present_value {
            Verdict::Underpriced
        } else {
            Verdict::Overpriced
        }
    }

    /// Upper-case name used in text and JSON output.
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Underpriced => "UNDERPRICED",
            Verdict::Overpriced => "OVERPRICED",
            Verdict::Fair => "FAIR",
        }
    }
}

/// A valuation with its label and optional price comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValuationRecord {
    /// Security label.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// P₀.
    pub present_value: f64,
    /// Per-stage present values.
    pub stage_terms: Vec<f64>,
    /// Perpetuity present value.
    pub terminal_term: f64,
    /// Observed price.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub market_price: Option<f64>,
    /// Present when `market_price` is.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

impl ValuationRecord {
    /// Wraps a result, deriving the verdict from `market_price`.
    pub fn new(name: Option<String>, result: ValuationResult, market_price: Option<f64>) -> Self {
        let verdict = market_price.map(|p| Verdict::assess(result.present_value, p));
        Self {
            name,
            present_value: result.present_value,
            stage_terms: result.stage_terms,
            terminal_term: result.terminal_term,
            market_price,
            verdict,
        }
    }
}

/// Renders one valuation.
pub fn render_result(record: &ValuationRecord, format: Format) -> String {
    match format {
        Format::Json => {
            let mut line = serde_json::to_string(record).expect("record serializes");
            line.push('\n');
            line
        }
        Format::Text => {
            let mut out = String::new();
            if let Some(name) = &record.name {
                let _ = writeln!(out, "name           {name}");
            }
            let _ = writeln!(out, "present_value  {:.5}", record.present_value);
            for (k, term) in record.stage_terms.iter().enumerate() {
                let _ = writeln!(out, "  stage {:<6} {term:.5}", k + 1);
            }
            let _ = writeln!(out, "  terminal     {:.5}", record.terminal_term);
            if let (Some(price), Some(verdict)) = (record.market_price, record.verdict) {
                let _ = writeln!(out, "market_price   {price:.5}");
                let _ = writeln!(out, "verdict        {}", verdict.label());
            }
            out
        }
    }
}

/// Renders a projected dividend stream.
pub fn render_dividends(points: &[DividendPoint], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Json => {
            for p in points {
                let _ = writeln!(
                    out,
                    r#"{{"year":{},"amount":{}}}"#,
                    p.year,
                    json_number(p.amount)
                );
            }
        }
        Format::Text => {
            let _ = writeln!(out, "year  dividend");
            for p in points {
                let _ = writeln!(out, "{:>4}  {:.5}", p.year, p.amount);
            }
        }
    }
    out
}

pub(crate) fn json_number(x: f64) -> String {
    serde_json::to_string(&x).expect("f64 serializes")
}
