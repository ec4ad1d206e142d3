use ddm_core::{DiscountContext, DividendSchedule};
use serde::{Deserialize, Serialize};

use super::{validate, IoError, RawInputs};

/// A validated single-security schedule file.
///
/// ```json
/// {
///   "name": "bank",
///   "initial_dividend": 2.0,
///   "required_return": 0.09,
///   "terminal_growth": 0.06,
///   "market_price": 65.0,
///   "stages": [ { "growth": 0.05, "years": 3 }, { "growth": 0.07, "years": 4 } ]
/// }
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleDocument {
    /// Optional label carried into the output.
    pub name: Option<String>,
    /// D₀, stages and terminal growth.
    pub schedule: DividendSchedule,
    /// Required return.
    pub context: DiscountContext,
    /// Observed price for a fair-value verdict.
    pub market_price: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    initial_dividend: f64,
    required_return: f64,
    terminal_growth: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    market_price: Option<f64>,
    #[serde(default)]
    stages: Vec<RawStage>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStage {
    growth: f64,
    years: i64,
}

/// Parses and validates a JSON schedule document.
pub fn parse_schedule(text: &str) -> Result<ScheduleDocument, IoError> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    let stages: Vec<(f64, i64)> = raw.stages.iter().map(|s| (s.growth, s.years)).collect();
    let (schedule, context) = validate(&RawInputs {
        initial_dividend: raw.initial_dividend,
        stages: &stages,
        terminal_growth: raw.terminal_growth,
        required_return: raw.required_return,
        market_price: raw.market_price,
    })
    .map_err(|(field, constraint)| IoError::Validation {
        field: field.to_string(),
        constraint,
    })?;
    Ok(ScheduleDocument {
        name: raw.name,
        schedule,
        context,
        market_price: raw.market_price,
    })
}

/// Serializes a document back to the schema [`parse_schedule`] reads.
pub fn render_schedule(doc: &ScheduleDocument) -> String {
    let raw = RawDocument {
        name: doc.name.clone(),
        initial_dividend: doc.schedule.initial_dividend(),
        required_return: doc.context.required_return(),
        terminal_growth: doc.schedule.terminal_growth(),
        market_price: doc.market_price,
        stages: doc
            .schedule
            .stages()
            .iter()
            .map(|s| RawStage {
                growth: s.growth_rate(),
                years: i64::from(s.duration()),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("document fields are plain numbers and strings")
}
