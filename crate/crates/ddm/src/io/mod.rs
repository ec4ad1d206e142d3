//! Input documents, batch tables and result output.
//!
//! Rates are decimal fractions everywhere (`0.05`, never `5`).

mod batch;
mod document;
pub(crate) mod render;

pub use batch::{parse_batch, BatchRow, BatchTable, RowError, MAX_BATCH_STAGES};
pub use document::{parse_schedule, render_schedule, ScheduleDocument};
pub use render::{render_dividends, render_result, Format, ValuationRecord, Verdict};

use ddm_core::{DiscountContext, DividendSchedule, Error as CoreError, Field};

/// Failure to read or validate an input document.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IoError {
    /// The text is not a well-formed document.
    #[error("parse error: {0}")]
    Parse(String),
    /// A field is well-formed but violates a domain constraint.
    #[error("invalid {field}: {constraint}")]
    Validation {
        /// Offending field, e.g. `stages[0].years`.
        field: String,
        /// Violated constraint.
        constraint: String,
    },
}

/// Unvalidated inputs shared by both file formats.
pub(crate) struct RawInputs<'a> {
    pub initial_dividend: f64,
    pub stages: &'a [(f64, i64)],
    pub terminal_growth: f64,
    pub required_return: f64,
    pub market_price: Option<f64>,
}

/// Runs every domain check on raw inputs, reporting the first violation.
pub(crate) fn validate(
    raw: &RawInputs<'_>,
) -> Result<(DividendSchedule, DiscountContext), (Field, String)> {
    let mut stages = Vec::with_capacity(raw.stages.len());
    for (i, &(growth, years)) in raw.stages.iter().enumerate() {
        let years = u32::try_from(years).map_err(|_| {
            (
                Field::StageDuration(i),
                "must be a whole number of years >= 0".to_string(),
            )
        })?;
        stages.push((growth, years));
    }
    let schedule = DividendSchedule::from_pairs(raw.initial_dividend, &stages, raw.terminal_growth)
        .map_err(core_field)?;
    let context = DiscountContext::new(raw.required_return).map_err(core_field)?;
    context.ensure_convergent(&schedule).map_err(|_| {
        (
            Field::TerminalGrowth,
            "must be below required_return for the perpetuity to converge".to_string(),
        )
    })?;
    if let Some(price) = raw.market_price {
        if !(price.is_finite() && price > 0.0) {
            return Err((
                Field::MarketPrice,
                "must be a price greater than 0".to_string(),
            ));
        }
    }
    Ok((schedule, context))
}

fn core_field(err: CoreError) -> (Field, String) {
    match err {
        CoreError::InvalidInput { field, reason } => (field, reason.to_string()),
        other => (Field::SolveConfig, other.to_string()),
    }
}
