//! Closed-form share value.
//!
//! Stage k (1-based) contributes
//! `D_{ST_{k-1}+1} / ((1+r)^{ST_{k-1}} (r − g_k)) · A_k` and the perpetuity
//! contributes the same expression with `A_{N+1} = 1`. Two evaluation paths
//! are provided: [`value_closed_form`] reads the leading dividends off the
//! projected stream, [`value_closed_form_d0`] rebuilds them from D₀ as a
//! product of stage growth factors.

use alloc::vec::Vec;

use crate::error::Result;
use crate::schedule::{cumulative_stage_ends, dividend_at, DiscountContext, DividendSchedule};
use crate::series::{powi, stage_coefficient};

/// P₀ and its per-stage decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuationResult {
    /// Intrinsic value per share.
    pub present_value: f64,
    /// Present value contributed by each finite stage, in order.
    pub stage_terms: Vec<f64>,
    /// Present value of the perpetuity after the last stage.
    pub terminal_term: f64,
}

impl ValuationResult {
    fn from_terms(stage_terms: Vec<f64>, terminal_term: f64) -> Self {
        let present_value = stage_terms.iter().sum::<f64>() + terminal_term;
        Self {
            present_value,
            stage_terms,
            terminal_term,
        }
    }
}

/// Values the schedule from the leading dividend of each stage.
///
/// A stage whose growth equals `r` contributes `D_{ST_{k-1}} T_k / (1+r)^{ST_{k-1}}`.
/// Fails with [`crate::Error::NonConvergent`] when `r <= g_{N+1}`.
pub fn value_closed_form(
    schedule: &DividendSchedule,
    ctx: &DiscountContext,
) -> Result<ValuationResult> {
    ctx.ensure_convergent(schedule)?;
    let r = ctx.required_return();
    let ends = cumulative_stage_ends(schedule);

    let stage_terms = schedule
        .stages()
        .iter()
        .zip(&ends)
        .map(|(stage, &start)| {
            let lead = dividend_at(schedule, start + 1);
            lead / powi(1.0 + r, start)
                * stage_coefficient(stage.growth_rate(), stage.duration(), r)
        })
        .collect();

    let last = *ends.last().expect("stage ends always contain ST_0");
    let g = schedule.terminal_growth();
    let terminal_term = dividend_at(schedule, last + 1) / powi(1.0 + r, last) / (r - g);

    Ok(ValuationResult::from_terms(stage_terms, terminal_term))
}

/// Values the schedule directly from D₀ and cumulative growth products.
pub fn value_closed_form_d0(
    schedule: &DividendSchedule,
    ctx: &DiscountContext,
) -> Result<ValuationResult> {
    ctx.ensure_convergent(schedule)?;
    let r = ctx.required_return();
    let d0 = schedule.initial_dividend();

    // Π_{i<k} (1+g_i)^{T_i}; empty product is 1.
    let mut growth_product = 1.0;
    let mut start = 0u64;
    let mut stage_terms = Vec::with_capacity(schedule.stages().len());
    for stage in schedule.stages() {
        let g = stage.growth_rate();
        let coeff = stage_coefficient(g, stage.duration(), r);
        stage_terms.push(d0 * (growth_product * (1.0 + g)) / powi(1.0 + r, start) * coeff);
        growth_product *= powi(1.0 + g, u64::from(stage.duration()));
        start += u64::from(stage.duration());
    }

    let g = schedule.terminal_growth();
    let terminal_term = d0 * (growth_product * (1.0 + g)) / powi(1.0 + r, start) / (r - g);

    Ok(ValuationResult::from_terms(stage_terms, terminal_term))
}
