//! Brute-force share value by summing `Σ_{t≥1} D_t / (1+r)^t` year by year.
//!
//! Shares nothing with [`crate::valuation`] except [`dividend_at`]. The finite
//! stages are summed term by term. The perpetuity tail is summed explicitly
//! until the geometric remainder bound drops below `tail_tolerance`, and the
//! result is cross-checked against the analytic perpetuity value.

use crate::error::{invalid, Error, Field, Result};
use crate::schedule::{dividend_at, DiscountContext, DividendSchedule};
use crate::series::{perpetuity_sum, powi};

/// Relative slack added to `tail_tolerance` when comparing the two tail
/// values; covers rounding accumulated over thousands of summed terms.
const TAIL_ROUNDING_SLACK: f64 = 1e-9;

/// Truncation settings for [`value_series`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Absolute bound on the unsummed remainder of the tail.
    pub tail_tolerance: f64,
    /// Last year the oracle is allowed to sum.
    pub max_horizon: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            tail_tolerance: 1e-12,
            max_horizon: 100_000,
        }
    }
}

impl OracleConfig {
    /// Config with the given tail tolerance and the default horizon cap.
    pub fn with_tail_tolerance(tail_tolerance: f64) -> Self {
        Self {
            tail_tolerance,
            ..Self::default()
        }
    }
}

/// `Σ_{t=1..horizon} D_t / (1+r)^t`.
pub fn partial_sum(schedule: &DividendSchedule, ctx: &DiscountContext, horizon: u64) -> f64 {
    let growth = 1.0 + ctx.required_return();
    (1..=horizon)
        .map(|t| dividend_at(schedule, t) / powi(growth, t))
        .sum()
}

/// Share value from direct summation of the discounted dividend series.
pub fn value_series(
    schedule: &DividendSchedule,
    ctx: &DiscountContext,
    config: &OracleConfig,
) -> Result<f64> {
    ctx.ensure_convergent(schedule)?;
    if !(config.tail_tolerance.is_finite() && config.tail_tolerance > 0.0) {
        return Err(invalid(
            Field::OracleConfig,
            "tail_tolerance must be greater than 0",
        ));
    }
    let last = schedule.horizon();
    if config.max_horizon <= last {
        return Err(invalid(
            Field::OracleConfig,
            "max_horizon must exceed the last finite stage year",
        ));
    }

    let r = ctx.required_return();
    let g = schedule.terminal_growth();
    let finite = partial_sum(schedule, ctx, last);

    let x = (1.0 + g) / (1.0 + r);
    let remainder = x / (1.0 - x);
    let mut discounted = dividend_at(schedule, last) / powi(1.0 + r, last);
    let mut summed = 0.0;
    let mut t = last;
    loop {
        if t >= config.max_horizon {
            return Err(Error::HorizonExceeded {
                max_horizon: config.max_horizon,
            });
        }
        t += 1;
        discounted = discounted * (1.0 + g) / (1.0 + r);
        summed += discounted;
        if discounted * remainder < config.tail_tolerance {
            break;
        }
    }

    let analytic = dividend_at(schedule, last) * perpetuity_sum(g, r)? / powi(1.0 + r, last);
    if (analytic - summed).abs() > config.tail_tolerance + TAIL_ROUNDING_SLACK * analytic.abs() {
        return Err(Error::TailMismatch { analytic, summed });
    }
    Ok(finite + summed)
}
