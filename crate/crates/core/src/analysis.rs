//! Implied required return and finite-difference sensitivities.

use core::fmt;
use core::str::FromStr;

use crate::error::{invalid, Error, Field, Result};
use crate::schedule::{DiscountContext, DividendSchedule};
use crate::valuation::value_closed_form;

/// Bisection settings for [`implied_return`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    /// Lower end of the search interval; must exceed the terminal growth.
    pub bracket_low: f64,
    /// Upper end of the search interval.
    pub bracket_high: f64,
    /// Absolute tolerance on the returned rate.
    pub tolerance: f64,
    /// Iteration cap.
    pub max_iterations: u32,
}

impl SolveConfig {
    /// Offset of the default lower bracket above the terminal growth.
    pub const DEFAULT_POLE_OFFSET: f64 = 1e-6;
    /// Default upper bracket.
    pub const DEFAULT_HIGH: f64 = 1.0;

    /// Bracket `[low, high]` with default tolerance (1e-10) and iteration cap (200).
    pub fn new(bracket_low: f64, bracket_high: f64) -> Self {
        Self {
            bracket_low,
            bracket_high,
            tolerance: 1e-10,
            max_iterations: 200,
        }
    }

    /// Default bracket `(g_{N+1} + 1e-6, 1.0)` for this schedule.
    pub fn for_schedule(schedule: &DividendSchedule) -> Self {
        Self::new(
            schedule.terminal_growth() + Self::DEFAULT_POLE_OFFSET,
            Self::DEFAULT_HIGH,
        )
    }

    /// Worst-case bisection steps: `ceil(log2(width / tolerance))`.
    pub fn iteration_bound(&self) -> u32 {
        let ratio = (self.bracket_high - self.bracket_low) / self.tolerance;
        let mut n = 0u32;
        let mut reach = 1.0;
        while reach < ratio {
            reach *= 2.0;
            n += 1;
        }
        n
    }
}

/// Solution of [`implied_return`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpliedReturn {
    /// Required return that prices the schedule at the market price.
    pub rate: f64,
    /// Bisection steps taken.
    pub iterations: u32,
}

/// The discount rate at which the closed-form value equals `market_price`.
///
/// Bisects on `r ↦ P₀(r)`, which is strictly decreasing above the
/// terminal growth, so the price must satisfy `P₀(high) < price < P₀(low)`.
pub fn implied_return(
    schedule: &DividendSchedule,
    market_price: f64,
    config: &SolveConfig,
) -> Result<ImpliedReturn> {
    if !(market_price.is_finite() && market_price > 0.0) {
        return Err(invalid(
            Field::MarketPrice,
            "must be a finite price greater than 0",
        ));
    }
    if !(config.bracket_low < config.bracket_high && config.bracket_high.is_finite()) {
        return Err(invalid(
            Field::SolveConfig,
            "bracket_low must be below bracket_high",
        ));
    }
    if !(config.tolerance.is_finite() && config.tolerance > 0.0) {
        return Err(invalid(
            Field::SolveConfig,
            "tolerance must be greater than 0",
        ));
    }

    let value = |r: f64| -> Result<f64> {
        Ok(value_closed_form(schedule, &DiscountContext::new(r)?)?.present_value)
    };
    let value_at_low = value(config.bracket_low)?;
    let value_at_high = value(config.bracket_high)?;
    if !(value_at_high < market_price && market_price < value_at_low) {
        return Err(Error::Bracket {
            price: market_price,
            value_at_low,
            value_at_high,
        });
    }

    let (mut low, mut high) = (config.bracket_low, config.bracket_high);
    let mut iterations = 0;
    while high - low > config.tolerance {
        if iterations == config.max_iterations {
            return Err(Error::IterationLimit { iterations });
        }
        let mid = 0.5 * (low + high);
        if mid <= low || mid >= high {
            break;
        }
        iterations += 1;
        let v = value(mid)?;
        if v == market_price {
            return Ok(ImpliedReturn {
                rate: mid,
                iterations,
            });
        }
        if v > market_price {
            low = mid;
        } else {
            high = mid;
        }
    }
    Ok(ImpliedReturn {
        rate: 0.5 * (low + high),
        iterations,
    })
}

/// Input that [`sensitivity`] perturbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameter {
    /// Required return r.
    RequiredReturn,
    /// D₀.
    InitialDividend,
    /// Growth of the stage at this zero-based index.
    StageGrowth(usize),
    /// Perpetuity growth.
    TerminalGrowth,
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parameter::RequiredReturn => f.write_str("r"),
            Parameter::InitialDividend => f.write_str("d0"),
            Parameter::StageGrowth(i) => write!(f, "g{}", i + 1),
            Parameter::TerminalGrowth => f.write_str("terminal"),
        }
    }
}

/// Error from parsing a [`Parameter`] name.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown parameter; expected r, d0, terminal or g1, g2, ...")]
pub struct ParseParameterError;

impl FromStr for Parameter {
    type Err = ParseParameterError;

    /// Accepts `r`, `d0`, `terminal` and the one-based stage names `g1`, `g2`, ...
    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s {
            "r" => Ok(Parameter::RequiredReturn),
            "d0" => Ok(Parameter::InitialDividend),
            "terminal" => Ok(Parameter::TerminalGrowth),
            _ => {
                let k: usize = s
                    .strip_prefix('g')
                    .and_then(|n| n.parse().ok())
                    .ok_or(ParseParameterError)?;
                k.checked_sub(1)
                    .map(Parameter::StageGrowth)
                    .ok_or(ParseParameterError)
            }
        }
    }
}

impl Parameter {
    fn field(self) -> Field {
        match self {
            Parameter::RequiredReturn => Field::RequiredReturn,
            Parameter::InitialDividend => Field::InitialDividend,
            Parameter::StageGrowth(i) => Field::StageGrowth(i),
            Parameter::TerminalGrowth => Field::TerminalGrowth,
        }
    }
}

/// Central-difference derivative of P₀ with respect to one input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityReport {
    /// Perturbed input.
    pub parameter: Parameter,
    /// Step applied in each direction.
    pub bump: f64,
    /// `(P₀(p + bump) − P₀(p − bump)) / (2 bump)`.
    pub central_difference: f64,
}

/// Finite-difference sensitivity of P₀ to `parameter`.
pub fn sensitivity(
    schedule: &DividendSchedule,
    ctx: &DiscountContext,
    parameter: Parameter,
    bump: f64,
) -> Result<SensitivityReport> {
    if !(bump.is_finite() && bump > 0.0) {
        return Err(invalid(Field::Bump, "must be a finite step greater than 0"));
    }
    ctx.ensure_convergent(schedule)?;
    if let Parameter::StageGrowth(i) = parameter {
        if i >= schedule.stages().len() {
            return Err(invalid(Field::StageGrowth(i), "no such stage"));
        }
    }

    let up = bumped_value(schedule, ctx, parameter, bump)?;
    let down = bumped_value(schedule, ctx, parameter, -bump)?;
    Ok(SensitivityReport {
        parameter,
        bump,
        central_difference: (up - down) / (2.0 * bump),
    })
}

fn bumped_value(
    schedule: &DividendSchedule,
    ctx: &DiscountContext,
    parameter: Parameter,
    delta: f64,
) -> Result<f64> {
    let rejected = |_| invalid(parameter.field(), "bumped value leaves the valid domain");
    let (s, c) = match parameter {
        Parameter::RequiredReturn => (
            schedule.clone(),
            DiscountContext::new(ctx.required_return() + delta).map_err(rejected)?,
        ),
        Parameter::InitialDividend => (
            schedule
                .with_initial_dividend(schedule.initial_dividend() + delta)
                .map_err(rejected)?,
            *ctx,
        ),
        Parameter::StageGrowth(i) => (
            schedule
                .with_stage_growth(i, schedule.stages()[i].growth_rate() + delta)
                .map_err(rejected)?,
            *ctx,
        ),
        Parameter::TerminalGrowth => (
            schedule
                .with_terminal_growth(schedule.terminal_growth() + delta)
                .map_err(rejected)?,
            *ctx,
        ),
    };
    match value_closed_form(&s, &c) {
        Ok(v) => Ok(v.present_value),
        Err(Error::NonConvergent { .. }) => Err(invalid(
            parameter.field(),
            "bumped input violates required_return > terminal_growth",
        )),
        Err(e) => Err(e),
    }
}
