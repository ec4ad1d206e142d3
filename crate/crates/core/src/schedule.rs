//! Stage timeline and dividend projection.
//!
//! Stages are numbered 1..N in the usual notation; internally they live in a
//! zero-based `Vec`. Stage k covers years `ST_{k-1}+1 ..= ST_k`, where `ST_k`
//! is the running sum of durations and `ST_0 = 0`. Years after `ST_N` grow at
//! the terminal rate forever.

use alloc::vec::Vec;

use crate::error::{invalid, Error, Field, Result};
use crate::series::powi;

/// One finite growth leg: dividends compound at `growth_rate` for `duration` years.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthStage {
    growth_rate: f64,
    duration: u32,
}

impl GrowthStage {
    /// Builds a stage. `growth_rate` must be finite and above −1.
    pub fn new(growth_rate: f64, duration: u32) -> Result<Self> {
        check_growth(growth_rate, Field::StageGrowth(0))?;
        Ok(Self {
            growth_rate,
            duration,
        })
    }

    /// Annual growth rate within the stage.
    pub fn growth_rate(&self) -> f64 {
        self.growth_rate
    }

    /// Length of the stage in whole years.
    pub fn duration(&self) -> u32 {
        self.duration
    }
}

/// D₀, the ordered finite stages and the perpetuity growth that follows them.
#[derive(Debug, Clone, PartialEq)]
pub struct DividendSchedule {
    initial_dividend: f64,
    stages: Vec<GrowthStage>,
    terminal_growth: f64,
}

impl DividendSchedule {
    /// Validates and builds a schedule. Errors name the offending field,
    /// with stage indices counted from zero.
    pub fn new(
        initial_dividend: f64,
        stages: Vec<GrowthStage>,
        terminal_growth: f64,
    ) -> Result<Self> {
        if !(initial_dividend.is_finite() && initial_dividend > 0.0) {
            return Err(invalid(
                Field::InitialDividend,
                "must be a finite amount greater than 0",
            ));
        }
        for (i, stage) in stages.iter().enumerate() {
            check_growth(stage.growth_rate, Field::StageGrowth(i))?;
        }
        check_growth(terminal_growth, Field::TerminalGrowth)?;
        Ok(Self {
            initial_dividend,
            stages,
            terminal_growth,
        })
    }

    /// Convenience constructor from `(growth_rate, duration)` pairs.
    pub fn from_pairs(
        initial_dividend: f64,
        stages: &[(f64, u32)],
        terminal_growth: f64,
    ) -> Result<Self> {
        let stages = stages
            .iter()
            .enumerate()
            .map(|(i, &(g, t))| {
                check_growth(g, Field::StageGrowth(i))?;
                Ok(GrowthStage {
                    growth_rate: g,
                    duration: t,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(initial_dividend, stages, terminal_growth)
    }

    /// The dividend just paid (year 0).
    pub fn initial_dividend(&self) -> f64 {
        self.initial_dividend
    }

    /// Finite stages in chronological order.
    pub fn stages(&self) -> &[GrowthStage] {
        &self.stages
    }

    /// Perpetuity growth after the last finite stage.
    pub fn terminal_growth(&self) -> f64 {
        self.terminal_growth
    }

    /// Last year of the final finite stage (`ST_N`).
    pub fn horizon(&self) -> u64 {
        self.stages.iter().map(|s| u64::from(s.duration)).sum()
    }

    /// Copy with D₀ replaced.
    pub fn with_initial_dividend(&self, initial_dividend: f64) -> Result<Self> {
        Self::new(initial_dividend, self.stages.clone(), self.terminal_growth)
    }

    /// Copy with the growth of stage `index` (zero-based) replaced.
    pub fn with_stage_growth(&self, index: usize, growth_rate: f64) -> Result<Self> {
        if index >= self.stages.len() {
            return Err(invalid(Field::StageGrowth(index), "no such stage"));
        }
        check_growth(growth_rate, Field::StageGrowth(index))?;
        let mut stages = self.stages.clone();
        stages[index].growth_rate = growth_rate;
        Self::new(self.initial_dividend, stages, self.terminal_growth)
    }

    /// Copy with the terminal growth replaced.
    pub fn with_terminal_growth(&self, terminal_growth: f64) -> Result<Self> {
        Self::new(self.initial_dividend, self.stages.clone(), terminal_growth)
    }
}

/// The annual discount rate r.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscountContext {
    required_return: f64,
}

impl DiscountContext {
    /// `required_return` must be finite and above −1.
    pub fn new(required_return: f64) -> Result<Self> {
        if !(required_return.is_finite() && required_return > -1.0) {
            return Err(invalid(
                Field::RequiredReturn,
                "must be a finite rate greater than -1",
            ));
        }
        Ok(Self { required_return })
    }

    /// Discount rate per year.
    pub fn required_return(&self) -> f64 {
        self.required_return
    }

    /// Fails with [`Error::NonConvergent`] unless r exceeds the schedule's terminal growth.
    pub fn ensure_convergent(&self, schedule: &DividendSchedule) -> Result<()> {
        if self.required_return > schedule.terminal_growth {
            Ok(())
        } else {
            Err(Error::NonConvergent {
                required_return: self.required_return,
                terminal_growth: schedule.terminal_growth,
            })
        }
    }
}

/// A projected dividend `amount` paid at the end of `year`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DividendPoint {
    /// Year index; 0 is the dividend just paid.
    pub year: u64,
    /// Dividend per share.
    pub amount: f64,
}

fn check_growth(growth_rate: f64, field: Field) -> Result<()> {
    if growth_rate.is_finite() && growth_rate > -1.0 {
        Ok(())
    } else {
        Err(invalid(field, "must be a finite rate greater than -1"))
    }
}

/// `[ST_0, ST_1, …, ST_N]` with `ST_0 = 0`.
pub fn cumulative_stage_ends(schedule: &DividendSchedule) -> Vec<u64> {
    let mut ends = Vec::with_capacity(schedule.stages.len() + 1);
    let mut end = 0u64;
    ends.push(end);
    for stage in &schedule.stages {
        end += u64::from(stage.duration);
        ends.push(end);
    }
    ends
}

/// Dividend paid at the end of `year`.
///
/// Completed stages contribute `(1+g_i)^{T_i}`; the stage containing `year`
/// contributes `(1+g_k)^{year - ST_{k-1}}`. Past `ST_N` the terminal rate
/// applies. `dividend_at(s, 0)` is D₀.
pub fn dividend_at(schedule: &DividendSchedule, year: u64) -> f64 {
    let mut amount = schedule.initial_dividend;
    let mut start = 0u64;
    for stage in &schedule.stages {
        let end = start + u64::from(stage.duration);
        if year <= end {
            return amount * powi(1.0 + stage.growth_rate, year - start);
        }
        amount *= powi(1.0 + stage.growth_rate, u64::from(stage.duration));
        start = end;
    }
    amount * powi(1.0 + schedule.terminal_growth, year - start)
}

/// `dividend_at` for every year `0..=horizon`.
pub fn project_dividends(schedule: &DividendSchedule, horizon: u64) -> Vec<DividendPoint> {
    (0..=horizon)
        .map(|year| DividendPoint {
            year,
            amount: dividend_at(schedule, year),
        })
        .collect()
}
