//! Intrinsic value of a common stock under a dividend discount model with any
//! number of finite growth stages followed by a growing perpetuity.
//!
//! The crate is `no_std` (it needs `alloc` for stage lists and projected
//! dividend streams). Everything here is a pure function of its inputs.
//!
//! * [`schedule`]: domain types, stage timeline and dividend projection.
//! * [`series`]: the finite-annuity and perpetuity geometric sums.
//! * [`valuation`]: the two closed-form evaluation paths.
//! * [`oracle`]: brute-force summation of the discounted dividend series.
//! * [`analysis`]: implied required return and finite-difference sensitivities.
//!
//! All rates are decimal fractions per year (`0.05` is 5%).
#![no_std]
#![deny(missing_docs)]

extern crate alloc;

pub mod analysis;
mod error;
pub mod oracle;
pub mod schedule;
pub mod series;
pub mod valuation;

pub use analysis::{
    implied_return, sensitivity, ImpliedReturn, Parameter, ParseParameterError, SensitivityReport,
    SolveConfig,
};
pub use error::{Error, Field, Result};
pub use oracle::{partial_sum, value_series, OracleConfig};
pub use schedule::{
    cumulative_stage_ends, dividend_at, project_dividends, DiscountContext, DividendPoint,
    DividendSchedule, GrowthStage,
};
pub use series::{annuity_sum, perpetuity_sum, powi, stage_factor};
pub use valuation::{value_closed_form, value_closed_form_d0, ValuationResult};
