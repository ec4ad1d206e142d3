use core::fmt;

/// Names the input that failed validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    /// D₀.
    InitialDividend,
    /// Growth rate of the stage at this zero-based index.
    StageGrowth(usize),
    /// Duration of the stage at this zero-based index.
    StageDuration(usize),
    /// Perpetuity growth after the last stage.
    TerminalGrowth,
    /// Discount rate.
    RequiredReturn,
    /// Observed share price.
    MarketPrice,
    /// Finite-difference step.
    Bump,
    /// Solver bracket or tolerance settings.
    SolveConfig,
    /// Oracle settings.
    OracleConfig,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::InitialDividend => f.write_str("initial_dividend"),
            Field::StageGrowth(i) => write!(f, "stages[{i}].growth"),
            Field::StageDuration(i) => write!(f, "stages[{i}].years"),
            Field::TerminalGrowth => f.write_str("terminal_growth"),
            Field::RequiredReturn => f.write_str("required_return"),
            Field::MarketPrice => f.write_str("market_price"),
            Field::Bump => f.write_str("bump"),
            Field::SolveConfig => f.write_str("solve_config"),
            Field::OracleConfig => f.write_str("oracle_config"),
        }
    }
}

/// Errors raised by validation and valuation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input violates a domain constraint.
    #[error("invalid {field}: {reason}")]
    InvalidInput {
        /// Offending input.
        field: Field,
        /// Constraint that was violated.
        reason: &'static str,
    },

    /// The perpetuity diverges because the discount rate does not exceed its growth.
    #[error(
        "perpetuity does not converge: required_return ({required_return}) must exceed \
         terminal_growth ({terminal_growth})"
    )]
    NonConvergent {
        /// Discount rate in use.
        required_return: f64,
        /// Perpetuity growth in use.
        terminal_growth: f64,
    },

    /// The oracle's tail remainder bound was not met within the horizon cap.
    #[error("series tail not within tolerance after {max_horizon} years")]
    HorizonExceeded {
        /// Horizon cap that was reached.
        max_horizon: u64,
    },

    /// The analytic and summed perpetuity tails disagree.
    #[error("oracle tail mismatch: analytic {analytic}, summed {summed}")]
    TailMismatch {
        /// Tail from the perpetuity closed form.
        analytic: f64,
        /// Tail from explicit summation.
        summed: f64,
    },

    /// The solver ran out of iterations before the bracket shrank to tolerance.
    #[error("bisection did not reach tolerance within {iterations} iterations")]
    IterationLimit {
        /// Iterations performed.
        iterations: u32,
    },

    /// The market price is not straddled by the values at the bracket ends.
    #[error(
        "price {price} is not bracketed: value is {value_at_high} at the high end and \
         {value_at_low} at the low end"
    )]
    Bracket {
        /// Price being inverted.
        price: f64,
        /// Model value at `bracket_low`.
        value_at_low: f64,
        /// Model value at `bracket_high`.
        value_at_high: f64,
    },
}

/// Crate result alias.
pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(field: Field, reason: &'static str) -> Error {
    Error::InvalidInput { field, reason }
}
