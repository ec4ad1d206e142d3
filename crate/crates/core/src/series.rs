//! Geometric sums behind the closed form.
//!
//! With `x = (1+g)/(1+r)`, a finite stage of T years contributes
//! `Σ_{l=1..T} x^l` and the perpetuity `Σ_{j=1..∞} x^j`.

use crate::error::{Error, Result};

/// Below this distance of `x` from 1 the finite sum is accumulated term by
/// term; the closed form loses digits to cancellation in `1 - x^T` there.
const NEAR_UNIT_RATIO: f64 = 1e-4;

/// `base^exp` by repeated squaring. Exact for small integer results and free
/// of the log/exp round trip of `powf`.
pub fn powi(base: f64, exp: u64) -> f64 {
    let mut result = 1.0;
    let mut b = base;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= b;
        }
        e >>= 1;
        if e > 0 {
            b *= b;
        }
    }
    result
}

fn ratio(growth_rate: f64, required_return: f64) -> f64 {
    (1.0 + growth_rate) / (1.0 + required_return)
}

/// `A = 1 − ((1+g)/(1+r))^T`, the truncation factor of a T-year growing annuity.
///
/// Zero when `g == r` or `T == 0`. The perpetuity uses the constant 1 instead.
pub fn stage_factor(growth_rate: f64, duration: u32, required_return: f64) -> f64 {
    1.0 - powi(ratio(growth_rate, required_return), u64::from(duration))
}

/// `Σ_{l=1..T} ((1+g)/(1+r))^l`.
///
/// Equals `(1+g)/(r−g) · A` off the diagonal and exactly `T` when `g == r`.
pub fn annuity_sum(growth_rate: f64, duration: u32, required_return: f64) -> f64 {
    if growth_rate == required_return {
        return f64::from(duration);
    }
    let x = ratio(growth_rate, required_return);
    if (1.0 - x).abs() < NEAR_UNIT_RATIO {
        return x * partial_geometric(x, duration);
    }
    (1.0 + growth_rate) / (required_return - growth_rate)
        * stage_factor(growth_rate, duration, required_return)
}

/// `Σ_{j=1..∞} ((1+g)/(1+r))^j = (1+g)/(r−g)`; requires `r > g`.
pub fn perpetuity_sum(growth_rate: f64, required_return: f64) -> Result<f64> {
    if required_return.partial_cmp(&growth_rate) != Some(core::cmp::Ordering::Greater) {
        return Err(Error::NonConvergent {
            required_return,
            terminal_growth: growth_rate,
        });
    }
    Ok((1.0 + growth_rate) / (required_return - growth_rate))
}

/// `A / (r − g)`, the factor that multiplies `D_{ST_{k-1}+1} / (1+r)^{ST_{k-1}}`
/// for a finite stage. At `g == r` the quotient is 0/0 and the limit
/// `T/(1+r)` is returned.
pub(crate) fn stage_coefficient(growth_rate: f64, duration: u32, required_return: f64) -> f64 {
    if growth_rate == required_return {
        return f64::from(duration) / (1.0 + required_return);
    }
    let x = ratio(growth_rate, required_return);
    if (1.0 - x).abs() < NEAR_UNIT_RATIO {
        // (1 - x^T)/(r - g) = Σ_{l<T} x^l / (1+r)
        return partial_geometric(x, duration) / (1.0 + required_return);
    }
    stage_factor(growth_rate, duration, required_return) / (required_return - growth_rate)
}

/// `Σ_{l=0..n-1} x^l`, summed directly.
fn partial_geometric(x: f64, n: u32) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for _ in 0..n {
        sum += term;
        term *= x;
    }
    sum
}
