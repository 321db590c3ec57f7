use std::f64::consts::PI;

use super::{SpecialFunctionValue, POLE_TOLERANCE};
use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// Shift target for the recurrence; the first omitted asymptotic term at this
// point is B_14 / (14 x^14) ≈ 8e-16.
const ASYMPTOTIC_FROM: f64 = 10.0;

/// Digamma function `Ψ(x) = Γ'(x)/Γ(x)`.
///
/// Negative arguments go through the reflection formula, small positive ones
/// through `Ψ(x) = Ψ(x + 1) - 1/x`, and the asymptotic series in `1/x²` is
/// summed up to the `1/x¹²` term.
///
/// ```
/// use lescat::analytic::{digamma, EULER_GAMMA};
/// let psi1 = digamma(1.0).unwrap().value;
/// assert!((psi1 + EULER_GAMMA).abs() < 1e-14);
/// ```
pub fn digamma(x: f64) -> Result<SpecialFunctionValue> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("digamma of non-finite argument {x}")));
    }
    if x <= 0.0 && (x - x.round()).abs() < POLE_TOLERANCE {
        return Err(Error::Domain(format!("digamma pole at x = {}", x.round())));
    }
    if x < 0.0 {
        // Ψ(x) = Ψ(1 - x) - π cot(πx)
        let reflected = positive(1.0 - x);
        let value = reflected - PI / (PI * x).tan();
        return Ok(SpecialFunctionValue::with_relative_error(value, 32.0 * (1.0 - x)));
    }
    Ok(SpecialFunctionValue::with_relative_error(positive(x), 16.0))
}

fn positive(mut x: f64) -> f64 {
    let mut shift = 0.0;
    while x < ASYMPTOTIC_FROM {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Bernoulli terms B_2n / (2n), n = 1..6, in Horner form
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    shift + x.ln() - 0.5 / x - series
}
