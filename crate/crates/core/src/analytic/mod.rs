//! Closed-form results used as benchmarks for the numerics, and the special
//! functions they need.
//!
//! Well formulas take the dimensionless depth `v0` (so that `k0 R = √(2 v0)`)
//! and the radius `R`; Pöschl–Teller formulas take `λ` and `μ`.

mod bessel;
mod digamma;

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

pub use bessel::{
    sph_bessel_j, sph_bessel_j_derivative, sph_bessel_n, sph_bessel_n_derivative, MAX_ORDER,
};
pub(crate) use bessel::all as sph_bessel_all;
pub use digamma::{digamma, EULER_GAMMA};

use crate::error::{Error, Result};

/// Arguments closer than this to a pole are rejected with [`Error::Divergence`].
pub const POLE_TOLERANCE: f64 = 1e-9;

/// A special-function value with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpecialFunctionValue {
    pub value: f64,
    pub estimated_abs_error: f64,
}

impl SpecialFunctionValue {
    pub(crate) fn with_relative_error(value: f64, ulps: f64) -> Self {
        SpecialFunctionValue {
            value,
            estimated_abs_error: ulps * f64::EPSILON * value.abs(),
        }
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive, got {x}")))
    }
}

fn check_depth(v0: f64) -> Result<()> {
    if v0 >= 0.0 && v0.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("well depth must be >= 0, got {v0}")))
    }
}

/// Nearest odd multiple of π/2 to `x`.
fn nearest_tan_pole(x: f64) -> f64 {
    ((x - FRAC_PI_2) / PI).round() * PI + FRAC_PI_2
}

fn tan_pole_guard(x: f64, v0: f64) -> Result<()> {
    let pole = nearest_tan_pole(x);
    let distance = (x - pole).abs();
    if distance < POLE_TOLERANCE {
        return Err(Error::Divergence {
            parameter: v0,
            pole: pole * pole / 2.0,
            distance,
            note: "well at a bound-state threshold, |a| is infinite",
        });
    }
    Ok(())
}

/// Scattering length of an attractive square well, `a = R (1 - tan x / x)`
/// with `x = √(2 v0)`.
///
/// ```
/// let a = lescat::analytic::well_scattering_length(1.7575, 2.0).unwrap();
/// assert!((a - 5.4).abs() < 0.01);
/// ```
pub fn well_scattering_length(v0: f64, range: f64) -> Result<f64> {
    check_depth(v0)?;
    check_positive("R", range)?;
    if v0 == 0.0 {
        return Ok(0.0);
    }
    let x = (2.0 * v0).sqrt();
    tan_pole_guard(x, v0)?;
    Ok(range * (1.0 - x.tan() / x))
}

/// Effective range of an attractive square well.
///
/// Written in terms of `c = cot x` so that it stays finite through the
/// thresholds (where `r0 = R`):
/// `r0 = R [1 - (x c / (1 - x c))² / 3 + c / (x (1 - x c))]`.
/// Undefined where `a = 0` (`tan x = x`).
pub fn well_effective_range(v0: f64, range: f64) -> Result<f64> {
    check_depth(v0)?;
    check_positive("R", range)?;
    let x = (2.0 * v0).sqrt();
    let c = 1.0 / x.tan();
    let d = 1.0 - x * c;
    if !(d.abs() >= POLE_TOLERANCE) || x == 0.0 {
        return Err(Error::Divergence {
            parameter: v0,
            pole: v0,
            distance: d.abs(),
            note: "a = 0, effective range undefined",
        });
    }
    let t = x * c / d;
    Ok(range * (1.0 - t * t / 3.0 + c / (x * d)))
}

/// s-wave phase shift of an attractive square well at wave number `k`,
/// `δ0 = -kR + arctan(k tan(qR) / q)` with `q = √(k² + k0²)`.
///
/// The arctangent branch is chosen so that `δ0` is continuous in `k` and
/// tends to `-k a` as `k → 0⁺`.
pub fn well_phase_shift(v0: f64, range: f64, k: f64) -> Result<f64> {
    check_depth(v0)?;
    check_positive("R", range)?;
    check_positive("k", k)?;
    let k0r = (2.0 * v0).sqrt();
    let kr = k * range;
    let qr = (kr * kr + k0r * k0r).sqrt();
    tan_pole_guard(qr, v0)?;
    let q = qr / range;
    // tan(qR) jumps from +∞ to -∞ at each pole crossed since k = 0
    let poles_below = |y: f64| ((y - FRAC_PI_2) / PI).floor() + 1.0;
    let m = poles_below(qr) - poles_below(k0r);
    Ok(-kr + (k * qr.tan() / q).atan() + m * PI)
}

/// Depth `v0` at which the well acquires its `(n+1)`-th bound state,
/// `(π/2 + nπ)² / 2`.
pub fn well_threshold(n: u32) -> f64 {
    let x = FRAC_PI_2 + n as f64 * PI;
    x * x / 2.0
}

/// Number of s-wave bound states of a well of depth `v0`.
pub fn well_bound_state_count(v0: f64) -> u32 {
    let mut n = 0;
    while well_threshold(n) < v0 {
        n += 1;
    }
    n
}

/// Scattering length of the modified Pöschl–Teller potential,
/// `a μ = (π/2) cot(πλ/2) + γ + Ψ(λ)`.
///
/// ```
/// use lescat::potentials::mpt_lambda;
/// let a = lescat::analytic::mpt_scattering_length(mpt_lambda(1.4388), 0.8631).unwrap();
/// assert!((a - 5.4).abs() < 0.03);
/// ```
pub fn mpt_scattering_length(lambda: f64, mu: f64) -> Result<f64> {
    check_positive("mu", mu)?;
    if !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("lambda must be finite, got {lambda}")));
    }
    let even = 2.0 * (lambda / 2.0).round();
    if (lambda - even).abs() < POLE_TOLERANCE {
        return Err(Error::Divergence {
            parameter: lambda,
            pole: even,
            distance: (lambda - even).abs(),
            note: "even lambda is a zero-energy bound state (lambda = 2 is unitarity, v = 1)",
        });
    }
    if lambda <= 0.0 && (lambda - lambda.round()).abs() < POLE_TOLERANCE {
        return Err(Error::Divergence {
            parameter: lambda,
            pole: lambda.round(),
            distance: (lambda - lambda.round()).abs(),
            note: "digamma pole",
        });
    }
    let psi = digamma(lambda)?.value;
    Ok((FRAC_PI_2 / (FRAC_PI_2 * lambda).tan() + EULER_GAMMA + psi) / mu)
}

/// Zero-energy Pöschl–Teller solution at unitarity normalized to 1 at `R`,
/// `tanh(μr) / tanh(μR)`.
pub fn mpt_unitarity_u(mu: f64, range: f64, r: f64) -> Result<f64> {
    check_positive("mu", mu)?;
    check_positive("R", range)?;
    if !(r >= 0.0) {
        return Err(Error::InvalidArgument(format!("r must be >= 0, got {r}")));
    }
    Ok((mu * r).tanh() / (mu * range).tanh())
}

/// Effective range of the Pöschl–Teller potential at unitarity, `2/μ`.
pub fn mpt_unitarity_r0(mu: f64) -> Result<f64> {
    check_positive("mu", mu)?;
    Ok(2.0 / mu)
}
