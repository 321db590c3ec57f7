use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Composite rule used for the effective-range integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadratureRule {
    Trapezoid,
    #[default]
    Simpson,
}

impl QuadratureRule {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "simpson" => Ok(QuadratureRule::Simpson),
            "trapezoid" => Ok(QuadratureRule::Trapezoid),
            other => Err(Error::InvalidArgument(format!(
                "unknown quadrature rule '{other}' (expected simpson or trapezoid)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QuadratureRule::Trapezoid => "trapezoid",
            QuadratureRule::Simpson => "simpson",
        }
    }

    /// Integrates equally spaced samples `f` with spacing `h`.
    pub fn integrate(self, f: &[f64], h: f64) -> f64 {
        match self {
            QuadratureRule::Trapezoid => trapezoid(f, h),
            QuadratureRule::Simpson => simpson(f, h),
        }
    }
}

pub fn trapezoid(f: &[f64], h: f64) -> f64 {
    match f.len() {
        0 | 1 => 0.0,
        n => h * (0.5 * (f[0] + f[n - 1]) + f[1..n - 1].iter().sum::<f64>()),
    }
}

/// Composite Simpson's rule; an odd number of intervals closes with the
/// 3/8 rule on the last three.
pub fn simpson(f: &[f64], h: f64) -> f64 {
    let intervals = f.len().saturating_sub(1);
    match intervals {
        0 => 0.0,
        1 => trapezoid(f, h),
        _ if intervals % 2 == 0 => simpson_even(f, h),
        3 => three_eighths(f, h),
        _ => {
            let split = f.len() - 3;
            simpson_even(&f[..split], h) + three_eighths(&f[split - 1..], h)
        }
    }
}

fn simpson_even(f: &[f64], h: f64) -> f64 {
    let n = f.len() - 1;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..n {
        if i % 2 == 1 {
            odd += f[i];
        } else {
            even += f[i];
        }
    }
    h / 3.0 * (f[0] + f[n] + 4.0 * odd + 2.0 * even)
}

fn three_eighths(f: &[f64], h: f64) -> f64 {
    3.0 * h / 8.0 * (f[0] + 3.0 * f[1] + 3.0 * f[2] + f[3])
}
