//! Spherical Bessel functions of the first (`j_l`) and second (`n_l`) kind.
//!
//! `n_l` comes from upward recurrence, which is stable for it everywhere.
//! `j_l` uses upward recurrence when `x > l`; below that the upward direction
//! loses digits exponentially, so the values come from Miller's downward
//! recurrence normalized against `j_0` (or `j_1` near zeros of `j_0`).

use super::SpecialFunctionValue;
use crate::error::{Error, Result};

/// Largest supported order.
pub const MAX_ORDER: u32 = 25;

const RESCALE_ABOVE: f64 = 1e200;

fn check(l: u32, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("spherical Bessel argument must be positive, got {x}")));
    }
    if l > MAX_ORDER {
        return Err(Error::Unsupported(format!(
            "spherical Bessel order {l} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    Ok(())
}

fn j0(x: f64) -> f64 {
    x.sin() / x
}

fn j1(x: f64) -> f64 {
    if x < 1e-2 {
        // sin x/x² - cos x/x cancels; use the series x/3 - x³/30 + x⁵/840
        let x2 = x * x;
        x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0))
    } else {
        (x.sin() / x - x.cos()) / x
    }
}

/// `j_0 .. j_l` at `x`.
fn j_table(l: u32, x: f64) -> Vec<f64> {
    let l = l as usize;
    let mut out = vec![0.0; l + 1];
    out[0] = j0(x);
    if l == 0 {
        return out;
    }
    out[1] = j1(x);
    if x > l as f64 {
        for n in 1..l {
            out[n + 1] = (2 * n + 1) as f64 / x * out[n] - out[n - 1];
        }
        return out;
    }
    // Miller: start well above l with arbitrary values and recur down
    let start = l + 20 + (l as f64).sqrt() as usize * 4;
    let mut f_next = 0.0;
    let mut f_curr = 1e-300;
    for n in (1..=start).rev() {
        let f_prev = (2 * n + 1) as f64 / x * f_curr - f_next;
        f_next = f_curr;
        f_curr = f_prev;
        // f_curr is now f_{n-1}
        if n - 1 <= l {
            out[n - 1] = f_curr;
        }
        if f_curr.abs() > RESCALE_ABOVE {
            f_curr /= RESCALE_ABOVE;
            f_next /= RESCALE_ABOVE;
            for v in out.iter_mut().skip(n - 1) {
                *v /= RESCALE_ABOVE;
            }
        }
    }
    let (exact0, exact1) = (j0(x), j1(x));
    let scale = if exact0.abs() >= exact1.abs() {
        exact0 / out[0]
    } else {
        exact1 / out[1]
    };
    for v in out.iter_mut() {
        *v *= scale;
    }
    out
}

/// `n_0 .. n_l` at `x`.
fn n_table(l: u32, x: f64) -> Vec<f64> {
    let l = l as usize;
    let mut out = vec![0.0; l + 1];
    out[0] = -x.cos() / x;
    if l >= 1 {
        out[1] = -(x.cos() / x + x.sin()) / x;
    }
    for n in 1..l {
        out[n + 1] = (2 * n + 1) as f64 / x * out[n] - out[n - 1];
    }
    out
}

fn derivative(table: &[f64], l: usize, x: f64, f_next: impl FnOnce() -> f64) -> f64 {
    if l == 0 {
        -f_next()
    } else {
        table[l - 1] - (l as f64 + 1.0) * table[l] / x
    }
}

// Relative accuracy of the recurrences, a few ulp per order.
fn value(v: f64, l: u32) -> SpecialFunctionValue {
    SpecialFunctionValue::with_relative_error(v, 8.0 * (l as f64 + 2.0))
}

/// Spherical Bessel function of the first kind, `j_0(x) = sin x / x`.
///
/// ```
/// let j = lescat::analytic::sph_bessel_j(0, std::f64::consts::PI).unwrap();
/// assert!(j.value.abs() < 1e-15);
/// ```
pub fn sph_bessel_j(l: u32, x: f64) -> Result<SpecialFunctionValue> {
    check(l, x)?;
    Ok(value(j_table(l, x)[l as usize], l))
}

/// Spherical Bessel function of the second kind, `n_0(x) = -cos x / x`.
pub fn sph_bessel_n(l: u32, x: f64) -> Result<SpecialFunctionValue> {
    check(l, x)?;
    Ok(value(n_table(l, x)[l as usize], l))
}

/// `j_l'(x) = j_{l-1}(x) - (l+1) j_l(x)/x`, with `j_0' = -j_1`.
pub fn sph_bessel_j_derivative(l: u32, x: f64) -> Result<SpecialFunctionValue> {
    check(l, x)?;
    let t = j_table(l, x);
    Ok(value(derivative(&t, l as usize, x, || j1(x)), l + 1))
}

/// `n_l'(x) = n_{l-1}(x) - (l+1) n_l(x)/x`, with `n_0' = -n_1`.
pub fn sph_bessel_n_derivative(l: u32, x: f64) -> Result<SpecialFunctionValue> {
    check(l, x)?;
    let t = n_table(l.max(1), x);
    Ok(value(derivative(&t, l as usize, x, || t[1]), l + 1))
}

/// `(j_l, j_l', n_l, n_l')` at once, sharing the recurrences.
pub(crate) fn all(l: u32, x: f64) -> Result<[f64; 4]> {
    check(l, x)?;
    let lu = l as usize;
    let jt = j_table(l.max(1), x);
    let nt = n_table(l.max(1), x);
    let jd = derivative(&jt, lu, x, || jt[1]);
    let nd = derivative(&nt, lu, x, || nt[1]);
    Ok([jt[lu], jd, nt[lu], nd])
}
