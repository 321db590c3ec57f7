use crate::error::{Error, Result};

/// One evaluation of a sector-aware objective.
///
/// `value` is the signed distance from the target. Outside the admissible
/// region (wrong node count) only its sign is used, and it must point back
/// towards the admissible side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub value: f64,
    pub admissible: bool,
}

impl Sample {
    pub fn admissible(value: f64) -> Self {
        Sample { value, admissible: true }
    }

    /// A point outside the sector whose sign says which way the target lies.
    pub fn outside(sign: f64) -> Self {
        Sample { value: sign, admissible: false }
    }
}

/// Finds a root of `f` inside `bracket`, whose ends must have opposite signs.
///
/// Uses the Illinois variant of regula falsi while both ends are admissible
/// and bisection otherwise, so the iterate never jumps across a node-count
/// change. Returns the parameter and its sample once an admissible sample
/// satisfies `|value| <= tol`.
///
/// ```
/// use lescat::tuner::{solve_1d, Sample};
/// let (x, _) = solve_1d(|x| Ok(Sample::admissible(x - 0.5)), (0.0, 1.0), 1e-12, 100).unwrap();
/// assert!((x - 0.5).abs() < 1e-12);
/// ```
pub fn solve_1d<F>(mut f: F, bracket: (f64, f64), tol: f64, max_evals: usize) -> Result<(f64, Sample)>
where
    F: FnMut(f64) -> Result<Sample>,
{
    let (lo, hi) = bracket;
    let f_lo = f(lo)?;
    if f_lo.admissible && f_lo.value.abs() <= tol {
        return Ok((lo, f_lo));
    }
    let f_hi = f(hi)?;
    if f_hi.admissible && f_hi.value.abs() <= tol {
        return Ok((hi, f_hi));
    }
    solve_bracketed(&mut f, (lo, f_lo), (hi, f_hi), tol, max_evals)
}

/// Core of [`solve_1d`] for callers that already evaluated the ends.
pub(crate) fn solve_bracketed<F>(
    f: &mut F,
    (mut lo, mut f_lo): (f64, Sample),
    (mut hi, mut f_hi): (f64, Sample),
    tol: f64,
    max_evals: usize,
) -> Result<(f64, Sample)>
where
    F: FnMut(f64) -> Result<Sample>,
{
    if f_lo.value.signum() == f_hi.value.signum() {
        return Err(Error::NoBracket {
            lo,
            hi,
            detail: format!("objective {} at lo and {} at hi", f_lo.value, f_hi.value),
        });
    }
    // Illinois bookkeeping: which end was kept last time
    let mut side = 0i8;
    let mut w_lo = 1.0;
    let mut w_hi = 1.0;
    for _ in 0..max_evals {
        let mid = if f_lo.admissible && f_hi.admissible {
            let (a, b) = (f_lo.value * w_lo, f_hi.value * w_hi);
            let x = (lo * b - hi * a) / (b - a);
            // stay strictly inside and away from the ends
            let margin = 1e-3 * (hi - lo).abs();
            let (l, h) = if lo < hi { (lo, hi) } else { (hi, lo) };
            if x.is_finite() {
                x.clamp(l + margin, h - margin)
            } else {
                0.5 * (lo + hi)
            }
        } else {
            0.5 * (lo + hi)
        };
        if mid == lo || mid == hi {
            break;
        }
        let s = f(mid)?;
        if s.admissible && s.value.abs() <= tol {
            return Ok((mid, s));
        }
        if s.value.signum() == f_lo.value.signum() {
            lo = mid;
            f_lo = s;
            w_lo = 1.0;
            if side == -1 {
                w_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = mid;
            f_hi = s;
            w_hi = 1.0;
            if side == 1 {
                w_lo *= 0.5;
            }
            side = 1;
        }
        if (hi - lo).abs() <= 1e-15 * lo.abs().max(hi.abs()) {
            break;
        }
    }
    Err(Error::NoBracket {
        lo,
        hi,
        detail: format!("no admissible root to tolerance {tol} (sector boundary or pole inside the bracket)"),
    })
}

/// Walks from `start` in the direction the sign of `f(start)` indicates
/// (positive: increase) with geometrically growing steps until the sign
/// changes, then solves on the resulting bracket.
///
/// `increasing` says whether a positive objective means the parameter must
/// grow. The walk stays within `[min, max]`.
pub(crate) fn solve_from<F>(
    f: &mut F,
    start: f64,
    increasing: bool,
    limits: (f64, f64),
    tol: f64,
    max_evals: usize,
) -> Result<(f64, Sample)>
where
    F: FnMut(f64) -> Result<Sample>,
{
    let s0 = f(start)?;
    if s0.admissible && s0.value.abs() <= tol {
        return Ok((start, s0));
    }
    let grow = (s0.value > 0.0) == increasing;
    let mut factor: f64 = 1.05;
    let (mut x_prev, mut s_prev) = (start, s0);
    for _ in 0..64 {
        let x = if grow { x_prev * factor } else { x_prev / factor };
        if x > limits.1 || x < limits.0 {
            break;
        }
        let s = f(x)?;
        if s.admissible && s.value.abs() <= tol {
            return Ok((x, s));
        }
        if s.value.signum() != s_prev.value.signum() {
            return solve_bracketed(f, (x_prev, s_prev), (x, s), tol, max_evals);
        }
        x_prev = x;
        s_prev = s;
        factor = factor * factor;
        factor = factor.min(4.0);
    }
    Err(Error::NoBracket {
        lo: start.min(x_prev),
        hi: start.max(x_prev),
        detail: format!(
            "objective kept the sign of {} while walking from {start} to {x_prev} (target outside this node sector?)",
            s0.value
        ),
    })
}
