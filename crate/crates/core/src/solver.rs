//! Outward integration of the reduced radial equation
//! `u'' = [2V̄(r) + l(l+1)/r² - k²] u` on a uniform grid.
//!
//! The grid runs from the origin to one step past the matching radius `R`,
//! with `Δr` shrunk so that `R` falls exactly on a node. Integration starts
//! from `u = 0` at the origin (or at the hard-core cutoff `r_min`) and a seed
//! `Δr^{l+1}` one step further out; the overall normalization is arbitrary.
//!
//! Two recursions are available: the second-order central difference and
//! Numerov's method. Deep inside a hard core Numerov's denominator
//! `1 + Δr² ξ/12` goes through zero; steps where it falls below
//! [`STIFF_DENOMINATOR`] use the central-difference update instead, which
//! reproduces the growing solution with the right sign. The growth there can
//! exceed the range of `f64`, so the solution is rescaled by an exact power
//! of two whenever it gets large.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::{PotentialSpec, RangeInfo};

pub const DEFAULT_DR: f64 = 1e-4;

/// Numerov steps whose denominator drops below this use the central update.
pub const STIFF_DENOMINATOR: f64 = 0.5;

// 2^500 and its inverse; multiplying by them is exact.
const RESCALE_LIMIT: f64 = 3.273_390_607_896_142e150;
const RESCALE_FACTOR: f64 = 3.054_936_363_499_605e-151;

/// Finite-difference scheme used for the radial recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Central,
    Numerov,
}

impl Method {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "central" => Ok(Method::Central),
            "numerov" => Ok(Method::Numerov),
            other => Err(Error::InvalidArgument(format!(
                "unknown method '{other}' (expected numerov or central)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Central => "central",
            Method::Numerov => "numerov",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Requested grid step; the actual step is shrunk to put a node at `R`.
    pub dr: f64,
    pub method: Method,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dr: DEFAULT_DR,
            method: Method::Numerov,
        }
    }
}

/// Central-difference update `u_{i+1} = 2u_i - u_{i-1} + Δr² w_i u_i`,
/// where `w = 2V̄ + l(l+1)/r² - k²`.
#[inline]
pub fn step_central(u_prev: f64, u_curr: f64, w_curr: f64, dr: f64) -> f64 {
    2.0 * u_curr - u_prev + dr * dr * w_curr * u_curr
}

/// Numerov update for `u'' = -ξ u`.
///
/// Fails when `1 + Δr² ξ_{i+1}/12` vanishes.
#[inline]
pub fn step_numerov(
    u_prev: f64,
    u_curr: f64,
    xi_prev: f64,
    xi_curr: f64,
    xi_next: f64,
    dr: f64,
) -> Result<f64> {
    let c = dr * dr / 12.0;
    let denom = 1.0 + c * xi_next;
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::StepFailure { r: f64::NAN });
    }
    Ok((2.0 * u_curr * (1.0 - 5.0 * c * xi_curr) - u_prev * (1.0 + c * xi_prev)) / denom)
}

/// Uniform grid with a node exactly at the matching radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Grid {
    pub dr: f64,
    /// Index of the node at `R`.
    pub n_range: usize,
    /// Index where `u = 0` is imposed (0, or the first node at or past `r_min`).
    pub start: usize,
}

impl Grid {
    pub fn new(range: &RangeInfo, dr_requested: f64) -> Result<Self> {
        if !(dr_requested > 0.0 && dr_requested.is_finite()) {
            return Err(Error::InvalidArgument(format!("dr must be positive, got {dr_requested}")));
        }
        let q = range.range / dr_requested;
        let n = if (q - q.round()).abs() <= 1e-9 * q {
            q.round()
        } else {
            q.ceil()
        };
        if n < 100.0 {
            return Err(Error::InvalidArgument(format!(
                "dr = {dr_requested} is too coarse for R = {} (need dr <= R/100)",
                range.range
            )));
        }
        if n > 1e9 {
            return Err(Error::InvalidArgument(format!(
                "dr = {dr_requested} gives more than 1e9 grid points for R = {}",
                range.range
            )));
        }
        let n_range = n as usize;
        let dr = range.range / n;
        let start = if range.r_min > 0.0 {
            (range.r_min / dr).ceil() as usize
        } else {
            0
        };
        if start + 2 >= n_range {
            return Err(Error::InvalidArgument("core cutoff leaves no room to integrate".into()));
        }
        Ok(Grid { dr, n_range, start })
    }

    #[inline]
    pub fn r(&self, i: usize) -> f64 {
        i as f64 * self.dr
    }
}

/// The three samples around `R` needed for matching to the outside solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingData {
    pub range: f64,
    pub dr: f64,
    pub method: Method,
    /// `u(R - Δr)`, `u(R)`, `u(R + Δr)`.
    pub u: [f64; 3],
    /// `ξ` at the same three points.
    pub xi: [f64; 3],
    /// `u(R + Δr) - u(R - Δr)` (central) or the same difference of
    /// `y = (1 + Δr² ξ/12) u` (Numerov), accumulated from the carried step
    /// differences so it does not suffer the cancellation of subtracting
    /// the stored samples.
    pub span: f64,
    pub node_count: usize,
    pub l: u32,
    pub k: f64,
}

impl MatchingData {
    /// `u'(R)` from the symmetric difference.
    ///
    /// Numerov runs add the `Δr²/6` curvature correction, which keeps the
    /// derivative at the integrator's fourth order; with `ξ = 0` at `R ± Δr`
    /// it is the plain three-point formula.
    pub fn derivative(&self) -> f64 {
        let [um, _, up] = self.u;
        let h = self.dr;
        match self.method {
            Method::Central => self.span / (2.0 * h),
            Method::Numerov => {
                // u₊(1 + h²ξ₊/6) - u₋(1 + h²ξ₋/6) = Δy + h²(ξ₊u₊ - ξ₋u₋)/12
                let c = h * h / 12.0;
                (self.span + c * (self.xi[2] * up - self.xi[0] * um)) / (2.0 * h)
            }
        }
    }
}

/// Solution of the radial equation on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub(crate) grid: Grid,
    pub(crate) range: f64,
    pub(crate) u: Vec<f64>,
    pub(crate) xi_matching: [f64; 3],
    pub(crate) span: f64,
    pub(crate) node_count: usize,
    pub(crate) l: u32,
    pub(crate) k: f64,
    pub(crate) method: Method,
    pub(crate) normalized: bool,
}

impl RadialSolution {
    pub fn dr(&self) -> f64 {
        self.grid.dr
    }

    pub fn r_values(&self) -> Vec<f64> {
        (0..self.u.len()).map(|i| self.grid.r(i)).collect()
    }

    pub fn u_values(&self) -> &[f64] {
        &self.u
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// Number of nodes of `u` (see [`integrate`] for the exact rule).
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Matching radius `R`.
    pub fn range(&self) -> f64 {
        self.range
    }

    /// Grid index of `R`.
    pub fn range_index(&self) -> usize {
        self.grid.n_range
    }

    /// Grid index where `u = 0` was imposed.
    pub fn start_index(&self) -> usize {
        self.grid.start
    }

    pub fn matching(&self) -> MatchingData {
        let n = self.grid.n_range;
        MatchingData {
            range: self.range,
            dr: self.grid.dr,
            method: self.method,
            u: [self.u[n - 1], self.u[n], self.u[n + 1]],
            xi: self.xi_matching,
            span: self.span,
            node_count: self.node_count,
            l: self.l,
            k: self.k,
        }
    }

    /// Returns a copy with every sample multiplied by `c`.
    pub(crate) fn scaled(&self, c: f64, normalized: bool) -> RadialSolution {
        RadialSolution {
            u: self.u.iter().map(|&x| x * c).collect(),
            span: self.span * c,
            normalized,
            ..self.clone()
        }
    }
}

/// Integrates the radial equation for angular momentum `l` and wave number
/// `k` (both dimensionless) from the origin to `R + Δr`.
///
/// `node_count` counts strict sign changes of `u` on the grid up to `R`,
/// ignoring exact zeros. For `k = 0, l = 0` the outside solution is the
/// straight line through `u(R)` with slope `u'(R)`; when that line crosses
/// zero beyond `R` (i.e. `a > R`) the crossing is counted as well, so the
/// count equals the number of bound states.
pub fn integrate(
    spec: &PotentialSpec,
    range: &RangeInfo,
    l: u32,
    k: f64,
    config: &SolverConfig,
) -> Result<RadialSolution> {
    integrate_with_seed(spec, range, l, k, config, 1.0)
}

/// Like [`integrate`] with the first non-zero sample multiplied by `seed_scale`.
pub fn integrate_with_seed(
    spec: &PotentialSpec,
    range: &RangeInfo,
    l: u32,
    k: f64,
    config: &SolverConfig,
    seed_scale: f64,
) -> Result<RadialSolution> {
    let grid = Grid::new(range, config.dr)?;
    let mut store = Vec::with_capacity(grid.n_range + 2);
    let run = run(spec, range, &grid, l, k, config.method, seed_scale, Some(&mut store))?;
    Ok(RadialSolution {
        grid,
        range: range.range,
        u: store,
        xi_matching: run.matching.xi,
        span: run.matching.span,
        node_count: run.matching.node_count,
        l,
        k,
        method: config.method,
        normalized: false,
    })
}

/// Integrates without storing the solution and returns only the matching data.
///
/// Produces bit-identical `u(R), u(R ± Δr)` and node counts to [`integrate`].
pub fn probe(
    spec: &PotentialSpec,
    range: &RangeInfo,
    l: u32,
    k: f64,
    config: &SolverConfig,
) -> Result<MatchingData> {
    let grid = Grid::new(range, config.dr)?;
    Ok(run(spec, range, &grid, l, k, config.method, 1.0, None)?.matching)
}

struct RunOutput {
    matching: MatchingData,
}

#[allow(clippy::too_many_arguments)]
fn run(
    spec: &PotentialSpec,
    range: &RangeInfo,
    grid: &Grid,
    l: u32,
    k: f64,
    method: Method,
    seed_scale: f64,
    mut store: Option<&mut Vec<f64>>,
) -> Result<RunOutput> {
    spec.validate()?;
    if !(k >= 0.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!("k must be finite and >= 0, got {k}")));
    }
    if !(seed_scale != 0.0 && seed_scale.is_finite()) {
        return Err(Error::InvalidArgument("seed scale must be finite and non-zero".into()));
    }
    let dr = grid.dr;
    let h2 = dr * dr;
    let c12 = h2 / 12.0;
    let centrifugal = (l as f64) * (l as f64 + 1.0);
    let k2 = k * k;
    let xi = |i: usize| {
        let r = grid.r(i);
        k2 - 2.0 * spec.interior_value(r) - centrifugal / (r * r)
    };
    let last = grid.n_range + 1;
    let start = grid.start;

    if let Some(s) = store.as_deref_mut() {
        s.clear();
        s.resize(start + 1, 0.0);
    }
    let seed = dr.powi(l as i32 + 1) * seed_scale;
    let mut u_prev = 0.0;
    let mut u_curr = seed;
    if let Some(s) = store.as_deref_mut() {
        s.push(u_curr);
    }
    let mut nodes = 0usize;
    let mut last_sign = seed.signum();
    let mut xi_prev = if start == 0 { f64::NAN } else { xi(start) };
    let mut xi_curr = xi(start + 1);
    // Both recursions are run in summed form: the first difference is
    // carried from step to step instead of being re-formed as
    // 2u_i - u_{i-1}, which at small Δr would round away most of the
    // O(Δr²) increment. Numerov works on y = (1 + Δr² ξ/12) u.
    let y_of = |u: f64, xi: f64| u * (1.0 + c12 * xi);
    // at the origin (1 + Δr² ξ/12) u → -u_1/6 for l = 1 and 0 otherwise
    let y_start = if start == 0 && l == 1 { -u_curr / 6.0 } else { 0.0 };
    let mut y_curr = y_of(u_curr, xi_curr);
    let mut diff = match method {
        Method::Central => u_curr,
        Method::Numerov => y_curr - y_start,
    };
    let mut tail = [0.0; 3];
    let mut tail_xi = [0.0; 3];
    let mut span = 0.0;

    for i in (start + 1)..last {
        let xi_next = xi(i + 1);
        let mut diff_before = diff;
        let mut u_next = match method {
            Method::Central => {
                diff -= h2 * xi_curr * u_curr;
                u_curr + diff
            }
            Method::Numerov => {
                let denom = 1.0 + c12 * xi_next;
                if denom <= STIFF_DENOMINATOR || 1.0 + c12 * xi_curr <= STIFF_DENOMINATOR {
                    let u_next = step_central(u_prev, u_curr, -xi_curr, dr);
                    let y_next = y_of(u_next, xi_next);
                    diff = y_next - y_curr;
                    y_curr = y_next;
                    u_next
                } else {
                    diff -= h2 * xi_curr * u_curr;
                    y_curr += diff;
                    y_curr / denom
                }
            }
        };
        if !u_next.is_finite() {
            return Err(Error::Instability { r: grid.r(i + 1) });
        }
        if u_next.abs() > RESCALE_LIMIT {
            u_next *= RESCALE_FACTOR;
            u_curr *= RESCALE_FACTOR;
            u_prev *= RESCALE_FACTOR;
            y_curr *= RESCALE_FACTOR;
            diff *= RESCALE_FACTOR;
            diff_before *= RESCALE_FACTOR;
            if let Some(s) = store.as_deref_mut() {
                for x in s[start..].iter_mut() {
                    *x *= RESCALE_FACTOR;
                }
            }
        }
        if i < grid.n_range && u_next != 0.0 {
            let sign = u_next.signum();
            if sign != last_sign {
                nodes += 1;
                last_sign = sign;
            }
        }
        if let Some(s) = store.as_deref_mut() {
            s.push(u_next);
        }
        if i + 1 == last {
            tail = [u_prev, u_curr, u_next];
            tail_xi = [xi_prev, xi_curr, xi_next];
            span = diff_before + diff;
        }
        u_prev = u_curr;
        u_curr = u_next;
        xi_prev = xi_curr;
        xi_curr = xi_next;
    }
    // `tail` is (u_{N-1}, u_N, u_{N+1}) from the final step
    let mut matching = MatchingData {
        range: range.range,
        dr,
        method,
        u: tail,
        xi: tail_xi,
        span,
        node_count: 0,
        l,
        k,
    };
    if l == 0 && k == 0.0 {
        let [_, u_r, _] = matching.u;
        let slope = matching.derivative();
        if u_r * slope < 0.0 {
            nodes += 1;
        }
    }
    matching.node_count = nodes;
    Ok(RunOutput { matching })
}
