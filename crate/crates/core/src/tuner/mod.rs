//! Two-parameter tuning of a potential to a target `(a, r0)`.
//!
//! Each outer iteration first adjusts the strength (`v`, or `C6` for
//! Lennard-Jones) until `a` matches at fixed size, then rescales the size
//! (`μ`, or `C12` together with `C6` along the length-scaling direction)
//! until `r0` matches. Stretching all lengths by `s` multiplies both `a` and
//! `r0` by `s`, so the second step keeps the shape and only moves the pair
//! along a ray; the loop stops once both agree within tolerance.

mod root;
mod scan;

use serde::{Deserialize, Serialize};

pub use root::{solve_1d, Sample};
pub use scan::{scan, ScanParameter, ScanRow};

use crate::error::{Error, Result};
use crate::observables::{compute_with_solution, scattering_length_only, ComputeOptions, ScatteringLength, ScatteringObservables};
use crate::potentials::{derive_range, Family, PotentialSpec};
use crate::solver::SolverConfig;

/// Outer iterations first run at this step (when the requested one is
/// finer), then continue at the requested step from the coarse answer.
pub const COARSE_DR: f64 = 1e-3;

/// Inner solves aim this much tighter than the target tolerances.
const INNER_TIGHTENING: f64 = 0.1;

const MAX_INNER_EVALS: usize = 200;
const MAX_SCALING_STEPS: usize = 12;

fn default_tol() -> f64 {
    1e-3
}

fn default_max_outer() -> usize {
    60
}

/// What to tune for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TuneTarget {
    /// `"unitary"` asks for `1/a → 0`.
    pub a_target: ScatteringLength,
    pub r0_target: f64,
    pub desired_nodes: usize,
    /// Relative tolerance on `a`; on `|1/a| · r0` for unitary targets.
    #[serde(default = "default_tol")]
    pub tol_a: f64,
    #[serde(default = "default_tol")]
    pub tol_r0: f64,
    #[serde(default = "default_max_outer")]
    pub max_outer_iterations: usize,
}

impl TuneTarget {
    pub fn new(a_target: ScatteringLength, r0_target: f64, desired_nodes: usize) -> Result<Self> {
        TuneTarget {
            a_target,
            r0_target,
            desired_nodes,
            tol_a: default_tol(),
            tol_r0: default_tol(),
            max_outer_iterations: default_max_outer(),
        }
        .validated()
    }

    pub fn finite(a: f64, r0: f64, desired_nodes: usize) -> Result<Self> {
        Self::new(ScatteringLength::Finite(a), r0, desired_nodes)
    }

    pub fn unitary(r0: f64, desired_nodes: usize) -> Result<Self> {
        Self::new(ScatteringLength::Unitary { raw: f64::INFINITY }, r0, desired_nodes)
    }

    pub fn validated(self) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.r0_target > 0.0 && self.r0_target.is_finite()) {
            return bad(format!("r0_target must be positive, got {}", self.r0_target));
        }
        if !(self.tol_a > 0.0 && self.tol_r0 > 0.0) {
            return bad("tolerances must be positive".into());
        }
        if self.max_outer_iterations == 0 {
            return bad("max_outer_iterations must be at least 1".into());
        }
        if let ScatteringLength::Finite(a) = self.a_target {
            if !(a.is_finite() && a != 0.0) {
                return bad(format!("a_target must be finite and non-zero, got {a}"));
            }
        }
        Ok(self)
    }

    /// Whether `obs` satisfies the target.
    ///
    /// Unitary targets test `|1/a| ≤ tol_a / r0_target` and also accept one
    /// extra node: just past threshold `a` is huge and positive, and its
    /// outside zero at `r = a` counts as a node.
    pub fn is_met(&self, obs: &ScatteringObservables) -> bool {
        let Some(r0) = obs.r0 else { return false };
        let r0_ok = (r0 - self.r0_target).abs() / self.r0_target <= self.tol_r0;
        let a_ok = match self.a_target {
            ScatteringLength::Finite(t) => {
                obs.node_count == self.desired_nodes && (obs.a.raw() - t).abs() / t.abs().max(1.0) <= self.tol_a
            }
            ScatteringLength::Unitary { .. } => {
                let nodes_ok = obs.node_count == self.desired_nodes
                    || obs.node_count == self.desired_nodes + 1 && obs.a.raw() > 0.0;
                nodes_ok && obs.a.inverse().abs() <= self.tol_a / self.r0_target
            }
        };
        a_ok && r0_ok
    }

    /// Signed objective for the strength solve: positive means "deepen".
    fn strength_sample(&self, a: ScatteringLength, nodes: usize) -> Sample {
        let n = self.desired_nodes;
        let raw = a.raw();
        match self.a_target {
            ScatteringLength::Finite(t) => {
                if nodes < n {
                    Sample::outside(1.0)
                } else if nodes > n {
                    Sample::outside(-1.0)
                } else {
                    Sample::admissible(raw - t)
                }
            }
            // -1/a is continuous through the threshold between sectors n
            // and n+1; the far side of each sector (where a has the wrong
            // sign) only contributes a direction
            ScatteringLength::Unitary { .. } => {
                if nodes < n || nodes == n && raw >= 0.0 {
                    Sample::outside(1.0)
                } else if nodes > n + 1 || nodes == n + 1 && raw <= 0.0 {
                    Sample::outside(-1.0)
                } else {
                    Sample::admissible(-1.0 / raw)
                }
            }
        }
    }

    fn strength_tolerance(&self) -> f64 {
        INNER_TIGHTENING
            * match self.a_target {
                ScatteringLength::Finite(t) => self.tol_a * t.abs().max(1.0),
                ScatteringLength::Unitary { .. } => self.tol_a / self.r0_target,
            }
    }
}

/// One outer iteration, recorded after its range step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneIterate {
    pub iteration: usize,
    pub dr: f64,
    pub spec: PotentialSpec,
    pub a: ScatteringLength,
    pub r0: Option<f64>,
    pub nodes: usize,
}

/// Tuned potential and what it achieves at the requested step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneResult {
    pub spec: PotentialSpec,
    pub achieved: ScatteringObservables,
    pub outer_iterations: usize,
    pub converged: bool,
    pub history: Vec<TuneIterate>,
}

/// The two tunable numbers of a family: a strength and a length scale.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Params {
    family: Family,
    /// `v`, or `C6`.
    strength: f64,
    /// `μ`, or `C12`.
    size: f64,
}

impl Params {
    fn from_spec(spec: &PotentialSpec) -> Result<Self> {
        let family = spec.family();
        let (strength, size) = match *spec {
            PotentialSpec::SphericalWell { v, mu }
            | PotentialSpec::PoschlTeller { v, mu }
            | PotentialSpec::Gaussian { v, mu } => (v, mu),
            PotentialSpec::LennardJones { c12, c6 } => (c6, c12),
            PotentialSpec::Tabulated { .. } => {
                return Err(Error::Unsupported("tabulated potentials have no tunable parameters".into()))
            }
        };
        Ok(Params { family, strength, size })
    }

    fn spec(&self) -> Result<PotentialSpec> {
        match self.family {
            Family::LennardJones => PotentialSpec::lennard_jones(self.size, self.strength),
            f => PotentialSpec::attractive(f, self.strength, self.size),
        }
    }

    fn with_strength(self, strength: f64) -> Self {
        Params { strength, ..self }
    }

    /// Stretches every length by `s`.
    fn stretched(self, s: f64) -> Self {
        match self.family {
            // V̄(r) = ½(C12/r¹² - C6/r⁶) keeps its shape in units of s
            // when C12 → s¹⁰ C12 and C6 → s⁴ C6
            Family::LennardJones => Params {
                strength: self.strength * s.powi(4),
                size: self.size * s.powi(10),
                ..self
            },
            _ => Params { size: self.size / s, ..self },
        }
    }
}

/// Default starting point for a family: unit size, and a strength in the
/// middle of the sector the target asks for (attractive families) or `C6 = 1`
/// (Lennard-Jones).
///
/// ```
/// use lescat::potentials::{Family, PotentialSpec};
/// use lescat::tuner::{cold_start, TuneTarget};
///
/// let t = TuneTarget::finite(-18.5, 2.7, 0).unwrap();
/// assert!(matches!(cold_start(Family::Gaussian, &t).unwrap(), PotentialSpec::Gaussian { mu, .. } if mu == 1.0));
/// ```
pub fn cold_start(family: Family, target: &TuneTarget) -> Result<PotentialSpec> {
    match family {
        Family::LennardJones => PotentialSpec::lennard_jones(1.0, 1.0),
        Family::Tabulated => Err(Error::Unsupported("tabulated potentials have no tunable parameters".into())),
        f => {
            let (lo, hi) = initial_bracket(target.desired_nodes);
            PotentialSpec::attractive(f, 0.5 * (lo + hi), 1.0)
        }
    }
}

/// Strength bracket for a node sector, from the well thresholds
/// `v_n = (π/2 + nπ)²/2`.
fn initial_bracket(nodes: usize) -> (f64, f64) {
    let threshold = |n: usize| crate::analytic::well_threshold(n as u32);
    if nodes == 0 {
        (0.1, 0.98 * threshold(0))
    } else {
        (1.02 * threshold(nodes - 1), 0.98 * threshold(nodes))
    }
}

/// Tunes the two parameters of `initial` (`v, μ`, or `C6, C12`) so the
/// potential reproduces `target`.
///
/// The strength solve keeps the node count at `desired_nodes`: any trial with
/// too many nodes counts as "too deep" and any with too few as "too shallow",
/// so the bracket is shrunk towards the intended sector and never settles in
/// another one. Outer iterations first run at [`COARSE_DR`] when `opts` asks
/// for something finer.
///
/// ```no_run
/// use lescat::observables::ComputeOptions;
/// use lescat::potentials::{Family, PotentialSpec};
/// use lescat::tuner::{tune, TuneTarget};
///
/// let target = TuneTarget::finite(5.4, 1.70, 1).unwrap();
/// let start = PotentialSpec::gaussian(1.5, 1.0).unwrap();
/// let result = tune(&start, &target, &ComputeOptions::default()).unwrap();
/// assert!(target.is_met(&result.achieved));
/// ```
pub fn tune(initial: &PotentialSpec, target: &TuneTarget, opts: &ComputeOptions) -> Result<TuneResult> {
    let target = target.validated()?;
    let mut params = Params::from_spec(initial)?;
    params.spec()?;
    let fine = *opts;
    let mut history = Vec::new();

    let first = evaluate(&params, &fine)?;
    if target.is_met(&first) {
        return Ok(TuneResult {
            spec: params.spec()?,
            achieved: first,
            outer_iterations: 0,
            converged: true,
            history,
        });
    }

    let mut stages = Vec::new();
    if fine.solver.dr < COARSE_DR {
        stages.push(ComputeOptions {
            solver: SolverConfig { dr: COARSE_DR, ..fine.solver },
            ..fine
        });
    }
    stages.push(fine);

    let mut iteration = 0;
    let mut last = first;
    let mut fresh = true;
    for (stage_index, stage) in stages.iter().enumerate() {
        let final_stage = stage_index + 1 == stages.len();
        while iteration < target.max_outer_iterations {
            iteration += 1;
            params = strength_step(params, &target, stage, fresh)?;
            fresh = false;
            let (p, obs) = size_step(params, &target, stage)?;
            params = p;
            last = obs;
            history.push(TuneIterate {
                iteration,
                dr: stage.solver.dr,
                spec: params.spec()?,
                a: obs.a,
                r0: obs.r0,
                nodes: obs.node_count,
            });
            if target.is_met(&obs) {
                if final_stage {
                    return Ok(TuneResult {
                        spec: params.spec()?,
                        achieved: obs,
                        outer_iterations: iteration,
                        converged: true,
                        history,
                    });
                }
                break;
            }
        }
    }
    Err(Error::ConvergenceFailure {
        iterations: iteration,
        last_a: last.a.raw(),
        last_r0: last.r0.unwrap_or(f64::NAN),
    })
}

fn evaluate(params: &Params, opts: &ComputeOptions) -> Result<ScatteringObservables> {
    let spec = params.spec()?;
    let range = derive_range(&spec, &opts.range)?;
    Ok(compute_with_solution(&spec, &range, opts)?.0)
}

/// Step (i): strength for `a` at fixed size.
fn strength_step(params: Params, target: &TuneTarget, opts: &ComputeOptions, fresh: bool) -> Result<Params> {
    let mut objective = |strength: f64| -> Result<Sample> {
        let spec = params.with_strength(strength).spec()?;
        let range = derive_range(&spec, &opts.range)?;
        let (a, nodes) = scattering_length_only(&spec, &range, &opts.solver)?;
        Ok(target.strength_sample(a, nodes))
    };
    let tol = target.strength_tolerance();
    let limits = (1e-8, 1e8);
    let found = if fresh && params.family.is_attractive() {
        let (lo, hi) = initial_bracket(target.desired_nodes);
        let s_lo = objective(lo)?;
        let s_hi = objective(hi)?;
        if s_lo.value > 0.0 && s_hi.value < 0.0 {
            root::solve_bracketed(&mut objective, (lo, s_lo), (hi, s_hi), tol, MAX_INNER_EVALS)
        } else if s_lo.value <= 0.0 {
            // still too deep at the bottom of the guess: walk shallower
            root::solve_from(&mut objective, lo, true, limits, tol, MAX_INNER_EVALS)
        } else {
            root::solve_from(&mut objective, hi, true, limits, tol, MAX_INNER_EVALS)
        }
    } else {
        root::solve_from(&mut objective, params.strength, true, limits, tol, MAX_INNER_EVALS)
    };
    let (strength, _) = found.map_err(|e| match e {
        Error::NoBracket { lo, hi, detail } => Error::NoBracket {
            lo,
            hi,
            detail: format!(
                "{detail}; target a = {:?} with {} node(s) not reached by varying the strength",
                target.a_target, target.desired_nodes
            ),
        },
        other => other,
    })?;
    Ok(params.with_strength(strength))
}

/// Step (ii): size for `r0` at fixed shape. Since `r0` is proportional to the
/// length scale this is a fixed-point iteration on the stretch factor.
fn size_step(mut params: Params, target: &TuneTarget, opts: &ComputeOptions) -> Result<(Params, ScatteringObservables)> {
    let tol = INNER_TIGHTENING * target.tol_r0;
    let mut obs = evaluate(&params, opts)?;
    for _ in 0..MAX_SCALING_STEPS {
        let r0 = obs.r0.ok_or(Error::EffectiveRangeUndefined)?;
        if !(r0 > 0.0) {
            return Err(Error::Domain(format!("cannot rescale to r0 = {} from r0 = {r0}", target.r0_target)));
        }
        if (r0 - target.r0_target).abs() <= tol * target.r0_target {
            return Ok((params, obs));
        }
        params = params.stretched(target.r0_target / r0);
        obs = evaluate(&params, opts)?;
    }
    Ok((params, obs))
}
