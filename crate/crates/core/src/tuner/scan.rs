use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::{compute, ComputeOptions, ScatteringLength};
use crate::potentials::{Family, PotentialSpec};

/// Which parameter a scan varies; the other one stays at the fixed value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanParameter {
    /// `v` (attractive families) or `C6` (Lennard-Jones).
    Strength,
    /// `μ` (attractive families) or `C12` (Lennard-Jones).
    Size,
}

impl ScanParameter {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "strength" | "v" | "c6" => Ok(ScanParameter::Strength),
            "size" | "mu" | "c12" => Ok(ScanParameter::Size),
            other => Err(Error::InvalidArgument(format!("unknown scan parameter '{other}'"))),
        }
    }
}

/// One grid point of a scan. Failed points keep the message and leave the
/// observables empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub param: f64,
    pub a: Option<ScatteringLength>,
    pub r0: Option<f64>,
    pub nodes: Option<usize>,
    /// Set on both sides of a pole of `a`.
    pub divergence: bool,
    pub error: Option<String>,
}

/// Computes `(a, r0, nodes)` on `grid`, in parallel, in grid order.
///
/// A pole of `a(param)` shows up as a sign flip between neighbours together
/// with a change in the node count (a new bound state); both rows around it
/// are flagged, as is any row classified as unitary. A sign flip without a
/// node change is `a` passing through zero and is not flagged.
///
/// ```
/// use lescat::observables::ComputeOptions;
/// use lescat::potentials::Family;
/// use lescat::tuner::{scan, ScanParameter};
///
/// let rows = scan(Family::SphericalWell, 1.0, ScanParameter::Strength, &[1.0, 1.5], &ComputeOptions::default()).unwrap();
/// assert!(rows[0].a.unwrap().raw() < 0.0 && rows[1].a.unwrap().raw() > 0.0);
/// assert!(rows[0].divergence && rows[1].divergence);
/// ```
pub fn scan(
    family: Family,
    fixed: f64,
    varied: ScanParameter,
    grid: &[f64],
    opts: &ComputeOptions,
) -> Result<Vec<ScanRow>> {
    if family == Family::Tabulated {
        return Err(Error::Unsupported("tabulated potentials have no scan parameters".into()));
    }
    if let Some(bad) = grid.iter().chain([&fixed]).find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::InvalidArgument(format!("scan values must be finite and positive, got {bad}")));
    }
    let spec_at = |x: f64| {
        let (strength, size) = match varied {
            ScanParameter::Strength => (x, fixed),
            ScanParameter::Size => (fixed, x),
        };
        match family {
            Family::LennardJones => PotentialSpec::lennard_jones(size, strength),
            f => PotentialSpec::attractive(f, strength, size),
        }
    };
    let mut rows: Vec<ScanRow> = grid
        .par_iter()
        .map(|&x| match spec_at(x).and_then(|s| compute(&s, opts)) {
            Ok(obs) => ScanRow {
                param: x,
                a: Some(obs.a),
                r0: obs.r0,
                nodes: Some(obs.node_count),
                divergence: obs.a.is_unitary(),
                error: None,
            },
            Err(e) => ScanRow {
                param: x,
                a: None,
                r0: None,
                nodes: None,
                divergence: false,
                error: Some(e.to_string()),
            },
        })
        .collect();
    for i in 1..rows.len() {
        let (prev, cur) = (&rows[i - 1], &rows[i]);
        let (Some(a0), Some(a1)) = (prev.a, cur.a) else { continue };
        let flipped = a0.raw().signum() != a1.raw().signum();
        if flipped && prev.nodes != cur.nodes {
            rows[i - 1].divergence = true;
            rows[i].divergence = true;
        }
    }
    Ok(rows)
}
