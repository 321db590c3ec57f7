//! Radial potential families and their numerical range.
//!
//! Every potential is stored dimensionless: lengths in units of `ℓ` and the
//! potential in units of `ε = ħ²/(m_r ℓ²)`. The attractive families carry a
//! depth `v` and an inverse range `μ` and all read `V̄(r) = -v μ² f(μ r)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tail threshold: the range `R` is where `|V̄| <= 1e-15`.
pub const DEFAULT_EPSILON_TAIL: f64 = 1e-15;
/// Default hard-core threshold: integration starts where `V̄ ≈ 1e10`.
pub const DEFAULT_CORE_THRESHOLD: f64 = 1e10;
/// Largest radius the tail search will visit.
pub const DEFAULT_MAX_RADIUS: f64 = 1e3;
/// Spacing of the grid the tail search walks on.
pub const RANGE_SEARCH_STEP: f64 = 1e-3;
/// Number of points beyond a candidate range that must also be negligible.
pub const TAIL_CHECK_POINTS: usize = 8;

/// A spherically symmetric potential in dimensionless form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum PotentialSpec {
    /// `-v μ²` for `r < 1/μ`, zero outside.
    #[serde(alias = "well")]
    SphericalWell { v: f64, mu: f64 },
    /// `-v μ² / cosh²(μ r)`.
    #[serde(rename = "modified-poschl-teller", alias = "mpt")]
    PoschlTeller { v: f64, mu: f64 },
    /// `-v μ² exp(-μ² r²)`.
    Gaussian { v: f64, mu: f64 },
    /// `(C12 / r¹² - C6 / r⁶) / 2`, i.e. `C12` and `C6` measure the
    /// potential in units of `ħ²/(2 m_r)` rather than `ħ²/m_r`.
    #[serde(alias = "lj")]
    LennardJones { c12: f64, c6: f64 },
    /// Linear interpolation through `(r, v)` samples, zero past the last one.
    Tabulated { r: Vec<f64>, v: Vec<f64> },
}

/// Which member of the family a [`PotentialSpec`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    SphericalWell,
    #[serde(rename = "modified-poschl-teller")]
    PoschlTeller,
    Gaussian,
    LennardJones,
    Tabulated,
}

impl Family {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "well" | "spherical-well" => Ok(Family::SphericalWell),
            "mpt" | "modified-poschl-teller" => Ok(Family::PoschlTeller),
            "gaussian" => Ok(Family::Gaussian),
            "lj" | "lennard-jones" => Ok(Family::LennardJones),
            "tabulated" => Ok(Family::Tabulated),
            other => Err(Error::InvalidArgument(format!("unknown potential family '{other}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::SphericalWell => "spherical-well",
            Family::PoschlTeller => "modified-poschl-teller",
            Family::Gaussian => "gaussian",
            Family::LennardJones => "lennard-jones",
            Family::Tabulated => "tabulated",
        }
    }

    /// True for the three purely attractive `(v, μ)` families.
    pub fn is_attractive(self) -> bool {
        matches!(self, Family::SphericalWell | Family::PoschlTeller | Family::Gaussian)
    }
}

/// `λ` for a given mPT depth, taking the root `λ > 1` of `v = λ(λ-1)/2`.
pub fn mpt_lambda(v: f64) -> f64 {
    0.5 * (1.0 + (1.0 + 8.0 * v).sqrt())
}

/// mPT depth `v = λ(λ-1)/2`.
pub fn mpt_depth(lambda: f64) -> f64 {
    0.5 * lambda * (lambda - 1.0)
}

impl PotentialSpec {
    pub fn spherical_well(v: f64, mu: f64) -> Result<Self> {
        PotentialSpec::SphericalWell { v, mu }.validated()
    }

    pub fn poschl_teller(v: f64, mu: f64) -> Result<Self> {
        PotentialSpec::PoschlTeller { v, mu }.validated()
    }

    /// mPT from the `λ` parameterization.
    pub fn poschl_teller_from_lambda(lambda: f64, mu: f64) -> Result<Self> {
        if !(lambda >= 1.0) {
            return Err(Error::InvalidArgument(format!("mPT requires lambda >= 1, got {lambda}")));
        }
        PotentialSpec::poschl_teller(mpt_depth(lambda), mu)
    }

    pub fn gaussian(v: f64, mu: f64) -> Result<Self> {
        PotentialSpec::Gaussian { v, mu }.validated()
    }

    pub fn lennard_jones(c12: f64, c6: f64) -> Result<Self> {
        PotentialSpec::LennardJones { c12, c6 }.validated()
    }

    pub fn tabulated(r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        PotentialSpec::Tabulated { r, v }.validated()
    }

    /// Builds a `(v, μ)` family member.
    pub fn attractive(family: Family, v: f64, mu: f64) -> Result<Self> {
        match family {
            Family::SphericalWell => Self::spherical_well(v, mu),
            Family::PoschlTeller => Self::poschl_teller(v, mu),
            Family::Gaussian => Self::gaussian(v, mu),
            other => Err(Error::InvalidArgument(format!(
                "{} is not a (v, mu) family",
                other.name()
            ))),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            PotentialSpec::SphericalWell { .. } => Family::SphericalWell,
            PotentialSpec::PoschlTeller { .. } => Family::PoschlTeller,
            PotentialSpec::Gaussian { .. } => Family::Gaussian,
            PotentialSpec::LennardJones { .. } => Family::LennardJones,
            PotentialSpec::Tabulated { .. } => Family::Tabulated,
        }
    }

    /// Checks the parameter invariants, returning the spec unchanged if they hold.
    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        match self {
            PotentialSpec::SphericalWell { v, mu }
            | PotentialSpec::PoschlTeller { v, mu }
            | PotentialSpec::Gaussian { v, mu } => {
                if !(v.is_finite() && *v >= 0.0) {
                    return bad(format!("depth v must be finite and >= 0, got {v}"));
                }
                if !(mu.is_finite() && *mu > 0.0) {
                    return bad(format!("mu must be finite and > 0, got {mu}"));
                }
            }
            PotentialSpec::LennardJones { c12, c6 } => {
                if !(c12.is_finite() && *c12 > 0.0) {
                    return bad(format!("C12 must be finite and > 0, got {c12}"));
                }
                if !(c6.is_finite() && *c6 >= 0.0) {
                    return bad(format!("C6 must be finite and >= 0, got {c6}"));
                }
            }
            PotentialSpec::Tabulated { r, v } => {
                if r.len() != v.len() {
                    return bad(format!("tabulated r and v lengths differ ({} vs {})", r.len(), v.len()));
                }
                if r.len() < 2 {
                    return bad("tabulated potential needs at least two samples".into());
                }
                if r.iter().chain(v.iter()).any(|x| !x.is_finite()) {
                    return bad("tabulated samples must be finite".into());
                }
                if r[0] < 0.0 {
                    return bad("tabulated radii must be >= 0".into());
                }
                if r.windows(2).any(|w| w[1] <= w[0]) {
                    return bad("tabulated radii must be strictly increasing".into());
                }
            }
        }
        Ok(())
    }

    /// `V̄(r)`, rejecting negative radii and the Lennard-Jones origin.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(Error::Domain(format!("radius must be >= 0, got {r}")));
        }
        if r == 0.0 && self.family() == Family::LennardJones {
            return Err(Error::Domain("Lennard-Jones potential diverges at r = 0".into()));
        }
        Ok(self.value(r))
    }

    /// Unchecked `V̄(r)` for the integration loop.
    #[inline]
    pub(crate) fn value(&self, r: f64) -> f64 {
        match *self {
            PotentialSpec::SphericalWell { v, mu } => {
                if r < 1.0 / mu {
                    -v * mu * mu
                } else {
                    0.0
                }
            }
            PotentialSpec::PoschlTeller { v, mu } => {
                let c = (mu * r).cosh();
                -v * mu * mu / (c * c)
            }
            PotentialSpec::Gaussian { v, mu } => {
                let x = mu * r;
                -v * mu * mu * (-x * x).exp()
            }
            PotentialSpec::LennardJones { c12, c6 } => {
                let inv2 = 1.0 / (r * r);
                let inv6 = inv2 * inv2 * inv2;
                0.5 * (c12 * inv6 - c6) * inv6
            }
            PotentialSpec::Tabulated { r: ref rs, ref v } => interpolate(rs, v, r),
        }
    }

    /// Potential used while integrating the interior problem.
    ///
    /// Identical to [`PotentialSpec::value`] except for the well, whose
    /// interior constant is continued through `R` and the ghost point `R + Δr`
    /// so the recursion never straddles the step.
    #[inline]
    pub(crate) fn interior_value(&self, r: f64) -> f64 {
        match *self {
            PotentialSpec::SphericalWell { v, mu } => -v * mu * mu,
            _ => self.value(r),
        }
    }

    /// Zero crossing `(C12/C6)^{1/6}` of the Lennard-Jones potential.
    pub fn lj_zero_crossing(&self) -> Option<f64> {
        match *self {
            PotentialSpec::LennardJones { c12, c6 } if c6 > 0.0 => Some((c12 / c6).powf(1.0 / 6.0)),
            _ => None,
        }
    }

    /// Position `(2 C12/C6)^{1/6}` of the Lennard-Jones minimum.
    pub fn lj_minimum(&self) -> Option<f64> {
        match *self {
            PotentialSpec::LennardJones { c12, c6 } if c6 > 0.0 => {
                Some((2.0 * c12 / c6).powf(1.0 / 6.0))
            }
            _ => None,
        }
    }
}

fn interpolate(rs: &[f64], vs: &[f64], r: f64) -> f64 {
    let last = rs.len() - 1;
    if r > rs[last] {
        return 0.0;
    }
    if r <= rs[0] {
        return vs[0];
    }
    // first index with rs[idx] >= r; idx >= 1 here
    let idx = rs.partition_point(|&x| x < r);
    let (r0, r1) = (rs[idx - 1], rs[idx]);
    let t = (r - r0) / (r1 - r0);
    vs[idx - 1] + t * (vs[idx] - vs[idx - 1])
}

/// Thresholds controlling [`derive_range`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeOptions {
    pub epsilon_tail: f64,
    pub core_threshold: f64,
    pub max_radius: f64,
}

impl Default for RangeOptions {
    fn default() -> Self {
        RangeOptions {
            epsilon_tail: DEFAULT_EPSILON_TAIL,
            core_threshold: DEFAULT_CORE_THRESHOLD,
            max_radius: DEFAULT_MAX_RADIUS,
        }
    }
}

/// Numerical extent of a potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeInfo {
    /// Matching radius `R`; the potential is negligible beyond it.
    pub range: f64,
    /// Inner cutoff; the wave function is set to zero below it.
    pub r_min: f64,
    pub epsilon_tail: f64,
    pub core_threshold: f64,
}

impl RangeInfo {
    /// A range with no inner cutoff, for hand-built tests and tabulated data.
    pub fn new(range: f64) -> Result<Self> {
        if !(range > 0.0 && range.is_finite()) {
            return Err(Error::InvalidArgument(format!("range must be positive, got {range}")));
        }
        Ok(RangeInfo {
            range,
            r_min: 0.0,
            epsilon_tail: DEFAULT_EPSILON_TAIL,
            core_threshold: DEFAULT_CORE_THRESHOLD,
        })
    }
}

/// Finds the range `R` (and for Lennard-Jones the core cutoff `r_min`).
///
/// The well uses `R = 1/μ` exactly and tabulated data uses its last sample.
/// The other families walk outwards on a grid of spacing
/// [`RANGE_SEARCH_STEP`] and take the first point where `|V̄| <= ε_tail`
/// that is followed by [`TAIL_CHECK_POINTS`] more negligible samples spread
/// out to twice the candidate radius.
pub fn derive_range(spec: &PotentialSpec, opts: &RangeOptions) -> Result<RangeInfo> {
    if !(opts.epsilon_tail > 0.0 && opts.core_threshold > 0.0 && opts.max_radius > 0.0) {
        return Err(Error::InvalidArgument("range thresholds must be positive".into()));
    }
    spec.validate()?;
    let info = |range: f64, r_min: f64| RangeInfo {
        range,
        r_min,
        epsilon_tail: opts.epsilon_tail,
        core_threshold: opts.core_threshold,
    };
    match spec {
        PotentialSpec::SphericalWell { mu, .. } => Ok(info(1.0 / mu, 0.0)),
        PotentialSpec::Tabulated { r, .. } => {
            let last = *r.last().expect("validated");
            if last <= 0.0 {
                return Err(Error::InvalidArgument("tabulated potential needs a positive last radius".into()));
            }
            Ok(info(last, 0.0))
        }
        PotentialSpec::PoschlTeller { .. } | PotentialSpec::Gaussian { .. } => {
            Ok(info(tail_search(spec, 0.0, opts)?, 0.0))
        }
        PotentialSpec::LennardJones { .. } => {
            let r_min = lj_core_radius(spec, opts.core_threshold)?;
            let start = spec.lj_minimum().unwrap_or(r_min).max(r_min);
            let range = tail_search(spec, start, opts)?;
            Ok(info(range, r_min))
        }
    }
}

fn tail_search(spec: &PotentialSpec, start: f64, opts: &RangeOptions) -> Result<f64> {
    let h = RANGE_SEARCH_STEP;
    let negligible = |r: f64| spec.value(r).abs() <= opts.epsilon_tail;
    let first = (start / h).floor() as usize + 1;
    let last = (opts.max_radius / h).floor() as usize;
    for j in first..=last {
        let r = j as f64 * h;
        if !negligible(r) {
            continue;
        }
        let spacing = (r / TAIL_CHECK_POINTS as f64).max(h);
        if (1..=TAIL_CHECK_POINTS).all(|m| negligible(r + m as f64 * spacing)) {
            return Ok(r);
        }
    }
    Err(Error::RangeNotFound {
        max_radius: opts.max_radius,
        epsilon_tail: opts.epsilon_tail,
    })
}

/// Largest radius on the repulsive branch where `V̄ >= threshold`, by bisection.
fn lj_core_radius(spec: &PotentialSpec, threshold: f64) -> Result<f64> {
    let mut hi = spec.lj_zero_crossing().unwrap_or(1.0);
    // for a purely repulsive core move `hi` out until V̄ drops below threshold
    while spec.value(hi) >= threshold {
        hi *= 2.0;
    }
    let mut lo = hi;
    while spec.value(lo) < threshold {
        lo *= 0.5;
        if lo < 1e-100 {
            return Err(Error::Domain("could not bracket the Lennard-Jones core".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if spec.value(mid) >= threshold {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn well_values() {
        let w = PotentialSpec::spherical_well(1.2337, 1.0).unwrap();
        assert_eq!(w.evaluate(0.5).unwrap(), -1.2337);
        assert_eq!(w.evaluate(1.0).unwrap(), 0.0);
        assert_eq!(w.evaluate(3.0).unwrap(), 0.0);
    }

    #[test]
    fn origin_values() {
        let p = PotentialSpec::poschl_teller(0.7, 1.3).unwrap();
        assert_eq!(p.evaluate(0.0).unwrap(), -0.7 * 1.3 * 1.3);
        let g = PotentialSpec::gaussian(0.7, 1.3).unwrap();
        assert_eq!(g.evaluate(0.0).unwrap(), -0.7 * 1.3 * 1.3);
    }

    #[test]
    fn lj_origin_is_domain_error() {
        let lj = PotentialSpec::lennard_jones(0.904_853_19, 6.814_72).unwrap();
        assert!(matches!(lj.evaluate(0.0), Err(Error::Domain(_))));
        assert!(matches!(lj.evaluate(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn lj_zero_crossing_matches_sign_change() {
        let lj = PotentialSpec::lennard_jones(0.904_853_19, 6.814_72).unwrap();
        let sigma = lj.lj_zero_crossing().unwrap();
        assert!(lj.evaluate(sigma).unwrap().abs() < 1e-12);
        assert!(lj.evaluate(sigma * (1.0 - 1e-6)).unwrap() > 0.0);
        assert!(lj.evaluate(sigma * (1.0 + 1e-6)).unwrap() < 0.0);
        // the minimum sits at 2^{1/6} sigma, with depth C6²/(8 C12)
        let rm = lj.lj_minimum().unwrap();
        assert!((rm / sigma - 2f64.powf(1.0 / 6.0)).abs() < 1e-12);
        let depth = 6.814_72f64.powi(2) / (8.0 * 0.904_853_19);
        assert!((lj.evaluate(rm).unwrap() + depth).abs() < 1e-9 * depth);
    }

    #[test]
    fn invalid_parameters() {
        assert!(PotentialSpec::spherical_well(-1.0, 1.0).is_err());
        assert!(PotentialSpec::gaussian(1.0, 0.0).is_err());
        assert!(PotentialSpec::lennard_jones(0.0, 1.0).is_err());
        assert!(PotentialSpec::lennard_jones(1.0, -1.0).is_err());
        assert!(PotentialSpec::tabulated(vec![0.0, 1.0], vec![0.0]).is_err());
        assert!(PotentialSpec::tabulated(vec![0.0, 0.0], vec![0.0, 0.0]).is_err());
        assert!(PotentialSpec::tabulated(vec![0.0, 1.0], vec![0.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn tabulated_interpolation() {
        let t = PotentialSpec::tabulated(vec![0.0, 1.0, 2.0], vec![-2.0, -1.0, 0.0]).unwrap();
        assert_eq!(t.evaluate(0.5).unwrap(), -1.5);
        assert_eq!(t.evaluate(1.0).unwrap(), -1.0);
        assert_eq!(t.evaluate(2.5).unwrap(), 0.0);
        let range = derive_range(&t, &RangeOptions::default()).unwrap();
        assert_eq!(range.range, 2.0);
    }

    #[test]
    fn well_range_is_exact() {
        let w = PotentialSpec::spherical_well(1.1096, 0.3918).unwrap();
        let r = derive_range(&w, &RangeOptions::default()).unwrap();
        assert_eq!(r.range, 1.0 / 0.3918);
        assert_eq!(r.r_min, 0.0);
    }

    #[test]
    fn mpt_range_matches_closed_form_inversion() {
        let (v, mu, eps) = (1.0, 2.0, 1e-15);
        let p = PotentialSpec::poschl_teller(v, mu).unwrap();
        let r = derive_range(&p, &RangeOptions::default()).unwrap();
        // v μ² / cosh²(μR) = ε  =>  R = arccosh(sqrt(v μ² / ε)) / μ
        let exact = (v * mu * mu / eps).sqrt().acosh() / mu;
        assert!(r.range >= exact && r.range < exact + RANGE_SEARCH_STEP + 1e-12, "{} vs {exact}", r.range);
        assert!(p.evaluate(r.range).unwrap().abs() <= eps);
    }

    #[test]
    fn gaussian_range_matches_closed_form_inversion() {
        let (v, mu, eps) = (1.9102, 0.6754, 1e-15);
        let g = PotentialSpec::gaussian(v, mu).unwrap();
        let r = derive_range(&g, &RangeOptions::default()).unwrap();
        let exact = (v * mu * mu / eps).ln().sqrt() / mu;
        assert!(r.range >= exact && r.range < exact + RANGE_SEARCH_STEP + 1e-12);
    }

    #[test]
    fn lj_core_radius_against_quadratic_root() {
        let (c12, c6, t) = (0.000_340_68, 0.264_624_61, 1e10);
        let lj = PotentialSpec::lennard_jones(c12, c6).unwrap();
        let info = derive_range(&lj, &RangeOptions::default()).unwrap();
        // C12 x² - C6 x - 2T = 0 with x = r^{-6}
        let x = (c6 + (c6 * c6 + 8.0 * c12 * t).sqrt()) / (2.0 * c12);
        let exact = x.powf(-1.0 / 6.0);
        assert!((info.r_min - exact).abs() < 1e-12 * exact);
        let v = lj.evaluate(info.r_min).unwrap();
        assert!((1e10..=1e11).contains(&v), "{v}");
        assert!(info.r_min < info.range);
        // tail: C6 / R⁶ ≈ 1e-15
        assert!(lj.evaluate(info.range).unwrap().abs() <= 1e-15);
    }

    #[test]
    fn range_search_limit() {
        let g = PotentialSpec::gaussian(1.0, 1e-3).unwrap();
        let err = derive_range(&g, &RangeOptions::default()).unwrap_err();
        assert!(matches!(err, Error::RangeNotFound { .. }));
    }

    #[test]
    fn derive_range_is_idempotent() {
        let p = PotentialSpec::gaussian(1.342, 1.4349).unwrap();
        let a = derive_range(&p, &RangeOptions::default()).unwrap();
        let b = derive_range(&p, &RangeOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn json_round_trip() {
        let g: PotentialSpec = serde_json::from_str(r#"{"family":"gaussian","v":1.3420,"mu":1.4349}"#).unwrap();
        assert_eq!(g, PotentialSpec::Gaussian { v: 1.342, mu: 1.4349 });
        let lj: PotentialSpec =
            serde_json::from_str(r#"{"family":"lennard-jones","c12":0.00034068,"c6":0.26462461}"#).unwrap();
        assert_eq!(lj.family(), Family::LennardJones);
        let t: PotentialSpec = serde_json::from_str(r#"{"family":"tabulated","r":[0,1],"v":[0,0]}"#).unwrap();
        assert_eq!(t.family(), Family::Tabulated);
        let back: PotentialSpec = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn mpt_lambda_conversion() {
        assert_eq!(mpt_lambda(1.0), 2.0);
        let l = mpt_lambda(0.9071);
        assert!((mpt_depth(l) - 0.9071).abs() < 1e-14);
        assert!(l > 1.0);
    }

    proptest::proptest! {
        #[test]
        fn attractive_families_non_positive(v in 0.0f64..20.0, mu in 0.05f64..5.0, r in 0.0f64..50.0) {
            for spec in [
                PotentialSpec::spherical_well(v, mu).unwrap(),
                PotentialSpec::poschl_teller(v, mu).unwrap(),
                PotentialSpec::gaussian(v, mu).unwrap(),
            ] {
                proptest::prop_assert!(spec.evaluate(r).unwrap() <= 0.0);
            }
        }

        #[test]
        fn smooth_attractive_families_increase(v in 0.01f64..20.0, mu in 0.05f64..5.0, r in 0.0f64..20.0, dr in 1e-3f64..1.0) {
            for spec in [
                PotentialSpec::poschl_teller(v, mu).unwrap(),
                PotentialSpec::gaussian(v, mu).unwrap(),
            ] {
                proptest::prop_assert!(spec.evaluate(r).unwrap() <= spec.evaluate(r + dr).unwrap());
            }
        }
    }
}
