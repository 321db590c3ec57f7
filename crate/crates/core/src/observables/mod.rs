//! Low-energy observables extracted from radial solutions.
//!
//! At zero energy the outside solution is the straight line `g(r) = 1 - r/a`,
//! so matching value and slope at `R` gives the scattering length
//! `a = R - u(R)/u'(R)`. Rescaling `u` so that `u(R) = g(R)` then gives the
//! effective range as `r0 = 2 ∫₀ᴿ [g² - u²] dr`.

mod bound;
mod phase;
mod quadrature;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

pub use bound::{bound_state_energies, BoundStateEstimate, KAPPA_SERIES_BELOW};
pub use phase::{kcot_expansion, phase_shift, phase_shift_grid, unwrap_branches, PhaseShiftResult};
pub use quadrature::{simpson, trapezoid, QuadratureRule};

use crate::error::{Error, Result};
use crate::potentials::{derive_range, PotentialSpec, RangeInfo, RangeOptions};
use crate::solver::{integrate, probe, MatchingData, Method, RadialSolution, SolverConfig};
use crate::units::UnitScale;

/// `|a| > UNITARY_FACTOR · R` is reported as unitary.
pub const UNITARY_FACTOR: f64 = 1e4;

/// `|a| <= ZERO_FACTOR · R` is reported as exactly zero.
pub const ZERO_FACTOR: f64 = 1e-9;

/// A scattering length, or the marker for `|a| → ∞`.
///
/// Close to unitarity the computed `a` is huge and its sign is not reliable,
/// so values beyond [`UNITARY_FACTOR`]` · R` are kept only as a flag (with
/// the raw number for diagnostics). In JSON a finite value is a number and
/// the unitary case is `"unitary+"` or `"unitary-"` after the raw sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScatteringLength {
    Finite(f64),
    Unitary { raw: f64 },
}

impl ScatteringLength {
    /// Classifies a raw value against the matching radius.
    pub fn classify(raw: f64, range: f64) -> Self {
        if raw.abs() > UNITARY_FACTOR * range || raw.is_infinite() {
            ScatteringLength::Unitary { raw }
        } else if raw.abs() <= ZERO_FACTOR * range {
            ScatteringLength::Finite(0.0)
        } else {
            ScatteringLength::Finite(raw)
        }
    }

    pub fn is_unitary(&self) -> bool {
        matches!(self, ScatteringLength::Unitary { .. })
    }

    /// The finite value, if any.
    pub fn finite(&self) -> Option<f64> {
        match *self {
            ScatteringLength::Finite(a) => Some(a),
            ScatteringLength::Unitary { .. } => None,
        }
    }

    /// The number as computed, also for the unitary case.
    pub fn raw(&self) -> f64 {
        match *self {
            ScatteringLength::Finite(a) => a,
            ScatteringLength::Unitary { raw } => raw,
        }
    }

    /// `1/a`, taken as zero at unitarity.
    pub fn inverse(&self) -> f64 {
        match *self {
            ScatteringLength::Finite(a) => 1.0 / a,
            ScatteringLength::Unitary { .. } => 0.0,
        }
    }

    /// Multiplies by a length scale.
    pub fn scaled(&self, s: f64) -> Self {
        match *self {
            ScatteringLength::Finite(a) => ScatteringLength::Finite(a * s),
            ScatteringLength::Unitary { raw } => ScatteringLength::Unitary { raw: raw * s },
        }
    }
}

impl Serialize for ScatteringLength {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            ScatteringLength::Finite(a) => s.serialize_f64(a),
            ScatteringLength::Unitary { raw } if raw < 0.0 => s.serialize_str("unitary-"),
            ScatteringLength::Unitary { .. } => s.serialize_str("unitary+"),
        }
    }
}

impl<'de> Deserialize<'de> for ScatteringLength {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Number(a) => Ok(ScatteringLength::Finite(a)),
            Repr::Text(t) => match t.as_str() {
                "unitary+" | "unitary" => Ok(ScatteringLength::Unitary { raw: f64::INFINITY }),
                "unitary-" => Ok(ScatteringLength::Unitary { raw: f64::NEG_INFINITY }),
                other => Err(de::Error::custom(format!("invalid scattering length '{other}'"))),
            },
        }
    }
}

/// Scattering length from the samples around `R` of a zero-energy s-wave run.
///
/// Fails only if both `u(R)` and `u'(R)` vanish.
pub fn scattering_length_raw(m: &MatchingData) -> Result<f64> {
    if m.l != 0 || m.k != 0.0 {
        return Err(Error::InvalidArgument(
            "scattering length needs a zero-energy s-wave solution".into(),
        ));
    }
    let slope = m.derivative();
    if slope == 0.0 && m.u[1] == 0.0 {
        return Err(Error::DegenerateDerivative);
    }
    // a flat, non-zero u at R is unitarity resolved to double precision;
    // the division then yields ±∞
    Ok(m.range - m.u[1] / slope)
}

/// Scattering length of a zero-energy s-wave solution.
pub fn scattering_length(sol: &RadialSolution) -> Result<ScatteringLength> {
    let raw = scattering_length_raw(&sol.matching())?;
    Ok(ScatteringLength::classify(raw, sol.range()))
}

/// Rescales `u` so that `u(R) = g(R) = 1 - R/a` (or `1` at unitarity).
pub fn normalize(sol: &RadialSolution, a: &ScatteringLength) -> Result<RadialSolution> {
    let g_range = match *a {
        ScatteringLength::Finite(a) if a == 0.0 => return Err(Error::EffectiveRangeUndefined),
        ScatteringLength::Finite(a) => 1.0 - sol.range() / a,
        ScatteringLength::Unitary { .. } => 1.0,
    };
    let u_range = sol.u_values()[sol.range_index()];
    if u_range == 0.0 {
        return Err(Error::MatchingSingular);
    }
    Ok(sol.scaled(g_range / u_range, true))
}

/// `r0 = 2 ∫₀ᴿ [g² - u²] dr` for a normalized solution.
///
/// The grid part runs from the start of integration to `R`; below a hard-core
/// cutoff `u` vanishes and `2 ∫ g²` is added in closed form.
pub fn effective_range(sol: &RadialSolution, a: &ScatteringLength, rule: QuadratureRule) -> Result<f64> {
    if !sol.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let inv_a = match *a {
        ScatteringLength::Finite(a) if a == 0.0 => return Err(Error::EffectiveRangeUndefined),
        other => other.inverse(),
    };
    let dr = sol.dr();
    let start = sol.start_index();
    let end = sol.range_index();
    let u = sol.u_values();
    let integrand: Vec<f64> = (start..=end)
        .map(|i| {
            let g = 1.0 - i as f64 * dr * inv_a;
            2.0 * (g * g - u[i] * u[i])
        })
        .collect();
    let x = start as f64 * dr;
    // 2 ∫₀ˣ (1 - r/a)² dr
    let core = 2.0 * (x - x * x * inv_a + x * x * x * inv_a * inv_a / 3.0);
    Ok(core + rule.integrate(&integrand, dr))
}

/// Settings for the zero-energy pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct ComputeOptions {
    pub solver: SolverConfig,
    pub rule: QuadratureRule,
    pub range: RangeOptions,
}

impl ComputeOptions {
    pub fn new(solver: SolverConfig, rule: QuadratureRule) -> Self {
        ComputeOptions {
            solver,
            rule,
            range: RangeOptions::default(),
        }
    }

    pub fn with_dr(dr: f64, method: Method) -> Self {
        ComputeOptions::new(SolverConfig { dr, method }, QuadratureRule::Simpson)
    }
}

/// Scattering length, effective range and run metadata.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringObservables {
    pub a: ScatteringLength,
    /// `None` when `a = 0`.
    pub r0: Option<f64>,
    #[serde(rename = "nodes")]
    pub node_count: usize,
    pub dr: f64,
    pub method: Method,
    pub rule: QuadratureRule,
}

impl ScatteringObservables {
    /// Converts lengths (`a`, `r0`, `dr`) to the physical units of `scale`.
    pub fn in_units(&self, scale: &UnitScale) -> Self {
        let s = scale.length_scale();
        ScatteringObservables {
            a: self.a.scaled(s),
            r0: self.r0.map(|r| r * s),
            dr: self.dr * s,
            ..*self
        }
    }
}

/// Runs the full zero-energy pipeline and also returns the solution,
/// normalized when `a ≠ 0`.
pub fn compute_with_solution(
    spec: &PotentialSpec,
    range: &RangeInfo,
    opts: &ComputeOptions,
) -> Result<(ScatteringObservables, RadialSolution)> {
    let sol = integrate(spec, range, 0, 0.0, &opts.solver)?;
    let a = scattering_length(&sol)?;
    let rule = opts.rule;
    let base = ScatteringObservables {
        a,
        r0: None,
        node_count: sol.node_count(),
        dr: sol.dr(),
        method: opts.solver.method,
        rule,
    };
    if a == ScatteringLength::Finite(0.0) {
        return Ok((base, sol));
    }
    let normalized = normalize(&sol, &a)?;
    let r0 = effective_range(&normalized, &a, rule)?;
    Ok((ScatteringObservables { r0: Some(r0), ..base }, normalized))
}

/// Derives the range and computes `(a, r0)` for a potential.
///
/// ```
/// use lescat::observables::{compute, ComputeOptions};
/// use lescat::potentials::PotentialSpec;
///
/// let spec = PotentialSpec::spherical_well(1.7575, 0.5).unwrap();
/// let obs = compute(&spec, &ComputeOptions::default()).unwrap();
/// assert!((obs.a.raw() - 5.4).abs() < 0.02);
/// assert!((obs.r0.unwrap() - 1.70).abs() < 0.02);
/// assert_eq!(obs.node_count, 1);
/// ```
pub fn compute(spec: &PotentialSpec, opts: &ComputeOptions) -> Result<ScatteringObservables> {
    let range = derive_range(spec, &opts.range)?;
    Ok(compute_with_solution(spec, &range, opts)?.0)
}

/// Scattering length and node count without storing the wave function.
pub fn scattering_length_only(
    spec: &PotentialSpec,
    range: &RangeInfo,
    config: &SolverConfig,
) -> Result<(ScatteringLength, usize)> {
    let m = probe(spec, range, 0, 0.0, config)?;
    let raw = scattering_length_raw(&m)?;
    Ok((ScatteringLength::classify(raw, range.range), m.node_count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic;

    fn zeros() -> (PotentialSpec, RangeInfo) {
        let spec = PotentialSpec::tabulated(vec![0.0, 2.0], vec![0.0, 0.0]).unwrap();
        let range = derive_range(&spec, &RangeOptions::default()).unwrap();
        (spec, range)
    }

    #[test]
    fn free_particle_has_zero_length() {
        let (spec, range) = zeros();
        let (obs, _) = compute_with_solution(&spec, &range, &ComputeOptions::default()).unwrap();
        assert_eq!(obs.a, ScatteringLength::Finite(0.0));
        assert_eq!(obs.r0, None);
        let json = serde_json::to_value(obs).unwrap();
        assert_eq!(json["a"], 0.0);
        assert!(json["r0"].is_null());
    }

    #[test]
    fn normalization_at_zero_length_fails() {
        let (spec, range) = zeros();
        let sol = integrate(&spec, &range, 0, 0.0, &SolverConfig::default()).unwrap();
        assert_eq!(
            normalize(&sol, &ScatteringLength::Finite(0.0)),
            Err(Error::EffectiveRangeUndefined)
        );
    }

    #[test]
    fn effective_range_needs_normalized_input() {
        let spec = PotentialSpec::spherical_well(1.0, 1.0).unwrap();
        let range = derive_range(&spec, &RangeOptions::default()).unwrap();
        let sol = integrate(&spec, &range, 0, 0.0, &SolverConfig::default()).unwrap();
        let a = scattering_length(&sol).unwrap();
        assert_eq!(effective_range(&sol, &a, QuadratureRule::Simpson), Err(Error::NotNormalized));
    }

    #[test]
    fn normalizing_twice_is_identity() {
        let spec = PotentialSpec::gaussian(0.5, 1.0).unwrap();
        let range = derive_range(&spec, &RangeOptions::default()).unwrap();
        let sol = integrate(&spec, &range, 0, 0.0, &SolverConfig::default()).unwrap();
        let a = scattering_length(&sol).unwrap();
        let n1 = normalize(&sol, &a).unwrap();
        let n2 = normalize(&n1, &a).unwrap();
        for (x, y) in n1.u_values().iter().zip(n2.u_values()) {
            assert!((x - y).abs() <= 2.0 * f64::EPSILON * x.abs());
        }
    }

    #[test]
    fn well_deuteron_normalization() {
        let spec = PotentialSpec::spherical_well(1.7575, 0.5).unwrap();
        let range = derive_range(&spec, &RangeOptions::default()).unwrap();
        let (obs, sol) = compute_with_solution(&spec, &range, &ComputeOptions::default()).unwrap();
        let a = obs.a.raw();
        let u_range = sol.u_values()[sol.range_index()];
        assert!((u_range - (1.0 - 2.0 / a)).abs() < 1e-14);
        // interior: u = (1 - R/a) sin(k0 r)/sin(k0 R)
        let k0 = (2.0 * 1.7575f64).sqrt() / 2.0;
        let scale = (1.0 - 2.0 / a) / (k0 * 2.0).sin();
        for (r, u) in sol.r_values().iter().zip(sol.u_values()).step_by(1000).take(20) {
            assert!((u - scale * (k0 * r).sin()).abs() < 1e-9, "r = {r}");
        }
    }

    #[test]
    fn seed_invariance() {
        let spec = PotentialSpec::poschl_teller(1.4388, 0.8631).unwrap();
        let range = derive_range(&spec, &RangeOptions::default()).unwrap();
        let cfg = SolverConfig::default();
        let a1 = scattering_length(&crate::solver::integrate_with_seed(&spec, &range, 0, 0.0, &cfg, 1.0).unwrap()).unwrap();
        let a2 = scattering_length(&crate::solver::integrate_with_seed(&spec, &range, 0, 0.0, &cfg, 2.0).unwrap()).unwrap();
        assert!((a1.raw() - a2.raw()).abs() <= 4.0 * f64::EPSILON * a1.raw().abs());
    }

    #[test]
    fn well_matches_closed_form() {
        for v0 in [0.3, 2.0] {
            let spec = PotentialSpec::spherical_well(v0, 1.0).unwrap();
            let obs = compute(&spec, &ComputeOptions::default()).unwrap();
            let a = analytic::well_scattering_length(v0, 1.0).unwrap();
            let r0 = analytic::well_effective_range(v0, 1.0).unwrap();
            assert!((obs.a.raw() - a).abs() < 1e-5, "{v0}: {} vs {a}", obs.a.raw());
            assert!((obs.r0.unwrap() - r0).abs() < 1e-5, "{v0}: {:?} vs {r0}", obs.r0);
        }
    }

    #[test]
    fn unitary_sentinel_round_trip() {
        let u = ScatteringLength::classify(-3e5, 1.0);
        assert!(u.is_unitary());
        assert_eq!(u.inverse(), 0.0);
        assert_eq!(serde_json::to_string(&u).unwrap(), "\"unitary-\"");
        let back: ScatteringLength = serde_json::from_str("\"unitary+\"").unwrap();
        assert!(back.is_unitary() && back.raw() > 0.0);
        let f: ScatteringLength = serde_json::from_str("5.4").unwrap();
        assert_eq!(f, ScatteringLength::Finite(5.4));
        assert!(serde_json::from_str::<ScatteringLength>("\"huge\"").is_err());
    }

    #[test]
    fn unit_conversion_scales_lengths() {
        let obs = ScatteringObservables {
            a: ScatteringLength::Finite(2.0),
            r0: Some(1.0),
            node_count: 0,
            dr: 1e-4,
            method: Method::Numerov,
            rule: QuadratureRule::Simpson,
        };
        let scale = UnitScale::new(3.0, crate::units::LengthUnit::Femtometre, 469.0).unwrap();
        let p = obs.in_units(&scale);
        assert_eq!(p.a, ScatteringLength::Finite(6.0));
        assert_eq!(p.r0, Some(3.0));
    }

    #[test]
    fn quadrature_rules_agree_on_table_rows() {
        for spec in [
            PotentialSpec::spherical_well(1.1096, 0.3918).unwrap(),
            PotentialSpec::poschl_teller(0.9071, 0.7991).unwrap(),
            PotentialSpec::gaussian(1.9102, 0.6754).unwrap(),
        ] {
            let s = compute(&spec, &ComputeOptions::new(SolverConfig::default(), QuadratureRule::Simpson)).unwrap();
            let t = compute(&spec, &ComputeOptions::new(SolverConfig::default(), QuadratureRule::Trapezoid)).unwrap();
            assert!((s.r0.unwrap() - t.r0.unwrap()).abs() <= 1e-4);
        }
    }

    #[test]
    fn methods_agree_within_truncation() {
        for spec in [
            PotentialSpec::spherical_well(1.7575, 0.5).unwrap(),
            PotentialSpec::gaussian(1.2121, 0.5672).unwrap(),
        ] {
            let n = compute(&spec, &ComputeOptions::with_dr(1e-4, Method::Numerov)).unwrap();
            let c = compute(&spec, &ComputeOptions::with_dr(1e-4, Method::Central)).unwrap();
            let a = n.a.raw();
            assert!((a - c.a.raw()).abs() <= 10.0 * 1e-8 * a.abs());
        }
    }

    #[test]
    fn probe_agrees_with_full_run() {
        let spec = PotentialSpec::gaussian(1.9102, 0.6754).unwrap();
        let range = derive_range(&spec, &RangeOptions::default()).unwrap();
        let (obs, _) = compute_with_solution(&spec, &range, &ComputeOptions::default()).unwrap();
        let (a, nodes) = scattering_length_only(&spec, &range, &SolverConfig::default()).unwrap();
        assert_eq!(a, obs.a);
        assert_eq!(nodes, obs.node_count);
    }

    proptest::proptest! {
        #![proptest_config(proptest::test_runner::Config::with_cases(24))]

        /// r0 computed equals the quadrature of 2[g² − u²] with u(R) = g(R).
        #[test]
        fn r0_is_the_defining_integral(v in 0.2f64..1.1, mu in 0.5f64..2.0) {
            let spec = PotentialSpec::gaussian(v, mu).unwrap();
            let range = derive_range(&spec, &RangeOptions::default()).unwrap();
            let opts = ComputeOptions::with_dr(2e-3, Method::Numerov);
            let (obs, sol) = compute_with_solution(&spec, &range, &opts).unwrap();
            let a = obs.a.raw();
            let n = sol.range_index();
            proptest::prop_assert!((sol.u_values()[n] - (1.0 - range.range / a)).abs() < 1e-12);
            let f: Vec<f64> = sol.r_values()[..=n].iter().zip(sol.u_values())
                .map(|(r, u)| { let g = 1.0 - r / a; 2.0 * (g * g - u * u) })
                .collect();
            let direct = simpson(&f, sol.dr());
            proptest::prop_assert!((direct - obs.r0.unwrap()).abs() < 1e-12 * direct.abs().max(1.0));
        }

        /// Pure length rescaling: halving μ doubles r0 and a.
        #[test]
        fn mu_scaling(v in 0.2f64..1.1, mu in 0.6f64..1.5) {
            let opts = ComputeOptions::with_dr(1e-3, Method::Numerov);
            let a1 = compute(&PotentialSpec::poschl_teller(v, mu).unwrap(), &opts).unwrap();
            let a2 = compute(&PotentialSpec::poschl_teller(v, mu / 2.0).unwrap(), &opts).unwrap();
            let ratio = a2.r0.unwrap() / a1.r0.unwrap();
            proptest::prop_assert!((ratio - 2.0).abs() < 0.02, "{}", ratio);
        }
    }
}
