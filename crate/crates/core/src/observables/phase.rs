use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ScatteringLength;
use crate::analytic::sph_bessel_all;
use crate::error::{Error, Result};
use crate::potentials::{PotentialSpec, RangeInfo};
use crate::solver::{probe, MatchingData, SolverConfig};

/// `cot δ` is reported as infinite when `|denominator| <= this · |numerator|`,
/// i.e. `|δ|` below the integrator's resolution.
const COT_INFINITE_BELOW: f64 = 1e-10;

/// Phase shift of one partial wave at one wave number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseShiftResult {
    pub l: u32,
    pub k: f64,
    /// Logarithmic derivative `R u'(R) / u(R)`.
    pub beta: f64,
    /// `None` when `cot δ` is infinite (`δ` a multiple of π).
    pub cot_delta: Option<f64>,
    /// Radians, principal branch `(-π/2, π/2]`.
    pub delta: f64,
    /// `k cot δ`.
    pub kcot: Option<f64>,
}

/// Phase shift from matching `u` at `R` to `kr [j_l cos δ - n_l sin δ]`:
///
/// `cot δ_l = [kR n_l'(kR) - (β-1) n_l(kR)] / [kR j_l'(kR) - (β-1) j_l(kR)]`.
///
/// If `u(R)` happens to vanish the integration is repeated with the matching
/// point moved out by one step (not possible for the square well, whose edge
/// is fixed).
pub fn phase_shift(
    spec: &PotentialSpec,
    range: &RangeInfo,
    l: u32,
    k: f64,
    config: &SolverConfig,
) -> Result<PhaseShiftResult> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!("k must be positive, got {k}")));
    }
    let m = probe(spec, range, l, k, config)?;
    if m.u[1] != 0.0 {
        return from_matching(&m);
    }
    if matches!(spec, PotentialSpec::SphericalWell { .. }) {
        return Err(Error::LogDerivativeUndefined);
    }
    let moved = RangeInfo {
        range: range.range + m.dr,
        ..*range
    };
    let cfg = SolverConfig { dr: m.dr, ..*config };
    let m = probe(spec, &moved, l, k, &cfg)?;
    if m.u[1] == 0.0 {
        return Err(Error::LogDerivativeUndefined);
    }
    from_matching(&m)
}

/// [`phase_shift`] over a grid of wave numbers, evaluated in parallel and
/// returned in grid order.
pub fn phase_shift_grid(
    spec: &PotentialSpec,
    range: &RangeInfo,
    l: u32,
    ks: &[f64],
    config: &SolverConfig,
) -> Vec<Result<PhaseShiftResult>> {
    ks.par_iter().map(|&k| phase_shift(spec, range, l, k, config)).collect()
}

fn from_matching(m: &MatchingData) -> Result<PhaseShiftResult> {
    let beta = m.range * m.derivative() / m.u[1];
    let x = m.k * m.range;
    let [j, jd, n, nd] = sph_bessel_all(m.l, x)?;
    let num = x * nd - (beta - 1.0) * n;
    let den = x * jd - (beta - 1.0) * j;
    let (cot_delta, delta) = if den.abs() <= COT_INFINITE_BELOW * num.abs() {
        (None, 0.0)
    } else if num == 0.0 {
        (Some(0.0), FRAC_PI_2)
    } else {
        let d = (den / num).atan();
        (Some(num / den), if d == -FRAC_PI_2 { FRAC_PI_2 } else { d })
    };
    Ok(PhaseShiftResult {
        l: m.l,
        k: m.k,
        beta,
        cot_delta,
        delta,
        kcot: cot_delta.map(|c| m.k * c),
    })
}

/// Shifts each `δ` by a multiple of π so the sequence has no jumps larger
/// than π/2, starting from the first value's branch.
pub fn unwrap_branches(deltas: &mut [f64]) {
    for i in 1..deltas.len() {
        let prev = deltas[i - 1];
        let jumps = ((deltas[i] - prev) / PI).round();
        deltas[i] -= jumps * PI;
    }
}

/// Effective-range expansion `k cot δ0 ≈ -1/a + r0 k²/2`.
pub fn kcot_expansion(a: &ScatteringLength, r0: f64, k: f64) -> f64 {
    -a.inverse() + 0.5 * r0 * k * k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::well_phase_shift;
    use crate::observables::{compute, ComputeOptions};
    use crate::potentials::{derive_range, RangeOptions};

    fn setup(spec: PotentialSpec) -> (PotentialSpec, RangeInfo) {
        let range = derive_range(&spec, &RangeOptions::default()).unwrap();
        (spec, range)
    }

    #[test]
    fn free_particle_has_infinite_cot() {
        let (spec, range) = setup(PotentialSpec::tabulated(vec![0.0, 3.0], vec![0.0, 0.0]).unwrap());
        for l in 0..3 {
            let p = phase_shift(&spec, &range, l, 0.7, &SolverConfig::default()).unwrap();
            assert_eq!(p.cot_delta, None, "l = {l}");
            assert_eq!(p.delta, 0.0);
        }
    }

    #[test]
    fn well_matches_closed_form() {
        let (v, mu) = (1.7575, 0.5);
        let (spec, range) = setup(PotentialSpec::spherical_well(v, mu).unwrap());
        for k in [0.01, 0.1, 0.4] {
            let p = phase_shift(&spec, &range, 0, k, &SolverConfig::default()).unwrap();
            let want = well_phase_shift(v, 1.0 / mu, k).unwrap();
            let diff = (p.delta - want) - ((p.delta - want) / PI).round() * PI;
            assert!(diff.abs() < 1e-6, "k = {k}: {} vs {want}", p.delta);
        }
    }

    #[test]
    fn small_k_limit_is_minus_ka() {
        for spec in [
            PotentialSpec::gaussian(1.9102, 0.6754).unwrap(),
            PotentialSpec::poschl_teller(0.9071, 0.7991).unwrap(),
        ] {
            let (spec, range) = setup(spec);
            let a = compute(&spec, &ComputeOptions::default()).unwrap().a.raw();
            let k = 0.01 / a.abs();
            let p = phase_shift(&spec, &range, 0, k, &SolverConfig::default()).unwrap();
            let ratio = p.delta / (-k * a);
            assert!((0.99..=1.01).contains(&ratio), "{ratio}");
        }
    }

    #[test]
    fn sign_conventions() {
        // attractive, no bound state: δ0 > 0
        let (spec, range) = setup(PotentialSpec::gaussian(0.5, 1.0).unwrap());
        assert!(phase_shift(&spec, &range, 0, 0.1, &SolverConfig::default()).unwrap().delta > 0.0);
        // purely repulsive core: δ0 < 0
        let (spec, range) = setup(PotentialSpec::lennard_jones(0.000_340_68, 0.0).unwrap());
        let p = phase_shift(&spec, &range, 0, 0.5, &SolverConfig { dr: 1e-3, ..Default::default() }).unwrap();
        assert!(p.delta < 0.0, "{}", p.delta);
    }

    #[test]
    fn higher_waves_of_weak_well_match_born_sign() {
        let (spec, range) = setup(PotentialSpec::gaussian(0.3, 1.0).unwrap());
        for l in 1..=3 {
            let p = phase_shift(&spec, &range, l, 1.0, &SolverConfig::default()).unwrap();
            assert!(p.delta > 0.0 && p.delta < 0.5, "l = {l}: {}", p.delta);
        }
    }

    #[test]
    fn expansion_values() {
        let a = ScatteringLength::Finite(5.4);
        assert_eq!(kcot_expansion(&a, 1.7, 0.0), -1.0 / 5.4);
        let unitary = ScatteringLength::Unitary { raw: 1e9 };
        assert!((kcot_expansion(&unitary, 1.0, 0.3) - 0.045).abs() < 1e-15);
        let v = kcot_expansion(&a, 1.7, 0.1);
        assert!((v + 0.176_685_185).abs() < 1e-8, "{v}");
    }

    #[test]
    fn unwrap_removes_jumps() {
        let mut d = vec![1.4, 1.55, -1.5, -1.3, 1.7 - PI];
        unwrap_branches(&mut d);
        for w in d.windows(2) {
            assert!((w[1] - w[0]).abs() < FRAC_PI_2);
        }
        assert!((d[2] - (PI - 1.5)).abs() < 1e-15);
    }

    #[test]
    fn grid_keeps_order() {
        let (spec, range) = setup(PotentialSpec::gaussian(1.0, 1.0).unwrap());
        let ks = [0.3, 0.1, -1.0, 0.2];
        let out = phase_shift_grid(&spec, &range, 0, &ks, &SolverConfig::default());
        assert!(out[2].is_err());
        for (k, p) in ks.iter().zip(&out) {
            if let Ok(p) = p {
                assert_eq!(p.k, *k);
            }
        }
    }

    #[test]
    fn rejects_non_positive_k() {
        let (spec, range) = setup(PotentialSpec::gaussian(1.0, 1.0).unwrap());
        assert!(phase_shift(&spec, &range, 0, 0.0, &SolverConfig::default()).is_err());
    }
}
