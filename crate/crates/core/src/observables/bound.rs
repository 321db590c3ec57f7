use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::UnitScale;

/// Below this `|r0/a|` the `κ` root is taken from its two-term expansion.
pub const KAPPA_SERIES_BELOW: f64 = 1e-8;

/// Shallow bound-state estimates from `(a, r0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundStateEstimate {
    /// Binding momentum from `1/a = κ - r0 κ²/2`, in inverse scale lengths.
    pub kappa: f64,
    /// Zero-range energy `-ħ²/(2 m_r a²)`, in the scale's energy unit.
    pub e_zr: f64,
    /// Finite-range energy `-ħ² κ² / (2 m_r)`.
    pub e_fr: f64,
}

/// Zero- and finite-range bound-state energies.
///
/// `a` and `r0` are in units of the scale's length. The finite-range
/// momentum is the root `κ = (1 - √(1 - 2 r0/a)) / r0` that tends to `1/a`
/// as `r0 → 0`.
///
/// ```
/// use lescat::observables::bound_state_energies;
/// use lescat::units::{LengthUnit, MassPreset, UnitScale};
///
/// let m = MassPreset::ProtonNeutron.reduced_mass_c2();
/// let fm = UnitScale::new(1.0, LengthUnit::Femtometre, m).unwrap();
/// let e = bound_state_energies(5.4112, 1.7436, &fm).unwrap();
/// assert!((e.e_zr + 1.416).abs() < 0.002);
/// assert!((e.e_fr + 2.223).abs() < 0.002);
/// ```
pub fn bound_state_energies(a: f64, r0: f64, scale: &UnitScale) -> Result<BoundStateEstimate> {
    if !(a.is_finite() && r0.is_finite()) {
        return Err(Error::InvalidArgument("a and r0 must be finite".into()));
    }
    if a <= 0.0 {
        return Err(Error::NoBoundState { a });
    }
    let ratio = 2.0 * r0 / a;
    if ratio >= 1.0 {
        return Err(Error::FiniteRangeInvalid { ratio });
    }
    let kappa = if (r0 / a).abs() < KAPPA_SERIES_BELOW {
        1.0 / a + r0 / (2.0 * a * a)
    } else {
        // (1 - √(1 - 2r0/a)) / r0 without the cancellation
        2.0 / (a * (1.0 + (1.0 - ratio).sqrt()))
    };
    let eps = scale.energy_scale();
    Ok(BoundStateEstimate {
        kappa,
        e_zr: -eps / (2.0 * a * a),
        e_fr: -eps * kappa * kappa / 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{mev_to_millikelvin, LengthUnit, MassPreset};

    #[test]
    fn zero_range_limit() {
        let s = UnitScale::dimensionless();
        let e = bound_state_energies(3.0, 0.0, &s).unwrap();
        assert_eq!(e.e_fr, e.e_zr);
        assert_eq!(e.kappa, 1.0 / 3.0);
    }

    #[test]
    fn series_branch_is_continuous() {
        let s = UnitScale::dimensionless();
        for r0 in [0.999e-8, 1e-9, -5e-9] {
            let series = bound_state_energies(1.0, r0, &s).unwrap().kappa;
            let closed = (1.0 - (1.0 - 2.0 * r0 as f64).sqrt()) / r0;
            // the closed form itself is only good to ~ε/r0 here
            assert!((series - closed).abs() < 1e-7, "{r0}");
            let stable = 2.0 / (1.0 + (1.0 - 2.0 * r0 as f64).sqrt());
            assert!((series - stable).abs() < 1e-15, "{r0}");
        }
    }

    #[test]
    fn kappa_solves_the_expansion() {
        let s = UnitScale::dimensionless();
        for (a, r0) in [(5.4, 1.7), (90.4, 8.0), (10.0, -2.0)] {
            let k = bound_state_energies(a, r0, &s).unwrap().kappa;
            assert!((1.0 / a - (k - 0.5 * r0 * k * k)).abs() < 1e-14);
            assert!(k > 0.0);
        }
    }

    #[test]
    fn helium_dimer() {
        let m = MassPreset::Helium4Dimer.reduced_mass_c2();
        let s = UnitScale::new(1.0, LengthUnit::Angstrom, m).unwrap();
        let e = bound_state_energies(90.4, 8.0, &s).unwrap();
        assert!((mev_to_millikelvin(e.e_zr) + 1.48).abs() < 0.02);
        assert!((mev_to_millikelvin(e.e_fr) + 1.63).abs() < 0.02);
    }

    #[test]
    fn errors() {
        let s = UnitScale::dimensionless();
        assert_eq!(bound_state_energies(-1.0, 1.0, &s), Err(Error::NoBoundState { a: -1.0 }));
        assert!(matches!(bound_state_energies(2.0, 1.0, &s), Err(Error::FiniteRangeInvalid { .. })));
        assert!(bound_state_energies(f64::NAN, 1.0, &s).is_err());
    }

    proptest::proptest! {
        #[test]
        fn energies_negative(a in 0.1f64..1e3, frac in -2.0f64..0.49) {
            let r0 = frac * a;
            let e = bound_state_energies(a, r0, &UnitScale::dimensionless()).unwrap();
            proptest::prop_assert!(e.e_zr < 0.0 && e.e_fr < 0.0 && e.kappa > 0.0);
        }
    }
}
