//! Dimensionless working scheme and conversion back to physical units.
//!
//! All solver work happens with lengths measured in units of a chosen scale
//! `ℓ` and energies in units of `ε = ħ² / (m_r ℓ²)`, so the radial equation
//! reads `-½ u'' + V̄ u = 0`. A [`UnitScale`] records `ℓ`, the reduced mass and
//! the derived `ε`, and converts results at the API boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants used for unit conversion (CODATA 2018).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// ħc in MeV·fm.
    pub hbar_c: f64,
    /// Proton rest energy in MeV.
    pub proton_mass_c2: f64,
    /// Neutron rest energy in MeV.
    pub neutron_mass_c2: f64,
    /// Rest energy of a neutral ⁴He atom in MeV.
    pub helium4_mass_c2: f64,
    /// Boltzmann constant in MeV/K.
    pub boltzmann_mev_per_k: f64,
}

/// CODATA 2018 recommended values.
///
/// The ⁴He entry is the *atomic* mass, 4.001506179127 u (alpha particle,
/// 3727.3794066 MeV) plus two electrons (2 × 0.51099895 MeV) less the 79.0 eV
/// total electronic binding energy. Using the bare alpha mass instead shifts
/// the dimer energies by 0.03 %.
pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    hbar_c: 197.326_980_4,
    proton_mass_c2: 938.272_088_16,
    neutron_mass_c2: 939.565_420_52,
    helium4_mass_c2: 3727.379_406_6 + 2.0 * 0.510_998_95 - 79.005e-6,
    boltzmann_mev_per_k: 8.617_333_262e-11,
};

/// Femtometres per ångström.
pub const FM_PER_ANGSTROM: f64 = 1.0e5;

/// Length unit attached to a [`UnitScale`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LengthUnit {
    #[serde(alias = "fm")]
    Femtometre,
    #[serde(alias = "a", alias = "Å")]
    Angstrom,
    Dimensionless,
}

impl LengthUnit {
    /// Parses the unit names accepted on the command line.
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "fm" | "femtometre" => Ok(LengthUnit::Femtometre),
            "angstrom" | "a" | "Å" => Ok(LengthUnit::Angstrom),
            "dimensionless" => Ok(LengthUnit::Dimensionless),
            other => Err(Error::InvalidArgument(format!(
                "unknown length unit '{other}' (expected fm, angstrom or dimensionless)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LengthUnit::Femtometre => "fm",
            LengthUnit::Angstrom => "angstrom",
            LengthUnit::Dimensionless => "dimensionless",
        }
    }

    fn in_femtometres(self) -> f64 {
        match self {
            LengthUnit::Femtometre => 1.0,
            LengthUnit::Angstrom => FM_PER_ANGSTROM,
            LengthUnit::Dimensionless => 1.0,
        }
    }
}

/// Reduced-mass presets, in MeV/c².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MassPreset {
    /// Two neutrons.
    NeutronNeutron,
    /// Proton and neutron (deuteron channel).
    ProtonNeutron,
    /// Two ⁴He atoms.
    #[serde(rename = "he4-dimer")]
    Helium4Dimer,
}

impl MassPreset {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "nn" => Ok(MassPreset::NeutronNeutron),
            "np" | "pn" => Ok(MassPreset::ProtonNeutron),
            "he4-dimer" => Ok(MassPreset::Helium4Dimer),
            other => Err(Error::InvalidArgument(format!(
                "unknown mass preset '{other}' (expected nn, np or he4-dimer)"
            ))),
        }
    }

    /// Reduced rest energy `m_r c²` in MeV.
    pub fn reduced_mass_c2(self) -> f64 {
        let c = CODATA_2018;
        match self {
            MassPreset::NeutronNeutron => reduced_mass(c.neutron_mass_c2, c.neutron_mass_c2),
            MassPreset::ProtonNeutron => reduced_mass(c.proton_mass_c2, c.neutron_mass_c2),
            MassPreset::Helium4Dimer => reduced_mass(c.helium4_mass_c2, c.helium4_mass_c2),
        }
    }
}

/// `m1 m2 / (m1 + m2)`.
pub fn reduced_mass(m1: f64, m2: f64) -> f64 {
    m1 * m2 / (m1 + m2)
}

/// Length and energy scales of the dimensionless scheme.
///
/// For physical scales the energy unit is MeV and lengths are expressed in
/// the scale's [`LengthUnit`]. The dimensionless scale has `ħ = m_r = ℓ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitScale {
    length_scale: f64,
    unit: LengthUnit,
    reduced_mass: f64,
    energy_scale: f64,
}

impl UnitScale {
    /// Builds a physical scale from `ℓ` (in `unit`) and `m_r c²` (MeV).
    ///
    /// With [`LengthUnit::Dimensionless`] the mass is a pure number and
    /// `ħ = 1`, so `ε = 1 / (m_r ℓ²)`.
    pub fn new(length_scale: f64, unit: LengthUnit, reduced_mass: f64) -> Result<Self> {
        if !(length_scale > 0.0 && length_scale.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "length scale must be positive, got {length_scale}"
            )));
        }
        if !(reduced_mass > 0.0 && reduced_mass.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "reduced mass must be positive, got {reduced_mass}"
            )));
        }
        let hbar_sq = match unit {
            LengthUnit::Dimensionless => 1.0,
            _ => CODATA_2018.hbar_c * CODATA_2018.hbar_c,
        };
        let ell_fm = length_scale * unit.in_femtometres();
        let energy_scale = hbar_sq / (reduced_mass * ell_fm * ell_fm);
        Ok(UnitScale {
            length_scale,
            unit,
            reduced_mass,
            energy_scale,
        })
    }

    /// The identity scale: `ħ = m_r = ℓ = 1`.
    pub fn dimensionless() -> Self {
        UnitScale {
            length_scale: 1.0,
            unit: LengthUnit::Dimensionless,
            reduced_mass: 1.0,
            energy_scale: 1.0,
        }
    }

    pub fn length_scale(&self) -> f64 {
        self.length_scale
    }

    pub fn unit(&self) -> LengthUnit {
        self.unit
    }

    pub fn reduced_mass(&self) -> f64 {
        self.reduced_mass
    }

    /// `ε = ħ² / (m_r ℓ²)`, in MeV for physical scales.
    pub fn energy_scale(&self) -> f64 {
        self.energy_scale
    }

    pub fn to_physical_length(&self, x: f64) -> f64 {
        x * self.length_scale
    }

    pub fn to_dimensionless_length(&self, x: f64) -> f64 {
        x / self.length_scale
    }

    pub fn to_physical_energy(&self, e: f64) -> f64 {
        e * self.energy_scale
    }

    pub fn to_dimensionless_energy(&self, e: f64) -> f64 {
        e / self.energy_scale
    }
}

/// Converts an energy in MeV to millikelvin.
pub fn mev_to_millikelvin(e_mev: f64) -> f64 {
    e_mev / CODATA_2018.boltzmann_mev_per_k * 1.0e3
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_positive() {
        let c = CODATA_2018;
        for v in [
            c.hbar_c,
            c.proton_mass_c2,
            c.neutron_mass_c2,
            c.helium4_mass_c2,
            c.boltzmann_mev_per_k,
        ] {
            assert!(v > 0.0);
        }
        // atomic mass 4.002603254 u × 931.49410242 MeV/u
        assert!((c.helium4_mass_c2 - 4.002_603_254 * 931.494_102_42).abs() < 1e-3);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(UnitScale::new(0.0, LengthUnit::Femtometre, 1.0).is_err());
        assert!(UnitScale::new(1.0, LengthUnit::Femtometre, -1.0).is_err());
        assert!(UnitScale::new(f64::NAN, LengthUnit::Femtometre, 1.0).is_err());
    }

    #[test]
    fn identity_scale() {
        let s = UnitScale::new(1.0, LengthUnit::Dimensionless, 1.0).unwrap();
        assert_eq!(s.energy_scale(), 1.0);
        assert_eq!(s, UnitScale::dimensionless());
        assert_eq!(s.to_physical_length(0.0), 0.0);
    }

    #[test]
    fn deuteron_energy_scale() {
        let m_r = MassPreset::ProtonNeutron.reduced_mass_c2();
        let s = UnitScale::new(1.0, LengthUnit::Femtometre, m_r).unwrap();
        let expected = 197.326_980_4_f64.powi(2) / m_r;
        assert!((s.energy_scale() - expected).abs() <= 1e-12 * expected);
        assert_eq!(s.to_physical_length(5.4), 5.4);
        // zero-range deuteron energy, -ε / (2 a²) with a = 5.4112 fm
        let e = s.to_physical_energy(-0.5 / (5.4112 * 5.4112));
        assert!((e + 1.416).abs() < 0.002, "{e}");
    }

    #[test]
    fn energy_scale_quarters_when_length_doubles() {
        let m = MassPreset::Helium4Dimer.reduced_mass_c2();
        let a = UnitScale::new(1.0, LengthUnit::Angstrom, m).unwrap();
        let b = UnitScale::new(2.0, LengthUnit::Angstrom, m).unwrap();
        let ratio = a.energy_scale() / b.energy_scale();
        assert!((ratio - 4.0).abs() <= 4.0 * f64::EPSILON * 4.0);
    }

    #[test]
    fn parse_names() {
        assert_eq!(LengthUnit::parse("fm").unwrap(), LengthUnit::Femtometre);
        assert_eq!(LengthUnit::parse("angstrom").unwrap(), LengthUnit::Angstrom);
        assert!(LengthUnit::parse("parsec").is_err());
        assert_eq!(MassPreset::parse("he4-dimer").unwrap(), MassPreset::Helium4Dimer);
        assert!(MassPreset::parse("pp").is_err());
    }

    proptest::proptest! {
        #[test]
        fn length_round_trip(x in -1e6f64..1e6, ell in 1e-3f64..1e3) {
            let s = UnitScale::new(ell, LengthUnit::Femtometre, 469.0).unwrap();
            let back = s.to_dimensionless_length(s.to_physical_length(x));
            proptest::prop_assert!((back - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE));
        }
    }
}
