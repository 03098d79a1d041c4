//! Unit systems.
//!
//! All numerics run in natural units where ħ = c = m_e = e = 1. In those units
//! the zitter frequency of an electron is ω₀ = 2 and the zitter radius is
//! r₀ = 1/2. SI values only appear when converting at I/O boundaries.

use serde::{Deserialize, Serialize};

/// Tag carried by four-vectors so that mixed-unit arithmetic is caught.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Natural,
    Si,
}

/// Physical dimension of a quantity, used to pick a conversion scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Time,
    Velocity,
    Mass,
    Momentum,
    Energy,
    Charge,
    AngularMomentum,
    Frequency,
    ElectricField,
    MagneticField,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub hbar: f64,
    pub c: f64,
    pub m_e: f64,
    pub e: f64,
}

impl UnitSystem {
    pub const fn natural() -> Self {
        Self { hbar: 1.0, c: 1.0, m_e: 1.0, e: 1.0 }
    }

    /// CODATA 2018 exact/recommended values.
    pub const fn si() -> Self {
        Self { hbar: 1.054_571_817e-34, c: 299_792_458.0, m_e: 9.109_383_701_5e-31, e: 1.602_176_634e-19 }
    }

    pub fn for_units(units: Units) -> Self {
        match units {
            Units::Natural => Self::natural(),
            Units::Si => Self::si(),
        }
    }

    /// ω₀ = 2mc²/ħ for a particle of mass `m` (in this system's mass unit).
    pub fn zitter_frequency(&self, m: f64) -> f64 {
        2.0 * m * self.c * self.c / self.hbar
    }

    /// r₀ = ħ/(2mc) = c/ω₀.
    pub fn zitter_radius(&self, m: f64) -> f64 {
        self.hbar / (2.0 * m * self.c)
    }

    /// Size of one natural unit of `dim` expressed in this system.
    pub fn scale(&self, dim: Dimension) -> f64 {
        let (h, c, m, e) = (self.hbar, self.c, self.m_e, self.e);
        match dim {
            Dimension::Length => h / (m * c),
            Dimension::Time => h / (m * c * c),
            Dimension::Velocity => c,
            Dimension::Mass => m,
            Dimension::Momentum => m * c,
            Dimension::Energy => m * c * c,
            Dimension::Charge => e,
            Dimension::AngularMomentum => h,
            Dimension::Frequency => m * c * c / h,
            Dimension::ElectricField => m * m * c * c * c / (e * h),
            Dimension::MagneticField => m * m * c * c / (e * h),
        }
    }

    pub fn to_natural(&self, value: f64, dim: Dimension) -> f64 {
        value / self.scale(dim)
    }

    pub fn from_natural(&self, value: f64, dim: Dimension) -> f64 {
        value * self.scale(dim)
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::natural()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_zitter_scales() {
        let u = UnitSystem::natural();
        assert_eq!(u.zitter_frequency(1.0), 2.0);
        assert_eq!(u.zitter_radius(1.0), 0.5);
    }

    #[test]
    fn si_zitter_scales_match_reported_values() {
        let u = UnitSystem::si();
        let w0 = u.zitter_frequency(u.m_e);
        let r0 = u.zitter_radius(u.m_e);
        assert!((w0 / 1.55e21 - 1.0).abs() < 5e-3, "w0 = {w0}");
        assert!((r0 / 1.93e-13 - 1.0).abs() < 5e-3, "r0 = {r0}");
        // ω₀ r₀ = c
        assert!((w0 * r0 / u.c - 1.0).abs() < 1e-14);
    }

    #[test]
    fn natural_to_si_round_trip() {
        let si = UnitSystem::si();
        for dim in [
            Dimension::Length,
            Dimension::Time,
            Dimension::Momentum,
            Dimension::MagneticField,
            Dimension::ElectricField,
        ] {
            let x = 0.731;
            let back = si.to_natural(si.from_natural(x, dim), dim);
            assert!((back / x - 1.0).abs() < 1e-12, "{dim:?}");
        }
    }

    #[test]
    fn critical_fields() {
        let si = UnitSystem::si();
        let b = si.scale(Dimension::MagneticField);
        let e = si.scale(Dimension::ElectricField);
        assert!((b / 4.414e9 - 1.0).abs() < 1e-3, "B_c = {b}");
        assert!((e / 1.323e18 - 1.0).abs() < 1e-3, "E_c = {e}");
    }
}
