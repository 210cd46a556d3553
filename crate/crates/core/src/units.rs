//! Unit conventions and the constants every formula in the crate is written against.
//!
//! Two systems are supported. [`UnitSystem::Natural`] pins `hbar = c = 1`;
//! [`UnitSystem::Si`] carries whatever values the caller supplies (the CODATA
//! values are provided as [`PhysicalConstants::si`]).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s (exact).
pub const C_SI: f64 = 299_792_458.0;
/// Electron rest mass, kg (CODATA 2018).
pub const ELECTRON_MASS_SI: f64 = 9.109_383_701_5e-31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitSystem {
    Natural,
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    hbar: f64,
    c: f64,
    unit_system: UnitSystem,
}

impl PhysicalConstants {
    /// Builds validated constants. In natural units the numeric arguments are
    /// ignored and `hbar = c = 1` exactly.
    pub fn new(unit_system: UnitSystem, hbar: f64, c: f64) -> Result<Self> {
        match unit_system {
            UnitSystem::Natural => Ok(Self::natural()),
            UnitSystem::Si => {
                if !(hbar.is_finite() && hbar > 0.0) {
                    return Err(Error::validation(format!("hbar must be positive, got {hbar}")));
                }
                if !(c.is_finite() && c > 0.0) {
                    return Err(Error::validation(format!("c must be positive, got {c}")));
                }
                Ok(Self { hbar, c, unit_system })
            }
        }
    }

    pub const fn natural() -> Self {
        Self { hbar: 1.0, c: 1.0, unit_system: UnitSystem::Natural }
    }

    pub const fn si() -> Self {
        Self { hbar: HBAR_SI, c: C_SI, unit_system: UnitSystem::Si }
    }

    #[inline]
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    #[inline]
    pub fn c(&self) -> f64 {
        self.c
    }

    #[inline]
    pub fn unit_system(&self) -> UnitSystem {
        self.unit_system
    }

    /// Lorentz factor for a coordinate speed; errors at or above `c`.
    pub fn lorentz_factor(&self, speed: f64) -> Result<f64> {
        let beta2 = (speed / self.c).powi(2);
        if !beta2.is_finite() || beta2 >= 1.0 {
            return Err(Error::Kinematics(format!(
                "speed {speed} is not below c = {}",
                self.c
            )));
        }
        Ok(1.0 / (1.0 - beta2).sqrt())
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::natural()
    }
}

/// Rest mass paired with the conserved spatial wavenumber `rho = m c / hbar`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassWavenumber {
    mass: f64,
    rho: f64,
}

impl MassWavenumber {
    pub fn from_wavenumber(rho: f64, k: &PhysicalConstants) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::validation(format!("wavenumber must be positive, got {rho}")));
        }
        Ok(Self { mass: rho * k.hbar() / k.c(), rho })
    }

    pub fn from_mass(mass: f64, k: &PhysicalConstants) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::validation(format!("mass must be positive, got {mass}")));
        }
        Ok(Self { mass, rho: mass * k.c() / k.hbar() })
    }

    #[inline]
    pub fn mass(&self) -> f64 {
        self.mass
    }

    #[inline]
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Rest energy `m c^2`.
    pub fn rest_energy(&self, k: &PhysicalConstants) -> f64 {
        self.mass * k.c() * k.c()
    }
}

/// Action `S` together with the observation phase `Y = -S / hbar`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionPhase {
    pub action: f64,
    pub phase: f64,
}

impl ActionPhase {
    pub fn from_action(action: f64, k: &PhysicalConstants) -> Self {
        Self { action, phase: -action / k.hbar() }
    }

    pub fn zero() -> Self {
        Self { action: 0.0, phase: 0.0 }
    }
}

pub fn make_constants(unit_system: UnitSystem, hbar: f64, c: f64) -> Result<PhysicalConstants> {
    PhysicalConstants::new(unit_system, hbar, c)
}

/// `m = rho hbar / c`.
pub fn mass_from_wavenumber(rho: f64, k: &PhysicalConstants) -> Result<MassWavenumber> {
    MassWavenumber::from_wavenumber(rho, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_units_ignore_arguments() {
        let k = make_constants(UnitSystem::Natural, 7.0, -3.0).unwrap();
        assert_eq!(k.hbar(), 1.0);
        assert_eq!(k.c(), 1.0);
        assert_eq!(k.unit_system(), UnitSystem::Natural);
    }

    #[test]
    fn si_constants_pass_through() {
        let k = make_constants(UnitSystem::Si, 1.0546e-34, 2.9979e8).unwrap();
        assert_eq!(k.hbar(), 1.0546e-34);
        assert_eq!(k.c(), 2.9979e8);
    }

    #[test]
    fn si_rejects_non_positive() {
        assert!(matches!(
            make_constants(UnitSystem::Si, -1.0, 3e8),
            Err(Error::Validation(_))
        ));
        assert!(make_constants(UnitSystem::Si, 1.0, 0.0).is_err());
        assert!(make_constants(UnitSystem::Si, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn mass_from_wavenumber_natural() {
        let k = PhysicalConstants::natural();
        assert_eq!(mass_from_wavenumber(1.0, &k).unwrap().mass(), 1.0);
        assert_eq!(mass_from_wavenumber(2.0, &k).unwrap().mass(), 2.0);
        assert!(mass_from_wavenumber(0.0, &k).is_err());
        assert!(mass_from_wavenumber(-1.0, &k).is_err());
    }

    #[test]
    fn electron_round_trip_si() {
        let k = PhysicalConstants::si();
        let rho = ELECTRON_MASS_SI * C_SI / HBAR_SI;
        let mw = mass_from_wavenumber(rho, &k).unwrap();
        assert!((mw.mass() - ELECTRON_MASS_SI).abs() / ELECTRON_MASS_SI < 1e-12);
    }

    #[test]
    fn action_phase_sign() {
        let k = PhysicalConstants::si();
        let ap = ActionPhase::from_action(2.0 * HBAR_SI, &k);
        assert!((ap.phase + 2.0).abs() < 1e-12);
    }

    #[test]
    fn lorentz_factor_rejects_luminal() {
        let k = PhysicalConstants::natural();
        assert!((k.lorentz_factor(0.6).unwrap() - 1.25).abs() < 1e-15);
        assert!(matches!(k.lorentz_factor(1.0), Err(Error::Kinematics(_))));
    }

    proptest::proptest! {
        #[test]
        fn wavenumber_round_trip(rho in 1e-3f64..1e6) {
            for k in [PhysicalConstants::natural(), PhysicalConstants::si()] {
                let mw = mass_from_wavenumber(rho, &k).unwrap();
                let back = mw.mass() * k.c() / k.hbar();
                proptest::prop_assert!((back - rho).abs() <= 1e-12 * rho);
                let again = MassWavenumber::from_mass(mw.mass(), &k).unwrap();
                proptest::prop_assert!((again.rho() - rho).abs() <= 1e-12 * rho);
            }
        }
    }
}
