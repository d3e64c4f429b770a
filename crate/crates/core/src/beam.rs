//! Nonrelativistic electron beam kinematics.

use serde::{Deserialize, Serialize};

use crate::constants::{ELECTRON_MASS, HBAR, PLANCK};
use crate::error::{Error, Result};
use crate::units;

/// A monoenergetic electron beam, optionally with an energy spread.
///
/// All derived quantities are fixed at construction:
/// `v0 = √(2E/m)`, `λ = h/(m v0)`, `k = m v0/ħ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElectronBeam {
    kinetic_energy: f64,
    speed: f64,
    debroglie_wavelength: f64,
    wavevector: f64,
    energy_spread: Option<f64>,
}

impl ElectronBeam {
    /// Beam of kinetic energy `energy` (J) and optional spread `energy_spread` (J).
    pub fn from_energy(energy: f64, energy_spread: Option<f64>) -> Result<Self> {
        if !(energy.is_finite() && energy > 0.0) {
            return Err(Error::domain(format!(
                "kinetic energy must be positive and finite, got {energy} J"
            )));
        }
        if let Some(spread) = energy_spread {
            if !(spread.is_finite() && spread > 0.0) {
                return Err(Error::domain(format!(
                    "energy spread must be positive and finite, got {spread} J"
                )));
            }
        }
        let speed = (2.0 * energy / ELECTRON_MASS).sqrt();
        Ok(Self::with_speed(energy, speed, energy_spread))
    }

    pub fn from_energy_kev(kev: f64, spread_ev: Option<f64>) -> Result<Self> {
        Self::from_energy(
            units::kev_to_joules(kev),
            spread_ev.map(units::ev_to_joules),
        )
    }

    /// Beam moving at `speed` (m/s).
    pub fn from_speed(speed: f64) -> Result<Self> {
        if !(speed.is_finite() && speed > 0.0) {
            return Err(Error::domain(format!(
                "speed must be positive and finite, got {speed} m/s"
            )));
        }
        let energy = 0.5 * ELECTRON_MASS * speed * speed;
        Ok(Self::with_speed(energy, speed, None))
    }

    /// Beam with wavevector `k` (1/m).
    pub fn from_wavevector(k: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::domain(format!(
                "wavevector must be positive and finite, got {k} 1/m"
            )));
        }
        Self::from_speed(HBAR * k / ELECTRON_MASS)
    }

    fn with_speed(kinetic_energy: f64, speed: f64, energy_spread: Option<f64>) -> Self {
        let momentum = ELECTRON_MASS * speed;
        Self {
            kinetic_energy,
            speed,
            debroglie_wavelength: PLANCK / momentum,
            wavevector: momentum / HBAR,
            energy_spread,
        }
    }

    /// J
    pub fn kinetic_energy(&self) -> f64 {
        self.kinetic_energy
    }

    /// Unperturbed speed v0 (m/s).
    pub fn speed(&self) -> f64 {
        self.speed
    }

    /// m
    pub fn debroglie_wavelength(&self) -> f64 {
        self.debroglie_wavelength
    }

    /// 1/m
    pub fn wavevector(&self) -> f64 {
        self.wavevector
    }

    /// J
    pub fn energy_spread(&self) -> Option<f64> {
        self.energy_spread
    }

    /// Momentum m·v0 (kg·m/s).
    pub fn momentum(&self) -> f64 {
        ELECTRON_MASS * self.speed
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn chambers_wavelength() {
        let beam = ElectronBeam::from_energy_kev(20.0, None).unwrap();
        let pm = units::m_to_pm(beam.debroglie_wavelength());
        // Table value 8.7 pm at two significant figures
        assert!((pm - 8.7).abs() < 0.05, "{pm}");
    }

    #[test]
    fn proposed_wavelength_and_speed() {
        let beam = ElectronBeam::from_energy_kev(1.0, None).unwrap();
        let pm = units::m_to_pm(beam.debroglie_wavelength());
        assert!((pm - 39.0).abs() < 0.5, "{pm}");
        // √(2 × 1.602176634e-16 J / 9.1093837015e-31 kg)
        assert!(
            (beam.speed() / 1.875_52e7 - 1.0).abs() < 1e-5,
            "{}",
            beam.speed()
        );
    }

    #[test]
    fn rejects_nonpositive_energy() {
        assert!(matches!(
            ElectronBeam::from_energy(0.0, None),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            ElectronBeam::from_energy(-1.0, None),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            ElectronBeam::from_energy(f64::NAN, None),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            ElectronBeam::from_energy(1e-16, Some(0.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn wavevector_constructor_agrees() {
        let a = ElectronBeam::from_energy_kev(40.0, None).unwrap();
        let b = ElectronBeam::from_wavevector(a.wavevector()).unwrap();
        assert!((b.speed() / a.speed() - 1.0).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn wave_relations(kev in 1e-3f64..1e3) {
            let beam = ElectronBeam::from_energy_kev(kev, None).unwrap();
            let k_lambda = beam.wavevector() * beam.debroglie_wavelength();
            prop_assert!((k_lambda / (2.0 * PI) - 1.0).abs() < 1e-12);
            let hbar_k = HBAR * beam.wavevector();
            prop_assert!((hbar_k / (ELECTRON_MASS * beam.speed()) - 1.0).abs() < 1e-12);
        }
    }
}
