//! Long solenoid treated as a line flux.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::MU_0;
use crate::error::{Error, Result};
use crate::units;

/// Magnetic flux in webers. Nonnegative and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MagneticFlux(f64);

impl MagneticFlux {
    pub const ZERO: MagneticFlux = MagneticFlux(0.0);

    pub fn from_webers(webers: f64) -> Result<Self> {
        if !(webers.is_finite() && webers >= 0.0) {
            return Err(Error::domain(format!(
                "magnetic flux must be nonnegative and finite, got {webers} Wb"
            )));
        }
        Ok(MagneticFlux(webers))
    }

    pub fn from_gauss_cm2(gauss_cm2: f64) -> Result<Self> {
        Self::from_webers(units::flux_from_gauss_cm2(gauss_cm2))
    }

    pub fn webers(self) -> f64 {
        self.0
    }

    pub fn gauss_cm2(self) -> f64 {
        units::flux_to_gauss_cm2(self.0)
    }

    pub fn scaled(self, factor: f64) -> Result<Self> {
        Self::from_webers(self.0 * factor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Solenoid {
    radius: f64,
    winding_density: f64,
    current: f64,
    relative_permeability: f64,
}

impl Solenoid {
    /// `radius` in m, `winding_density` in turns/m, `current` in A.
    ///
    /// A zero winding density or zero current is accepted and gives zero field.
    pub fn new(
        radius: f64,
        winding_density: f64,
        current: f64,
        relative_permeability: f64,
    ) -> Result<Self> {
        let finite = [radius, winding_density, current, relative_permeability]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::domain("solenoid parameters must be finite"));
        }
        if radius <= 0.0 {
            return Err(Error::domain(format!(
                "radius must be positive, got {radius} m"
            )));
        }
        if winding_density < 0.0 {
            return Err(Error::domain(format!(
                "winding density must be nonnegative, got {winding_density} 1/m"
            )));
        }
        if current < 0.0 {
            return Err(Error::domain(format!(
                "current must be nonnegative, got {current} A"
            )));
        }
        if relative_permeability < 1.0 {
            return Err(Error::domain(format!(
                "relative permeability must be >= 1, got {relative_permeability}"
            )));
        }
        Ok(Self {
            radius,
            winding_density,
            current,
            relative_permeability,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn winding_density(&self) -> f64 {
        self.winding_density
    }

    pub fn current(&self) -> f64 {
        self.current
    }

    pub fn relative_permeability(&self) -> f64 {
        self.relative_permeability
    }

    /// Same geometry, different current.
    pub fn with_current(&self, current: f64) -> Result<Self> {
        Self::new(
            self.radius,
            self.winding_density,
            current,
            self.relative_permeability,
        )
    }

    /// Same geometry, different core.
    pub fn with_relative_permeability(&self, mu_r: f64) -> Result<Self> {
        Self::new(self.radius, self.winding_density, self.current, mu_r)
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    /// Interior field B = μr μ0 n I (T).
    pub fn field(&self) -> f64 {
        self.relative_permeability * MU_0 * self.winding_density * self.current
    }

    /// Enclosed flux Φ = B A.
    pub fn flux(&self) -> MagneticFlux {
        MagneticFlux(self.field() * self.area())
    }
}

pub fn solenoid_field(solenoid: &Solenoid) -> f64 {
    solenoid.field()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn no_windings_no_field() {
        let s = Solenoid::new(1.25e-3, 0.0, 7.0, 1.0).unwrap();
        assert_eq!(s.field(), 0.0);
        assert_eq!(s.flux(), MagneticFlux::ZERO);
    }

    #[test]
    fn iron_core_ratio() {
        let air = Solenoid::new(1.25e-3, 3000.0, 0.5, 1.0).unwrap();
        let iron = air.with_relative_permeability(150.0).unwrap();
        assert_eq!(iron.field() / air.field(), 150.0);
    }

    #[test]
    fn gold_wire_solenoid_field() {
        // 12 µm wire pitch, 0.1 A, no core
        let s = Solenoid::new(25e-6, 8.33e4, 0.1, 1.0).unwrap();
        let expected = 1.256_637_062_12e-6 * 8.33e4 * 0.1;
        assert_eq!(s.field(), expected);
        assert!((s.field() - 1.05e-2).abs() < 0.01e-2);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Solenoid::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(Solenoid::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(Solenoid::new(1.0, 1.0, -1.0, 1.0).is_err());
        assert!(Solenoid::new(1.0, 1.0, 1.0, 0.5).is_err());
        assert!(Solenoid::new(1.0, 1.0, f64::INFINITY, 1.0).is_err());
        assert!(MagneticFlux::from_webers(-1.0).is_err());
    }

    #[test]
    fn flux_unit_identity() {
        let f = MagneticFlux::from_gauss_cm2(1.7e-4).unwrap();
        assert_eq!(f.webers(), 1.7e-4 * 1e-8);
        assert!((f.gauss_cm2() / 1.7e-4 - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn field_is_linear_in_each_parameter(
            n in 1.0f64..1e6, i in 1e-3f64..10.0, mu in 1.0f64..1e3, scale in 1.0f64..100.0
        ) {
            let base = Solenoid::new(1e-3, n, i, mu).unwrap().field();
            let rel = |x: f64| (x / (scale * base) - 1.0).abs();
            prop_assert!(rel(Solenoid::new(1e-3, n * scale, i, mu).unwrap().field()) < 1e-14);
            prop_assert!(rel(Solenoid::new(1e-3, n, i * scale, mu).unwrap().field()) < 1e-14);
            prop_assert!(rel(Solenoid::new(1e-3, n, i, mu * scale).unwrap().field()) < 1e-14);
        }
    }
}
