//! Physical constants in SI units.
//!
//! All values from CODATA 2018. The elementary charge and the Planck constant
//! are exact by the 2019 SI definition.

use std::f64::consts::PI;

/// The constant set every formula in the crate consumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// C
    pub elementary_charge: f64,
    /// kg
    pub electron_mass: f64,
    /// J·s
    pub planck: f64,
    /// J·s
    pub planck_reduced: f64,
    /// T·m/A
    pub vacuum_permeability: f64,
}

pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    elementary_charge: ELEMENTARY_CHARGE,
    electron_mass: ELECTRON_MASS,
    planck: PLANCK,
    planck_reduced: HBAR,
    vacuum_permeability: MU_0,
};

/// Elementary charge (C)
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Electron rest mass (kg)
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

/// Planck constant (J·s)
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Reduced Planck constant (J·s)
pub const HBAR: f64 = PLANCK / (2.0 * PI);

/// Vacuum magnetic permeability (T·m/A)
pub const MU_0: f64 = 1.256_637_062_12e-6;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_planck_is_planck_over_two_pi() {
        let c = CODATA_2018;
        let rel = (c.planck_reduced - c.planck / (2.0 * PI)).abs() / c.planck_reduced;
        assert!(rel < 1e-15, "{rel}");
        // CODATA 2018 tabulated ħ = 1.054 571 817... × 10⁻³⁴
        assert!((c.planck_reduced / 1.054_571_817e-34 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn all_positive() {
        let c = CODATA_2018;
        for v in [
            c.elementary_charge,
            c.electron_mass,
            c.planck,
            c.planck_reduced,
            c.vacuum_permeability,
        ] {
            assert!(v > 0.0 && v.is_finite());
        }
    }
}
