//! Conversions between SI and the units the experiments are quoted in.
//!
//! Everything inside the crate is SI. These helpers are the only place where
//! keV, eV, pm, nm, µm, mm and G·cm² appear. Length scalings divide or
//! multiply by exact powers of ten, so `um_to_m(50.0)` is exactly `5e-5`.

use crate::constants::ELEMENTARY_CHARGE;

/// 1 G·cm² = 10⁻⁴ T × 10⁻⁴ m².
pub const WEBER_PER_GAUSS_CM2: f64 = 1e-8;

pub fn kev_to_joules(kev: f64) -> f64 {
    kev * 1e3 * ELEMENTARY_CHARGE
}

pub fn joules_to_kev(joules: f64) -> f64 {
    joules / (1e3 * ELEMENTARY_CHARGE)
}

pub fn ev_to_joules(ev: f64) -> f64 {
    ev * ELEMENTARY_CHARGE
}

pub fn joules_to_ev(joules: f64) -> f64 {
    joules / ELEMENTARY_CHARGE
}

pub fn flux_from_gauss_cm2(gauss_cm2: f64) -> f64 {
    gauss_cm2 * WEBER_PER_GAUSS_CM2
}

pub fn flux_to_gauss_cm2(webers: f64) -> f64 {
    webers / WEBER_PER_GAUSS_CM2
}

pub fn pm_to_m(pm: f64) -> f64 {
    pm / 1e12
}

pub fn m_to_pm(m: f64) -> f64 {
    m * 1e12
}

pub fn nm_to_m(nm: f64) -> f64 {
    nm / 1e9
}

pub fn m_to_nm(m: f64) -> f64 {
    m * 1e9
}

pub fn um_to_m(um: f64) -> f64 {
    um / 1e6
}

pub fn m_to_um(m: f64) -> f64 {
    m * 1e6
}

pub fn mm_to_m(mm: f64) -> f64 {
    mm / 1e3
}

pub fn m_to_mm(m: f64) -> f64 {
    m * 1e3
}

/// Winding density quoted per millimetre, returned per metre.
pub fn per_mm_to_per_m(per_mm: f64) -> f64 {
    per_mm * 1e3
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        if a == b {
            0.0
        } else {
            (a - b).abs() / a.abs().max(b.abs())
        }
    }

    #[test]
    fn chambers_flux_in_webers() {
        assert_eq!(flux_from_gauss_cm2(1.7e-4), 1.7e-4 * 1e-8);
        assert!(rel(flux_from_gauss_cm2(1.7e-4), 1.7e-12) < 1e-15);
        assert_eq!(flux_from_gauss_cm2(0.0), 0.0);
    }

    proptest! {
        #[test]
        fn round_trips(x in 1e-12f64..1e12) {
            prop_assert!(rel(flux_to_gauss_cm2(flux_from_gauss_cm2(x)), x) < 4.0 * f64::EPSILON);
            prop_assert!(rel(joules_to_kev(kev_to_joules(x)), x) < 4.0 * f64::EPSILON);
            prop_assert!(rel(joules_to_ev(ev_to_joules(x)), x) < 4.0 * f64::EPSILON);
            prop_assert!(rel(m_to_pm(pm_to_m(x)), x) < 4.0 * f64::EPSILON);
            prop_assert!(rel(m_to_nm(nm_to_m(x)), x) < 4.0 * f64::EPSILON);
            prop_assert!(rel(m_to_um(um_to_m(x)), x) < 4.0 * f64::EPSILON);
            prop_assert!(rel(m_to_mm(mm_to_m(x)), x) < 4.0 * f64::EPSILON);
        }
    }
}
