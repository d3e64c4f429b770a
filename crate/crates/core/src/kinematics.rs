//! Closed-form semi-classical kinematics of an electron passing a line flux.
//!
//! The electron moves along x at impact parameter `y_e` from a solenoid whose
//! axis is z. The x-component of the Lorentz force in the back-action picture
//!
//! ```text
//! F_x = −(Φ e v / 4π) · 4 x_e y_e / (x_e² + y_e²)²
//! ```
//!
//! is applied to the electron (mass m) through Newton's second law. The force
//! is usually quoted as the force on the solenoid; here it acts on the
//! electron, which is how it enters every displacement and delay below.
//!
//! The charge is taken as the magnitude e. Shifts and delays are magnitudes;
//! the side of passage carries the relative sign.
//!
//! The expansions are in the perturbation strength
//! `ε = Φ e / (2π m v0 |y_e|)`; each returns its first- and second-order
//! terms separately and warns (never fails) once `ε ≥ 0.1`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::beam::ElectronBeam;
use crate::constants::{ELECTRON_MASS, ELEMENTARY_CHARGE, HBAR};
use crate::error::{Error, Result};
use crate::solenoid::{MagneticFlux, Solenoid};

/// ε at and above which the expansions are flagged as out of regime.
pub const EPSILON_WARNING_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// y_e > 0
    Upper,
    /// y_e < 0
    Lower,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Upper => 1.0,
            Side::Lower => -1.0,
        }
    }
}

/// Straight-line passage at a signed impact parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PassageGeometry {
    impact_parameter: f64,
}

impl PassageGeometry {
    /// `impact_parameter` in m, signed. Zero puts the electron on the axis.
    pub fn new(impact_parameter: f64) -> Result<Self> {
        if !impact_parameter.is_finite() {
            return Err(Error::domain(format!(
                "impact parameter must be finite, got {impact_parameter} m"
            )));
        }
        if impact_parameter == 0.0 {
            return Err(Error::Singularity(
                "impact parameter y_e = 0 places the electron on the solenoid axis".into(),
            ));
        }
        Ok(Self { impact_parameter })
    }

    pub fn impact_parameter(&self) -> f64 {
        self.impact_parameter
    }

    pub fn distance(&self) -> f64 {
        self.impact_parameter.abs()
    }

    pub fn side(&self) -> Side {
        if self.impact_parameter > 0.0 {
            Side::Upper
        } else {
            Side::Lower
        }
    }

    /// The same passage on the other side of the axis.
    pub fn mirrored(&self) -> Self {
        Self {
            impact_parameter: -self.impact_parameter,
        }
    }

    /// The line-flux model assumes the electron passes outside the winding.
    pub fn check_outside(&self, solenoid: &Solenoid) -> Option<Warning> {
        (self.distance() <= solenoid.radius()).then_some(Warning::InsideSolenoid {
            impact_parameter_m: self.impact_parameter,
            radius_m: solenoid.radius(),
        })
    }
}

/// Dimensionless ε = Φ e / (2π m v0 |y_e|).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PerturbationStrength(f64);

impl PerturbationStrength {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn warning(self) -> Option<Warning> {
        (self.0 >= EPSILON_WARNING_THRESHOLD)
            .then_some(Warning::OutOfPerturbativeRegime { epsilon: self.0 })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    OutOfPerturbativeRegime {
        epsilon: f64,
    },
    InsideSolenoid {
        impact_parameter_m: f64,
        radius_m: f64,
    },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::OutOfPerturbativeRegime { epsilon } => write!(
                f,
                "perturbation strength epsilon = {epsilon:.3e} >= {EPSILON_WARNING_THRESHOLD}; \
                 second-order expansion is outside its regime"
            ),
            Warning::InsideSolenoid {
                impact_parameter_m,
                radius_m,
            } => write!(
                f,
                "|y_e| = {:.3e} m does not exceed the solenoid radius {radius_m:.3e} m",
                impact_parameter_m.abs()
            ),
        }
    }
}

/// A two-term expansion with its validity parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    pub first_order: f64,
    pub second_order: f64,
    pub total: f64,
    pub epsilon: PerturbationStrength,
}

impl Expansion {
    fn new(first_order: f64, second_order: f64, epsilon: PerturbationStrength) -> Self {
        Self {
            first_order,
            second_order,
            total: first_order + second_order,
            epsilon,
        }
    }

    pub fn warning(&self) -> Option<Warning> {
        self.epsilon.warning()
    }
}

/// Velocity-independent and velocity-dependent parts of the semi-classical phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseDecomposition {
    /// rad
    pub dispersionless_term: f64,
    /// rad, signed (negative)
    pub dispersive_term: f64,
    /// rad
    pub total: f64,
}

/// Φ e (Wb·C = J·s).
fn flux_charge(flux: MagneticFlux) -> f64 {
    flux.webers() * ELEMENTARY_CHARGE
}

/// One-sided leading displacement Φ e / (2 m v0).
fn half_shift(flux: MagneticFlux, beam: &ElectronBeam) -> f64 {
    flux_charge(flux) / (2.0 * ELECTRON_MASS * beam.speed())
}

pub fn perturbation_strength(
    flux: MagneticFlux,
    beam: &ElectronBeam,
    geometry: PassageGeometry,
) -> PerturbationStrength {
    PerturbationStrength(
        flux_charge(flux) / (2.0 * PI * ELECTRON_MASS * beam.speed() * geometry.distance()),
    )
}

/// x-component of the force on the electron (N) at `(x, y)` relative to the axis.
pub fn force_x(flux: MagneticFlux, speed: f64, x: f64, y: f64) -> Result<f64> {
    if x == 0.0 && y == 0.0 {
        return Err(Error::Singularity(
            "force evaluated on the solenoid axis (x_e = y_e = 0)".into(),
        ));
    }
    let r2 = x * x + y * y;
    Ok(-(flux_charge(flux) * speed / (4.0 * PI)) * 4.0 * x * y / (r2 * r2))
}

/// Speed at position `x` (m/s).
///
/// Because the force is proportional to v, `v dv/dx = F/m` integrates to
/// `v± = v0 ± (Φ e / 2π m) |y_e| / (x² + y_e²)` without approximation.
pub fn velocity_profile(
    flux: MagneticFlux,
    beam: &ElectronBeam,
    x: f64,
    geometry: PassageGeometry,
) -> f64 {
    let y = geometry.distance();
    let amplitude = flux_charge(flux) / (2.0 * PI * ELECTRON_MASS);
    beam.speed() + geometry.side().sign() * amplitude * y / (x * x + y * y)
}

/// Displacement of one electron relative to free flight, to second order.
///
/// `±Φe/(2mv0) ∓ (1/2π|y_e|)(Φe/2mv0)²`, upper sign for y_e > 0.
pub fn side_displacement(
    flux: MagneticFlux,
    beam: &ElectronBeam,
    geometry: PassageGeometry,
) -> Expansion {
    let sign = geometry.side().sign();
    let lead = half_shift(flux, beam);
    let second = lead * lead / (2.0 * PI * geometry.distance());
    Expansion::new(
        sign * lead,
        -sign * second,
        perturbation_strength(flux, beam, geometry),
    )
}

/// Displacement between electrons passing on opposite sides at the same |y_e|.
///
/// `Φe/(mv0) − (1/π|y_e|)(Φe/2mv0)²`
pub fn relative_displacement(
    flux: MagneticFlux,
    beam: &ElectronBeam,
    geometry: PassageGeometry,
) -> Expansion {
    let lead = half_shift(flux, beam);
    Expansion::new(
        flux_charge(flux) / (ELECTRON_MASS * beam.speed()),
        -lead * lead / (PI * geometry.distance()),
        perturbation_strength(flux, beam, geometry),
    )
}

/// Aharonov-Bohm phase e Φ / ħ (rad).
pub fn ab_phase(flux: MagneticFlux) -> f64 {
    flux_charge(flux) / HBAR
}

/// Semi-classical phase k Δx split into its velocity-independent and
/// velocity-dependent parts.
pub fn semiclassical_phase(
    flux: MagneticFlux,
    beam: &ElectronBeam,
    geometry: PassageGeometry,
) -> PhaseDecomposition {
    let half = flux_charge(flux) / 2.0;
    let dispersive =
        -half * half / (HBAR * PI * geometry.distance() * ELECTRON_MASS * beam.speed());
    PhaseDecomposition {
        dispersionless_term: ab_phase(flux),
        dispersive_term: dispersive,
        total: beam.wavevector() * relative_displacement(flux, beam, geometry).total,
    }
}

/// Wave-packet envelope shift ∂φ/∂k of the dispersive phase term (m).
pub fn envelope_shift(flux: MagneticFlux, beam: &ElectronBeam, geometry: PassageGeometry) -> f64 {
    let half = flux_charge(flux) / 2.0;
    let hk = HBAR * beam.wavevector();
    half * half / (hk * hk * PI * geometry.distance())
}

/// Classical arrival-time delay Φ e / (m v0²) (s).
pub fn classical_delay(flux: MagneticFlux, beam: &ElectronBeam) -> f64 {
    let v0 = beam.speed();
    flux_charge(flux) / (ELECTRON_MASS * v0 * v0)
}

/// Semi-classical delay: envelope shift over v0 (s).
pub fn semiclassical_delay(
    flux: MagneticFlux,
    beam: &ElectronBeam,
    geometry: PassageGeometry,
) -> f64 {
    envelope_shift(flux, beam, geometry) / beam.speed()
}
