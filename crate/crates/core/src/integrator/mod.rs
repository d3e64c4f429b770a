//! Numerical integration of the electron's equation of motion under the
//! line-flux force law.
//!
//! The electron starts at `x = −W` with speed v0 and is followed to `x = +W`,
//! `W = window_factor · |y_e|`. Position is the independent variable: with
//! `w = v − v0` the velocity deviation and `D` the displacement relative to
//! free flight,
//!
//! ```text
//! dw/dx = F_x(v, x, y_e) / (m v)
//! dD/dx = w / v
//! ```
//!
//! and time is recovered as `t = (x + W − D) / v0`. Integrating the small
//! quantities directly keeps the displacement free of the cancellation that
//! `x(t) − v0 t` would suffer over a window 10⁴ times the impact parameter.
//!
//! Truncating the line at ±W loses two pieces, both first order in 1/W and
//! both known in closed form from the velocity profile: the tails beyond ±W,
//! and the offset from starting at exactly v0 instead of on the profile. The
//! tail correction adds both.

mod dopri5;

use std::f64::consts::PI;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::beam::ElectronBeam;
use crate::constants::{ELECTRON_MASS, ELEMENTARY_CHARGE};
use crate::error::{Error, Result};
use crate::kinematics::{
    force_x, perturbation_strength, PassageGeometry, PerturbationStrength, Side,
};
use crate::solenoid::MagneticFlux;

/// CSV header of the per-step sample dump.
pub const SAMPLES_CSV_HEADER: &str = "t_s,x_m,v_m_per_s";

const SAFETY: f64 = 0.9;
const MIN_SCALE: f64 = 0.2;
const MAX_SCALE: f64 = 5.0;
/// Smallest step, relative to the local length scale, before giving up.
const MIN_RELATIVE_STEP: f64 = 1e-13;
/// Squared distance from the axis, relative to y_e², below which a step is refused.
const AXIS_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailCorrection {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    /// Half-width of the integration window in units of |y_e|.
    pub window_factor: f64,
    pub relative_tolerance: f64,
    /// m
    pub absolute_tolerance_position: f64,
    pub max_steps: usize,
    pub tail_correction: TailCorrection,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            window_factor: 1e4,
            relative_tolerance: 1e-10,
            absolute_tolerance_position: 1e-24,
            max_steps: 1_000_000,
            tail_correction: TailCorrection::On,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.window_factor.is_finite() && self.window_factor >= 100.0) {
            return Err(Error::domain(format!(
                "window_factor must be >= 100, got {}",
                self.window_factor
            )));
        }
        if !(self.relative_tolerance.is_finite() && self.relative_tolerance > 0.0) {
            return Err(Error::domain("relative_tolerance must be positive"));
        }
        if !(self.absolute_tolerance_position.is_finite() && self.absolute_tolerance_position > 0.0)
        {
            return Err(Error::domain(
                "absolute_tolerance_position must be positive",
            ));
        }
        if self.max_steps == 0 {
            return Err(Error::domain("max_steps must be positive"));
        }
        Ok(())
    }

    pub fn with_relative_tolerance(self, relative_tolerance: f64) -> Self {
        Self {
            relative_tolerance,
            ..self
        }
    }

    pub fn with_window_factor(self, window_factor: f64) -> Self {
        Self {
            window_factor,
            ..self
        }
    }

    pub fn with_tail_correction(self, tail_correction: TailCorrection) -> Self {
        Self {
            tail_correction,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryResult {
    /// One sample at the start and one per accepted step.
    pub samples: Vec<Sample>,
    /// m; positive means ahead of a free electron.
    pub displacement_vs_free_flight: f64,
    /// s; `−displacement / v0`, so an electron pushed ahead arrives early (negative delay).
    pub time_delay: f64,
    /// m/s
    pub final_speed: f64,
    /// m; zero when the correction is off.
    pub tail_correction_applied: f64,
    /// m; sum of the embedded error estimates of the displacement over accepted steps.
    pub local_error_estimate: f64,
    pub epsilon: PerturbationStrength,
    pub side: Side,
    pub initial_speed: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl TrajectoryResult {
    pub fn write_samples_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{SAMPLES_CSV_HEADER}")?;
        for s in &self.samples {
            writeln!(out, "{:e},{:e},{:e}", s.t, s.x, s.v)?;
        }
        Ok(())
    }
}

enum Halt {
    /// Speed below v0/2 at a stage point.
    Trapped,
    NearAxis(f64),
}

/// Integrates one passage and returns its displacement relative to free flight.
pub fn integrate_passage(
    flux: MagneticFlux,
    beam: &ElectronBeam,
    geometry: PassageGeometry,
    cfg: &IntegratorConfig,
) -> Result<TrajectoryResult> {
    cfg.validate()?;
    let y = geometry.impact_parameter();
    let dist = geometry.distance();
    let v0 = beam.speed();
    let half_window = cfg.window_factor * dist;
    let epsilon = perturbation_strength(flux, beam, geometry);

    // Error scales. A velocity error made at x is carried over the rest of
    // the window and moves D by about δw·(W − x)/v0, so velocity errors are
    // weighted by that lever arm and measured against the displacement scale.
    let d_ref = epsilon.value() * dist;
    let rtol = cfg.relative_tolerance;
    let atol_d = cfg.absolute_tolerance_position;

    let mut rhs = |x: f64, s: &[f64; 2]| -> std::result::Result<[f64; 2], Halt> {
        let v = v0 + s[0];
        if v < 0.5 * v0 {
            return Err(Halt::Trapped);
        }
        if x * x + y * y < AXIS_FLOOR * y * y {
            return Err(Halt::NearAxis(x));
        }
        let force = force_x(flux, v, x, y).map_err(|_| Halt::NearAxis(x))?;
        Ok([force / (ELECTRON_MASS * v), s[0] / v])
    };

    let time_at = |x: f64, disp: f64| (x + half_window - disp) / v0;

    let mut x = -half_window;
    let mut state = [0.0_f64, 0.0];
    let mut samples = vec![Sample { t: 0.0, x, v: v0 }];
    let mut local_error = 0.0;
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut h = 1e-3 * half_window;
    let mut last_trapped = false;

    let mut k1 = match rhs(x, &state) {
        Ok(k) => k,
        Err(_) => unreachable!("initial state is at v0 far from the axis"),
    };

    let finish = |samples: Vec<Sample>,
                  state: [f64; 2],
                  local_error: f64,
                  accepted: usize,
                  rejected: usize,
                  correction: f64| {
        let displacement = state[1] + correction;
        TrajectoryResult {
            samples,
            displacement_vs_free_flight: displacement,
            time_delay: -displacement / v0,
            final_speed: v0 + state[0],
            tail_correction_applied: correction,
            local_error_estimate: local_error,
            epsilon,
            side: geometry.side(),
            initial_speed: v0,
            accepted_steps: accepted,
            rejected_steps: rejected,
        }
    };

    while x < half_window {
        if accepted + rejected >= cfg.max_steps {
            return Err(Error::Convergence {
                reason: format!("max_steps = {} exceeded at x = {x:e} m", cfg.max_steps),
                partial: Box::new(finish(samples, state, local_error, accepted, rejected, 0.0)),
            });
        }
        let scale = x.abs().max(dist);
        // never step across more than the local length scale of the force
        h = h.min(scale).min(half_window - x);
        if h < MIN_RELATIVE_STEP * scale {
            let reason = if last_trapped {
                format!(
                    "speed falls below v0/2 just past x = {x:e} m; the electron is no longer passing"
                )
            } else {
                format!("step size underflow (h = {h:e} m) at x = {x:e} m")
            };
            return Err(Error::Convergence {
                reason,
                partial: Box::new(finish(samples, state, local_error, accepted, rejected, 0.0)),
            });
        }

        let trial = match dopri5::step(&mut rhs, x, &state, &k1, h) {
            Ok(s) => s,
            Err(Halt::Trapped) => {
                last_trapped = true;
                rejected += 1;
                h *= MIN_SCALE;
                continue;
            }
            Err(Halt::NearAxis(at)) => {
                return Err(Error::Singularity(format!(
                    "trajectory reached the axis floor at x = {at:e} m"
                )))
            }
        };

        last_trapped = false;
        let d_scale = atol_d + rtol * state[1].abs().max(trial.y[1].abs()).max(d_ref);
        let lever = half_window - (x + h) + dist;
        let sc_w = d_scale * v0 / lever;
        let sc_d = d_scale;
        let norm = (trial.error[0].abs() / sc_w).max(trial.error[1].abs() / sc_d);

        if norm <= 1.0 {
            let at_end = x + h >= half_window;
            x = if at_end { half_window } else { x + h };
            state = trial.y;
            k1 = trial.dydx;
            local_error += trial.error[1].abs();
            accepted += 1;
            let v = v0 + state[0];
            samples.push(Sample {
                t: time_at(x, state[1]),
                x,
                v,
            });
            if v < 0.5 * v0 {
                return Err(Error::Convergence {
                    reason: format!(
                        "speed fell to {v:e} m/s, below v0/2; the electron is no longer passing"
                    ),
                    partial: Box::new(finish(samples, state, local_error, accepted, rejected, 0.0)),
                });
            }
            let grow = if norm == 0.0 {
                MAX_SCALE
            } else {
                (SAFETY * norm.powf(-0.2)).clamp(MIN_SCALE, MAX_SCALE)
            };
            h *= grow;
        } else {
            rejected += 1;
            h *= (SAFETY * norm.powf(-0.2)).clamp(MIN_SCALE, 1.0);
        }
    }

    let correction = match cfg.tail_correction {
        TailCorrection::On => truncation_correction(flux, beam, geometry, half_window),
        TailCorrection::Off => 0.0,
    };
    Ok(finish(
        samples,
        state,
        local_error,
        accepted,
        rejected,
        correction,
    ))
}

/// Displacement lost by truncating the line at ±W, to first order in the
/// flux, from the velocity profile `Δv = a y_e/(x² + y_e²)`, `a = Φe/2πm`:
/// the two tails beyond ±W contribute `(2a/v0) sgn(y_e) (π/2 − atan(W/|y_e|))`,
/// and starting at v0 instead of on the profile lowers the speed across the
/// whole window by `a y_e/(W² + y_e²)`, costing `2W a y_e / (v0 (W² + y_e²))`.
pub fn truncation_correction(
    flux: MagneticFlux,
    beam: &ElectronBeam,
    geometry: PassageGeometry,
    half_window: f64,
) -> f64 {
    let a = flux.webers() * ELEMENTARY_CHARGE / (2.0 * PI * ELECTRON_MASS);
    let y = geometry.impact_parameter();
    let d = geometry.distance();
    let v0 = beam.speed();
    let tails = 2.0 * a * geometry.side().sign() * (half_window / d).recip().atan() / v0;
    let offset = 2.0 * half_window * a * y / (v0 * (half_window * half_window + y * y));
    tails + offset
}

/// Displacement difference between passages at +|y_e| and −|y_e|.
pub fn numeric_relative_displacement(
    flux: MagneticFlux,
    beam: &ElectronBeam,
    geometry: PassageGeometry,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let upper = PassageGeometry::new(geometry.distance())?;
    let up = integrate_passage(flux, beam, upper, cfg)?;
    let down = integrate_passage(flux, beam, upper.mirrored(), cfg)?;
    Ok(up.displacement_vs_free_flight - down.displacement_vs_free_flight)
}

/// The part of one passage's displacement that is quadratic in the flux,
/// evaluated at `flux`.
///
/// Runs at Φ, Φ/2 and Φ/4 and eliminates the linear and cubic terms of
/// `D(Φ) = aΦ + bΦ² + cΦ³ + …`, giving `bΦ² = −2D(Φ) + 20D(Φ/2) − 32D(Φ/4)`.
pub fn extract_second_order(
    flux: MagneticFlux,
    beam: &ElectronBeam,
    geometry: PassageGeometry,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    if flux.webers() == 0.0 {
        return Ok(0.0);
    }
    let run =
        |scale: f64| -> Result<f64> {
            Ok(integrate_passage(flux.scaled(scale)?, beam, geometry, cfg)?
                .displacement_vs_free_flight)
        };
    let (d1, d2, d4) = (run(1.0)?, run(0.5)?, run(0.25)?);
    Ok(-2.0 * d1 + 20.0 * d2 - 32.0 * d4)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceEntry {
    pub relative_tolerance: f64,
    pub window_factor: f64,
    pub displacement_m: Option<f64>,
    pub local_error_estimate_m: Option<f64>,
    pub accepted_steps: Option<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub entries: Vec<ConvergenceEntry>,
    /// Displacement at the tightest tolerance and widest window that succeeded.
    pub extrapolated_displacement_m: Option<f64>,
    /// Largest change from the nearest coarser tolerance or narrower window.
    pub uncertainty_m: Option<f64>,
}

pub const CONVERGENCE_TOLERANCES: [f64; 4] = [1e-8, 1e-9, 1e-10, 1e-11];
pub const CONVERGENCE_WINDOWS: [f64; 3] = [1e3, 1e4, 1e5];

/// Runs the passage over a ladder of tolerances and windows (tail correction on).
pub fn convergence_report(
    flux: MagneticFlux,
    beam: &ElectronBeam,
    geometry: PassageGeometry,
) -> ConvergenceReport {
    let base = IntegratorConfig::default();
    let mut entries = Vec::new();
    for &window in &CONVERGENCE_WINDOWS {
        for &rtol in &CONVERGENCE_TOLERANCES {
            let cfg = base
                .with_window_factor(window)
                .with_relative_tolerance(rtol);
            let entry = match integrate_passage(flux, beam, geometry, &cfg) {
                Ok(r) => ConvergenceEntry {
                    relative_tolerance: rtol,
                    window_factor: window,
                    displacement_m: Some(r.displacement_vs_free_flight),
                    local_error_estimate_m: Some(r.local_error_estimate),
                    accepted_steps: Some(r.accepted_steps),
                    error: None,
                },
                Err(e) => ConvergenceEntry {
                    relative_tolerance: rtol,
                    window_factor: window,
                    displacement_m: None,
                    local_error_estimate_m: None,
                    accepted_steps: None,
                    error: Some(e.to_string()),
                },
            };
            entries.push(entry);
        }
    }

    let lookup = |w: f64, r: f64| {
        entries
            .iter()
            .find(|e| e.window_factor == w && e.relative_tolerance == r)
            .and_then(|e| e.displacement_m)
    };
    let mut best = None;
    'search: for &w in CONVERGENCE_WINDOWS.iter().rev() {
        for &r in CONVERGENCE_TOLERANCES.iter().rev() {
            if let Some(d) = lookup(w, r) {
                best = Some((w, r, d));
                break 'search;
            }
        }
    }
    let uncertainty = best.and_then(|(w, r, d)| {
        let wi = CONVERGENCE_WINDOWS.iter().position(|&x| x == w)?;
        let ri = CONVERGENCE_TOLERANCES.iter().position(|&x| x == r)?;
        let mut neighbours = Vec::new();
        if ri > 0 {
            neighbours.extend(lookup(w, CONVERGENCE_TOLERANCES[ri - 1]));
        }
        if wi > 0 {
            neighbours.extend(lookup(CONVERGENCE_WINDOWS[wi - 1], r));
        }
        neighbours
            .into_iter()
            .map(|n| (n - d).abs())
            .reduce(f64::max)
    });
    ConvergenceReport {
        entries,
        extrapolated_displacement_m: best.map(|(_, _, d)| d),
        uncertainty_m: uncertainty,
    }
}
