//! C ABI for `abforce`.
//!
//! Every fallible function returns an [`AbfStatus`] and writes its result
//! through an out-pointer. After a failure, [`abf_last_error_message`] gives a
//! description for the calling thread. Handles come from `abf_*_new` or
//! `abf_catalog_*` constructors and are released with the matching
//! `abf_*_free`; freeing NULL is a no-op. Lengths are SI unless the function
//! name says otherwise. Absent optional values are NaN.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use abforce::catalog::{self, ExperimentRecord, Outcome};
use abforce::integrator::{self, IntegratorConfig, TailCorrection};
use abforce::kinematics::{self, PassageGeometry};
use abforce::units;
use abforce::{ElectronBeam, Error, MagneticFlux, Solenoid, TrajectoryResult};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbfStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Singularity = 3,
    Convergence = 4,
    OutOfRange = 5,
    InvalidUtf8 = 6,
    Panic = 7,
}

enum Failure {
    Null(&'static str),
    Lib(Error),
    Range(String),
    Utf8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> AbfStatus {
    let (status, msg) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => return AbfStatus::Ok,
        Ok(Err(Failure::Null(what))) => (AbfStatus::NullPointer, format!("{what} is NULL")),
        Ok(Err(Failure::Range(m))) => (AbfStatus::OutOfRange, m),
        Ok(Err(Failure::Utf8)) => (AbfStatus::InvalidUtf8, "string is not valid UTF-8".into()),
        Ok(Err(Failure::Lib(e))) => {
            let status = match e {
                Error::Domain(_) => AbfStatus::Domain,
                Error::Singularity(_) => AbfStatus::Singularity,
                Error::Convergence { .. } => AbfStatus::Convergence,
            };
            (status, e.to_string())
        }
        Err(_) => (AbfStatus::Panic, "internal panic".into()),
    };
    set_last_error(msg);
    status
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn write<T>(p: *mut T, v: T, what: &'static str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    p.write(v);
    Ok(())
}

fn nan_to_none(v: f64) -> Option<f64> {
    (!v.is_nan()).then_some(v)
}

/// Library version, static NUL-terminated string.
#[no_mangle]
pub extern "C" fn abf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread; empty if none. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn abf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Opaque electron beam.
pub struct AbfBeam(ElectronBeam);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AbfBeamProperties {
    pub kinetic_energy_j: f64,
    pub speed_m_per_s: f64,
    pub debroglie_wavelength_m: f64,
    pub wavevector_per_m: f64,
    /// NaN when the beam has no energy spread.
    pub energy_spread_j: f64,
}

/// Creates a beam of `energy_kev`; `energy_spread_ev` may be NaN for none.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn abf_beam_new(
    energy_kev: f64,
    energy_spread_ev: f64,
    out: *mut *mut AbfBeam,
) -> AbfStatus {
    guard(|| {
        let beam = ElectronBeam::from_energy_kev(energy_kev, nan_to_none(energy_spread_ev))?;
        write(out, Box::into_raw(Box::new(AbfBeam(beam))), "out")
    })
}

/// # Safety
/// `beam` must come from [`abf_beam_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn abf_beam_free(beam: *mut AbfBeam) {
    if !beam.is_null() {
        drop(Box::from_raw(beam));
    }
}

/// # Safety
/// `beam` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn abf_beam_properties(
    beam: *const AbfBeam,
    out: *mut AbfBeamProperties,
) -> AbfStatus {
    guard(|| {
        let b = &deref(beam, "beam")?.0;
        let props = AbfBeamProperties {
            kinetic_energy_j: b.kinetic_energy(),
            speed_m_per_s: b.speed(),
            debroglie_wavelength_m: b.debroglie_wavelength(),
            wavevector_per_m: b.wavevector(),
            energy_spread_j: b.energy_spread().unwrap_or(f64::NAN),
        };
        write(out, props, "out")
    })
}

#[no_mangle]
pub extern "C" fn abf_flux_from_gauss_cm2(gauss_cm2: f64) -> f64 {
    units::flux_from_gauss_cm2(gauss_cm2)
}

#[no_mangle]
pub extern "C" fn abf_flux_to_gauss_cm2(webers: f64) -> f64 {
    units::flux_to_gauss_cm2(webers)
}

/// Field (T) and flux (Wb) of a solenoid. Either out-pointer may be NULL.
///
/// # Safety
/// Non-NULL out-pointers must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn abf_solenoid(
    radius_m: f64,
    winding_density_per_m: f64,
    current_a: f64,
    relative_permeability: f64,
    field_t: *mut f64,
    flux_wb: *mut f64,
) -> AbfStatus {
    guard(|| {
        let s = Solenoid::new(
            radius_m,
            winding_density_per_m,
            current_a,
            relative_permeability,
        )?;
        if !field_t.is_null() {
            field_t.write(s.field());
        }
        if !flux_wb.is_null() {
            flux_wb.write(s.flux().webers());
        }
        Ok(())
    })
}

/// x-component of the force (N) on an electron at (x, y) moving at `speed`.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn abf_force_x(
    flux_wb: f64,
    speed_m_per_s: f64,
    x_m: f64,
    y_m: f64,
    out: *mut f64,
) -> AbfStatus {
    guard(|| {
        let f = kinematics::force_x(MagneticFlux::from_webers(flux_wb)?, speed_m_per_s, x_m, y_m)?;
        write(out, f, "out")
    })
}

/// Closed-form quantities for one passage. Lengths in m, phases in rad, times in s.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AbfAnalytic {
    pub epsilon: f64,
    pub side_first_order_m: f64,
    pub side_second_order_m: f64,
    pub relative_first_order_m: f64,
    pub relative_second_order_m: f64,
    pub relative_total_m: f64,
    pub ab_phase_rad: f64,
    pub phase_dispersionless_rad: f64,
    pub phase_dispersive_rad: f64,
    pub phase_total_rad: f64,
    pub envelope_shift_m: f64,
    pub classical_delay_s: f64,
    pub semiclassical_delay_s: f64,
}

/// # Safety
/// `beam` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn abf_analytic(
    flux_wb: f64,
    beam: *const AbfBeam,
    impact_parameter_m: f64,
    out: *mut AbfAnalytic,
) -> AbfStatus {
    guard(|| {
        let b = &deref(beam, "beam")?.0;
        let flux = MagneticFlux::from_webers(flux_wb)?;
        let g = PassageGeometry::new(impact_parameter_m)?;
        let side = kinematics::side_displacement(flux, b, g);
        let rel = kinematics::relative_displacement(flux, b, g);
        let phase = kinematics::semiclassical_phase(flux, b, g);
        let a = AbfAnalytic {
            epsilon: side.epsilon.value(),
            side_first_order_m: side.first_order,
            side_second_order_m: side.second_order,
            relative_first_order_m: rel.first_order,
            relative_second_order_m: rel.second_order,
            relative_total_m: rel.total,
            ab_phase_rad: kinematics::ab_phase(flux),
            phase_dispersionless_rad: phase.dispersionless_term,
            phase_dispersive_rad: phase.dispersive_term,
            phase_total_rad: phase.total,
            envelope_shift_m: kinematics::envelope_shift(flux, b, g),
            classical_delay_s: kinematics::classical_delay(flux, b),
            semiclassical_delay_s: kinematics::semiclassical_delay(flux, b, g),
        };
        write(out, a, "out")
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct AbfIntegratorConfig {
    pub window_factor: f64,
    pub relative_tolerance: f64,
    pub absolute_tolerance_position_m: f64,
    pub max_steps: u64,
    pub tail_correction: bool,
}

impl From<&AbfIntegratorConfig> for IntegratorConfig {
    fn from(c: &AbfIntegratorConfig) -> Self {
        IntegratorConfig {
            window_factor: c.window_factor,
            relative_tolerance: c.relative_tolerance,
            absolute_tolerance_position: c.absolute_tolerance_position_m,
            max_steps: usize::try_from(c.max_steps).unwrap_or(usize::MAX),
            tail_correction: if c.tail_correction {
                TailCorrection::On
            } else {
                TailCorrection::Off
            },
        }
    }
}

#[no_mangle]
pub extern "C" fn abf_integrator_config_default() -> AbfIntegratorConfig {
    let d = IntegratorConfig::default();
    AbfIntegratorConfig {
        window_factor: d.window_factor,
        relative_tolerance: d.relative_tolerance,
        absolute_tolerance_position_m: d.absolute_tolerance_position,
        max_steps: d.max_steps as u64,
        tail_correction: d.tail_correction == TailCorrection::On,
    }
}

/// Opaque integration result with its samples.
pub struct AbfTrajectory(TrajectoryResult);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AbfTrajectorySummary {
    pub displacement_m: f64,
    pub time_delay_s: f64,
    pub initial_speed_m_per_s: f64,
    pub final_speed_m_per_s: f64,
    pub tail_correction_applied_m: f64,
    pub local_error_estimate_m: f64,
    pub epsilon: f64,
    pub accepted_steps: u64,
    pub rejected_steps: u64,
    pub sample_count: u64,
}

/// Integrates one passage. On `Convergence`, `*out` still receives the
/// partial trajectory, which the caller must free.
///
/// # Safety
/// `beam` must be a live handle, `config` NULL or valid, `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn abf_integrate_passage(
    flux_wb: f64,
    beam: *const AbfBeam,
    impact_parameter_m: f64,
    config: *const AbfIntegratorConfig,
    out: *mut *mut AbfTrajectory,
) -> AbfStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        out.write(ptr::null_mut());
        let b = &deref(beam, "beam")?.0;
        let cfg = config
            .as_ref()
            .map(IntegratorConfig::from)
            .unwrap_or_default();
        let flux = MagneticFlux::from_webers(flux_wb)?;
        let g = PassageGeometry::new(impact_parameter_m)?;
        match integrator::integrate_passage(flux, b, g, &cfg) {
            Ok(r) => {
                out.write(Box::into_raw(Box::new(AbfTrajectory(r))));
                Ok(())
            }
            Err(Error::Convergence { reason, partial }) => {
                let partial_copy = (*partial).clone();
                out.write(Box::into_raw(Box::new(AbfTrajectory(partial_copy))));
                Err(Failure::Lib(Error::Convergence { reason, partial }))
            }
            Err(e) => Err(e.into()),
        }
    })
}

/// # Safety
/// `traj` must come from [`abf_integrate_passage`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn abf_trajectory_free(traj: *mut AbfTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// # Safety
/// `traj` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn abf_trajectory_summary(
    traj: *const AbfTrajectory,
    out: *mut AbfTrajectorySummary,
) -> AbfStatus {
    guard(|| {
        let r = &deref(traj, "traj")?.0;
        let s = AbfTrajectorySummary {
            displacement_m: r.displacement_vs_free_flight,
            time_delay_s: r.time_delay,
            initial_speed_m_per_s: r.initial_speed,
            final_speed_m_per_s: r.final_speed,
            tail_correction_applied_m: r.tail_correction_applied,
            local_error_estimate_m: r.local_error_estimate,
            epsilon: r.epsilon.value(),
            accepted_steps: r.accepted_steps as u64,
            rejected_steps: r.rejected_steps as u64,
            sample_count: r.samples.len() as u64,
        };
        write(out, s, "out")
    })
}

/// Copies up to `capacity` samples into the three arrays (any may be NULL)
/// and stores the number copied in `written`.
///
/// # Safety
/// `traj` must be a live handle; non-NULL arrays must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn abf_trajectory_samples(
    traj: *const AbfTrajectory,
    t_s: *mut f64,
    x_m: *mut f64,
    v_m_per_s: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> AbfStatus {
    guard(|| {
        let r = &deref(traj, "traj")?.0;
        let n = capacity.min(r.samples.len());
        for (i, s) in r.samples.iter().take(n).enumerate() {
            if !t_s.is_null() {
                t_s.add(i).write(s.t);
            }
            if !x_m.is_null() {
                x_m.add(i).write(s.x);
            }
            if !v_m_per_s.is_null() {
                v_m_per_s.add(i).write(s.v);
            }
        }
        if !written.is_null() {
            written.write(n);
        }
        Ok(())
    })
}

/// Displacement between passages at +|y| and −|y| (m).
///
/// # Safety
/// `beam` must be a live handle, `config` NULL or valid, `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn abf_numeric_relative_displacement(
    flux_wb: f64,
    beam: *const AbfBeam,
    impact_parameter_m: f64,
    config: *const AbfIntegratorConfig,
    out: *mut f64,
) -> AbfStatus {
    guard(|| {
        let b = &deref(beam, "beam")?.0;
        let cfg = config
            .as_ref()
            .map(IntegratorConfig::from)
            .unwrap_or_default();
        let d = integrator::numeric_relative_displacement(
            MagneticFlux::from_webers(flux_wb)?,
            b,
            PassageGeometry::new(impact_parameter_m)?,
            &cfg,
        )?;
        write(out, d, "out")
    })
}

/// Part of one passage's displacement quadratic in the flux (m).
///
/// # Safety
/// `beam` must be a live handle, `config` NULL or valid, `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn abf_extract_second_order(
    flux_wb: f64,
    beam: *const AbfBeam,
    impact_parameter_m: f64,
    config: *const AbfIntegratorConfig,
    out: *mut f64,
) -> AbfStatus {
    guard(|| {
        let b = &deref(beam, "beam")?.0;
        let cfg = config
            .as_ref()
            .map(IntegratorConfig::from)
            .unwrap_or_default();
        let d = integrator::extract_second_order(
            MagneticFlux::from_webers(flux_wb)?,
            b,
            PassageGeometry::new(impact_parameter_m)?,
            &cfg,
        )?;
        write(out, d, "out")
    })
}

/// Opaque list of experiment records.
pub struct AbfCatalog {
    records: Vec<ExperimentRecord>,
    names: Vec<CString>,
}

impl AbfCatalog {
    fn new(records: Vec<ExperimentRecord>) -> Self {
        let names = records
            .iter()
            .map(|r| CString::new(r.name().replace('\0', " ")).unwrap_or_default())
            .collect();
        Self { records, names }
    }

    fn get(&self, index: usize) -> Result<&ExperimentRecord, Failure> {
        self.records.get(index).ok_or_else(|| {
            Failure::Range(format!(
                "record index {index} out of range (catalog has {})",
                self.records.len()
            ))
        })
    }
}

/// The six builtin experiments.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn abf_catalog_builtin(out: *mut *mut AbfCatalog) -> AbfStatus {
    guard(|| {
        let c = AbfCatalog::new(catalog::builtin_table1());
        write(out, Box::into_raw(Box::new(c)), "out")
    })
}

/// Parses a catalog JSON document (NUL-terminated UTF-8).
///
/// # Safety
/// `json` must be NULL or a NUL-terminated string; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn abf_catalog_from_json(
    json: *const c_char,
    out: *mut *mut AbfCatalog,
) -> AbfStatus {
    guard(|| {
        if json.is_null() {
            return Err(Failure::Null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|_| Failure::Utf8)?;
        let c = AbfCatalog::new(catalog::import_json(text)?);
        write(out, Box::into_raw(Box::new(c)), "out")
    })
}

/// # Safety
/// `cat` must come from a catalog constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn abf_catalog_free(cat: *mut AbfCatalog) {
    if !cat.is_null() {
        drop(Box::from_raw(cat));
    }
}

/// Number of records; 0 for NULL.
///
/// # Safety
/// `cat` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn abf_catalog_len(cat: *const AbfCatalog) -> usize {
    cat.as_ref().map_or(0, |c| c.records.len())
}

/// Record name owned by the catalog; NULL when out of range.
///
/// # Safety
/// `cat` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn abf_catalog_name(cat: *const AbfCatalog, index: usize) -> *const c_char {
    cat.as_ref()
        .and_then(|c| c.names.get(index))
        .map_or(ptr::null(), |n| n.as_ptr())
}

/// Bit flags of [`AbfRecordCheck::flagged`].
pub const ABF_FLAG_LAMBDA: u32 = 1;
pub const ABF_FLAG_PHASE: u32 = 2;
pub const ABF_FLAG_SHIFT: u32 = 4;

/// Stored and recomputed columns in the record's units (pm, π rad, nm).
/// Deviations are NaN when undefined.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AbfRecordCheck {
    pub lambda_stored_pm: f64,
    pub lambda_computed_pm: f64,
    pub lambda_deviation: f64,
    pub phase_stored_pi: f64,
    pub phase_computed_pi: f64,
    pub phase_deviation: f64,
    pub shift_stored_nm: f64,
    pub shift_computed_nm: f64,
    pub shift_deviation: f64,
    pub flagged: u32,
}

/// # Safety
/// `cat` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn abf_catalog_verify(
    cat: *const AbfCatalog,
    index: usize,
    out: *mut AbfRecordCheck,
) -> AbfStatus {
    guard(|| {
        let rec = deref(cat, "cat")?.get(index)?;
        let c = catalog::verify_record(rec);
        let dev = |d: Option<f64>| d.unwrap_or(f64::NAN);
        let flag = |on: bool, bit: u32| if on { bit } else { 0 };
        let check = AbfRecordCheck {
            lambda_stored_pm: c.lambda_pm.stored,
            lambda_computed_pm: c.lambda_pm.computed,
            lambda_deviation: dev(c.lambda_pm.relative_deviation),
            phase_stored_pi: c.phase_pi.stored,
            phase_computed_pi: c.phase_pi.computed,
            phase_deviation: dev(c.phase_pi.relative_deviation),
            shift_stored_nm: c.shift_nm.stored,
            shift_computed_nm: c.shift_nm.computed,
            shift_deviation: dev(c.shift_nm.relative_deviation),
            flagged: flag(c.lambda_pm.is_flagged(), ABF_FLAG_LAMBDA)
                | flag(c.phase_pi.is_flagged(), ABF_FLAG_PHASE)
                | flag(c.shift_nm.is_flagged(), ABF_FLAG_SHIFT),
        };
        write(out, check, "out")
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbfTristate {
    False = 0,
    True = 1,
    Unknown = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbfOutcome {
    NotTestable = 0,
    ForcesBelowCoherence = 1,
    ClassicalOnly = 2,
    ClassicalAndDispersionless = 3,
    ClassicalOnlySemiUnknown = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct AbfRegime {
    pub ab_phase_rad: f64,
    pub fringe_threshold_rad: f64,
    pub v_dt_classical_m: f64,
    /// NaN without an impact parameter.
    pub v_dt_semiclassical_m: f64,
    pub coherence_length_m: f64,
    pub fringe_test_feasible: bool,
    pub classical_force_testable: bool,
    pub dispersionless_force_testable: AbfTristate,
    pub outcome: AbfOutcome,
}

/// Classifies record `index`. `impact_parameter_m` overrides the record's
/// y_e unless NaN.
///
/// # Safety
/// `cat` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn abf_catalog_classify(
    cat: *const AbfCatalog,
    index: usize,
    impact_parameter_m: f64,
    out: *mut AbfRegime,
) -> AbfStatus {
    guard(|| {
        let rec = deref(cat, "cat")?.get(index)?;
        let r = catalog::classify_regime(rec, nan_to_none(impact_parameter_m))?;
        let regime = AbfRegime {
            ab_phase_rad: r.ab_phase,
            fringe_threshold_rad: r.fringe_threshold,
            v_dt_classical_m: r.v_dt_classical,
            v_dt_semiclassical_m: r.v_dt_semiclassical.unwrap_or(f64::NAN),
            coherence_length_m: r.coherence_length,
            fringe_test_feasible: r.fringe_test_feasible(),
            classical_force_testable: r.classical_force_testable(),
            dispersionless_force_testable: match r.dispersionless_force_testable() {
                Some(true) => AbfTristate::True,
                Some(false) => AbfTristate::False,
                None => AbfTristate::Unknown,
            },
            outcome: match r.outcome() {
                Outcome::NotTestable => AbfOutcome::NotTestable,
                Outcome::ForcesBelowCoherence => AbfOutcome::ForcesBelowCoherence,
                Outcome::ClassicalOnly => AbfOutcome::ClassicalOnly,
                Outcome::ClassicalAndDispersionless => AbfOutcome::ClassicalAndDispersionless,
                Outcome::ClassicalOnlySemiUnknown => AbfOutcome::ClassicalOnlySemiUnknown,
            },
        };
        write(out, regime, "out")
    })
}
