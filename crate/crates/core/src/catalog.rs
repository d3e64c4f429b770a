//! Historical and proposed AB interferometry experiments, and the feasibility
//! logic for testing whether the AB phase is dispersionless.
//!
//! Records keep the tabulated figures exactly as printed (keV, pm, nm,
//! π rad, G·cm², µm). SI values are available through accessors. Recomputed
//! columns never overwrite the stored ones; see [`verify_record`].

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::beam::ElectronBeam;
use crate::constants::PLANCK;
use crate::error::{Error, Result};
use crate::kinematics::{self, PassageGeometry};
use crate::solenoid::MagneticFlux;
use crate::units;

/// Largest relative deviation between a stored and a recomputed column that
/// is attributed to the table's rounding.
pub const VERIFY_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Catalog,
    #[default]
    User,
}

/// Numeric columns of one experiment, in tabulated units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecordColumns {
    #[serde(rename = "energy_keV")]
    pub energy_kev: f64,
    pub lambda_pm: f64,
    #[serde(rename = "Lcoh_nm")]
    pub lcoh_nm: f64,
    pub phase_pi: f64,
    pub shift_nm: f64,
    #[serde(rename = "flux_Gcm2")]
    pub flux_gcm2: f64,
    #[serde(rename = "y_e_um", default, skip_serializing_if = "Option::is_none")]
    pub ye_um: Option<f64>,
}

/// One row of the experiment comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRecord", into = "RawRecord")]
pub struct ExperimentRecord {
    name: String,
    columns: RecordColumns,
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct RawRecord {
    name: String,
    #[serde(flatten)]
    columns: RecordColumns,
    #[serde(default)]
    provenance: Provenance,
}

impl TryFrom<RawRecord> for ExperimentRecord {
    type Error = Error;

    fn try_from(raw: RawRecord) -> Result<Self> {
        ExperimentRecord::new(raw.name, raw.columns, raw.provenance)
    }
}

impl From<ExperimentRecord> for RawRecord {
    fn from(rec: ExperimentRecord) -> Self {
        RawRecord {
            name: rec.name,
            columns: rec.columns,
            provenance: rec.provenance,
        }
    }
}

fn check(name: &str, column: &str, value: f64, allow_zero: bool) -> Result<()> {
    let ok = value.is_finite() && (value > 0.0 || (allow_zero && value == 0.0));
    if ok {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "record '{name}': {column} must be {}, got {value}",
            if allow_zero {
                "nonnegative"
            } else {
                "positive"
            }
        )))
    }
}

impl ExperimentRecord {
    /// Energy, wavelength, coherence length and y_e must be positive. Flux,
    /// phase and shift may be zero (a no-flux control run).
    pub fn new(
        name: impl Into<String>,
        columns: RecordColumns,
        provenance: Provenance,
    ) -> Result<Self> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(Error::domain("record name must not be empty"));
        }
        let c = &columns;
        check(&name, "energy_keV", c.energy_kev, false)?;
        check(&name, "lambda_pm", c.lambda_pm, false)?;
        check(&name, "Lcoh_nm", c.lcoh_nm, false)?;
        check(&name, "phase_pi", c.phase_pi, true)?;
        check(&name, "shift_nm", c.shift_nm, true)?;
        check(&name, "flux_Gcm2", c.flux_gcm2, true)?;
        if let Some(ye) = c.ye_um {
            check(&name, "y_e_um", ye, false)?;
        }
        Ok(Self {
            name,
            columns,
            provenance,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn columns(&self) -> &RecordColumns {
        &self.columns
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Copy with a different impact parameter (µm).
    pub fn with_impact_parameter_um(&self, ye_um: Option<f64>) -> Result<Self> {
        let mut columns = self.columns;
        columns.ye_um = ye_um;
        Self::new(self.name.clone(), columns, self.provenance)
    }

    /// J
    pub fn electron_energy(&self) -> f64 {
        units::kev_to_joules(self.columns.energy_kev)
    }

    /// m
    pub fn debroglie_wavelength(&self) -> f64 {
        units::pm_to_m(self.columns.lambda_pm)
    }

    /// m
    pub fn coherence_length(&self) -> f64 {
        units::nm_to_m(self.columns.lcoh_nm)
    }

    /// rad
    pub fn phase_shift(&self) -> f64 {
        self.columns.phase_pi * PI
    }

    /// m
    pub fn relative_shift(&self) -> f64 {
        units::nm_to_m(self.columns.shift_nm)
    }

    pub fn magnetic_flux(&self) -> MagneticFlux {
        MagneticFlux::from_webers(units::flux_from_gauss_cm2(self.columns.flux_gcm2))
            .expect("validated at construction")
    }

    /// m
    pub fn impact_parameter(&self) -> Option<f64> {
        self.columns.ye_um.map(units::um_to_m)
    }

    pub fn beam(&self) -> ElectronBeam {
        ElectronBeam::from_energy(self.electron_energy(), None).expect("validated at construction")
    }
}

/// `[energy_keV, lambda_pm, Lcoh_nm, phase_pi, shift_nm, flux_Gcm2]`
fn row(name: &str, v: [f64; 6], ye_um: Option<f64>) -> ExperimentRecord {
    let [energy_kev, lambda_pm, lcoh_nm, phase_pi, shift_nm, flux_gcm2] = v;
    let columns = RecordColumns {
        energy_kev,
        lambda_pm,
        lcoh_nm,
        phase_pi,
        shift_nm,
        flux_gcm2,
        ye_um,
    };
    ExperimentRecord::new(name, columns, Provenance::Catalog).expect("builtin record")
}

/// The six experiments of the comparison table, in table order.
///
/// Only the proposed experiment has an impact parameter: 50 µm, half the
/// 100 µm arm separation around a 50 µm solenoid.
pub fn builtin_table1() -> Vec<ExperimentRecord> {
    vec![
        row("Chambers", [20.0, 8.7, 1200.0, 800.0, 3.5, 1.7e-4], None),
        row(
            "Mollenstedt",
            [40.0, 6.1, 1632.0, 2.0, 0.0061, 4.1e-7],
            None,
        ),
        row("Bayh", [40.0, 6.1, 1632.0, 2.0, 0.0061, 4.1e-7], None),
        row("Schaal", [50.0, 5.5, 1825.0, 40.0, 0.11, 4.1e-7], None),
        row("Tonomura", [150.0, 3.2, 3200.0, 5.5, 0.0088, 2.4e-6], None),
        row(
            "Proposed",
            [1.0, 39.0, 77.0, 48000.0, 940.0, 9.9e-3],
            Some(50.0),
        ),
    ]
}

/// Case-insensitive lookup in the builtin table.
pub fn find_builtin(name: &str) -> Result<ExperimentRecord> {
    let table = builtin_table1();
    table
        .iter()
        .find(|r| r.name().eq_ignore_ascii_case(name))
        .cloned()
        .ok_or_else(|| {
            let names: Vec<_> = table.iter().map(|r| r.name().to_lowercase()).collect();
            Error::domain(format!(
                "unknown record '{name}'; valid names: {}",
                names.join(", ")
            ))
        })
}

/// `L_coh = λ²/Δλ = (h/ΔE) √(2E/m)` (m), from energy and spread in J.
pub fn coherence_length(energy: f64, energy_spread: f64) -> Result<f64> {
    if !(energy_spread.is_finite() && energy_spread > 0.0) {
        return Err(Error::domain(format!(
            "energy spread must be positive and finite, got {energy_spread} J"
        )));
    }
    let beam = ElectronBeam::from_energy(energy, None)?;
    Ok(PLANCK * beam.speed() / energy_spread)
}

/// Energy spread (J) implied by a record's energy and coherence length.
pub fn derived_energy_spread(rec: &ExperimentRecord) -> f64 {
    PLANCK * rec.beam().speed() / rec.coherence_length()
}

/// A stored column next to its recomputed value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnCheck {
    pub stored: f64,
    pub computed: f64,
    /// `(computed − stored)/stored`; absent when stored is zero and computed is not.
    pub relative_deviation: Option<f64>,
}

impl ColumnCheck {
    fn new(stored: f64, computed: f64) -> Self {
        let relative_deviation = if stored != 0.0 {
            Some((computed - stored) / stored)
        } else if computed == 0.0 {
            Some(0.0)
        } else {
            None
        };
        Self {
            stored,
            computed,
            relative_deviation,
        }
    }

    /// True when the deviation exceeds [`VERIFY_TOLERANCE`] or is undefined.
    pub fn is_flagged(&self) -> bool {
        self.relative_deviation
            .is_none_or(|d| d.abs() > VERIFY_TOLERANCE)
    }
}

/// Cross-column consistency of one record, in the record's units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordCheck {
    pub name: String,
    /// pm, from the energy.
    pub lambda_pm: ColumnCheck,
    /// π rad, from the flux.
    pub phase_pi: ColumnCheck,
    /// nm, leading-order relative displacement from flux and energy.
    pub shift_nm: ColumnCheck,
}

impl RecordCheck {
    pub fn flagged_columns(&self) -> Vec<&'static str> {
        [
            ("lambda_pm", &self.lambda_pm),
            ("phase_pi", &self.phase_pi),
            ("shift_nm", &self.shift_nm),
        ]
        .into_iter()
        .filter(|(_, c)| c.is_flagged())
        .map(|(n, _)| n)
        .collect()
    }
}

/// Recomputes wavelength, AB phase and classical shift from the energy and
/// flux columns. The first-order shift does not depend on y_e.
pub fn verify_record(rec: &ExperimentRecord) -> RecordCheck {
    let beam = rec.beam();
    let flux = rec.magnetic_flux();
    let c = rec.columns();
    let lambda = units::m_to_pm(beam.debroglie_wavelength());
    let phase = kinematics::ab_phase(flux) / PI;
    let shift = units::m_to_nm(beam.speed() * kinematics::classical_delay(flux, &beam));
    RecordCheck {
        name: rec.name().to_string(),
        lambda_pm: ColumnCheck::new(c.lambda_pm, lambda),
        phase_pi: ColumnCheck::new(c.phase_pi, phase),
        shift_nm: ColumnCheck::new(c.shift_nm, shift),
    }
}

/// Feasibility of the fringe test and what its outcome could rule out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub name: String,
    /// AB phase from the flux (rad).
    pub ab_phase: f64,
    /// Phase the AB shift must exceed, 2π L_coh/λ (rad).
    pub fringe_threshold: f64,
    /// m
    pub v_dt_classical: f64,
    /// m; absent without an impact parameter.
    pub v_dt_semiclassical: Option<f64>,
    /// m
    pub coherence_length: f64,
    /// m
    pub impact_parameter: Option<f64>,
    pub notes: Vec<String>,
}

/// Which of the three interpretations a fringe observation could separate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// φ_AB below the threshold: fringes stay inside the coherence length.
    NotTestable,
    /// Fringes beyond L_coh are possible but neither force leaves a detectable delay.
    ForcesBelowCoherence,
    /// Classical forces are ruled out by fringes; dispersionless forces are not (option C).
    ClassicalOnly,
    /// Fringes would rule out both classical and dispersionless forces.
    ClassicalAndDispersionless,
    /// Classical testable status known, dispersionless unknown (no y_e).
    ClassicalOnlySemiUnknown,
}

impl RegimeReport {
    pub fn fringe_test_feasible(&self) -> bool {
        self.ab_phase > self.fringe_threshold
    }

    pub fn classical_force_testable(&self) -> bool {
        self.v_dt_classical > self.coherence_length
    }

    /// None when the impact parameter is unknown.
    pub fn dispersionless_force_testable(&self) -> Option<bool> {
        self.v_dt_semiclassical.map(|s| s > self.coherence_length)
    }

    pub fn outcome(&self) -> Outcome {
        if !self.fringe_test_feasible() {
            return Outcome::NotTestable;
        }
        match (
            self.classical_force_testable(),
            self.dispersionless_force_testable(),
        ) {
            (false, _) => Outcome::ForcesBelowCoherence,
            (true, Some(true)) => Outcome::ClassicalAndDispersionless,
            (true, Some(false)) => Outcome::ClassicalOnly,
            (true, None) => Outcome::ClassicalOnlySemiUnknown,
        }
    }

    pub fn outcome_note(&self) -> String {
        match self.outcome() {
            Outcome::NotTestable => format!(
                "phi_AB = {:.3e} rad does not exceed 2 pi L_coh/lambda = {:.3e} rad: \
                 fringes cannot be followed beyond the coherence length, so outcomes A and B \
                 cannot be told apart",
                self.ab_phase, self.fringe_threshold
            ),
            Outcome::ForcesBelowCoherence => "fringes beyond the coherence length would support \
                 outcome A over B, but v dt_clas < L_coh, so neither classical nor \
                 dispersionless forces are ruled out"
                .into(),
            Outcome::ClassicalOnly => "outcome C regime: v dt_clas > L_coh but v dt_semi < L_coh; \
                 observation of fringes rules out classical forces, but not the existence of \
                 semi classical forces"
                .into(),
            Outcome::ClassicalAndDispersionless => "v dt_clas > L_coh and v dt_semi > L_coh: \
                 observation of fringes rules out both classical and dispersionless forces \
                 (A versus B and C)"
                .into(),
            Outcome::ClassicalOnlySemiUnknown => "v dt_clas > L_coh: observation of fringes rules \
                 out classical forces; the dispersionless branch needs an impact parameter"
                .into(),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Outcome::NotTestable => "not_testable",
            Outcome::ForcesBelowCoherence => "forces_below_coherence",
            Outcome::ClassicalOnly => "classical_only",
            Outcome::ClassicalAndDispersionless => "classical_and_dispersionless",
            Outcome::ClassicalOnlySemiUnknown => "classical_only_semi_unknown",
        };
        f.write_str(s)
    }
}

/// Evaluates the fringe condition and both delay lengths against the stored
/// coherence length. `impact_parameter` (m) overrides the record's y_e.
pub fn classify_regime(
    rec: &ExperimentRecord,
    impact_parameter: Option<f64>,
) -> Result<RegimeReport> {
    let beam = rec.beam();
    let flux = rec.magnetic_flux();
    let lcoh = rec.coherence_length();
    let ye = impact_parameter.or(rec.impact_parameter());
    let mut notes = Vec::new();
    let v_dt_semi = match ye {
        Some(y) => {
            let geom = PassageGeometry::new(y)?;
            let eps = kinematics::perturbation_strength(flux, &beam, geom);
            if let Some(w) = eps.warning() {
                notes.push(w.to_string());
            }
            Some(beam.speed() * kinematics::semiclassical_delay(flux, &beam, geom))
        }
        None => {
            notes.push("no impact parameter: semi-classical delay unavailable".into());
            None
        }
    };
    Ok(RegimeReport {
        name: rec.name().to_string(),
        ab_phase: kinematics::ab_phase(flux),
        fringe_threshold: 2.0 * PI * lcoh / beam.debroglie_wavelength(),
        v_dt_classical: beam.speed() * kinematics::classical_delay(flux, &beam),
        v_dt_semiclassical: v_dt_semi,
        coherence_length: lcoh,
        impact_parameter: ye,
        notes,
    })
}

/// Pretty-printed JSON array of records.
pub fn export_json(records: &[ExperimentRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

pub fn import_json(text: &str) -> Result<Vec<ExperimentRecord>> {
    serde_json::from_str(text).map_err(|e| Error::domain(format!("catalog JSON: {e}")))
}
