use std::f64::consts::PI;

use abforce::catalog::{self, ExperimentRecord, Provenance, RecordColumns};
use abforce::kinematics;
use abforce::units;
use abforce::{ElectronBeam, MagneticFlux};

use super::table1::load_catalog;
use super::SiEcho;
use crate::args::RegimesParams;
use crate::report::{strip_nulls, to_value, Cell, CliError, CliResult, Report, Table};

pub const REGIMES_HEADER: [&str; 14] = [
    "name",
    "y_e_m",
    "ab_phase_rad",
    "ab_phase_pi",
    "fringe_threshold_rad",
    "v_dt_classical_m",
    "v_dt_semiclassical_m",
    "coherence_length_m",
    "fringe_test_feasible",
    "classical_force_testable",
    "dispersionless_force_testable",
    "semiclassical_available",
    "outcome",
    "outcome_note",
];

fn custom_record(p: &RegimesParams) -> CliResult<Option<ExperimentRecord>> {
    let any = p.energy_kev.is_some()
        || p.lcoh_nm.is_some()
        || p.energy_spread_ev.is_some()
        || p.flux_gcm2.is_some();
    if !any {
        return Ok(None);
    }
    if p.record.is_some() {
        return Err(CliError::usage(
            "give either a record name or custom parameters, not both",
        ));
    }
    let missing =
        |k: &str, f: &str| CliError::usage(format!("custom experiment: missing {k} (--{f})"));
    let energy_kev = p
        .energy_kev
        .ok_or_else(|| missing("energy_keV", "energy-kev"))?;
    let flux_gcm2 = p
        .flux_gcm2
        .ok_or_else(|| missing("flux_Gcm2", "flux-gcm2"))?;
    let beam = ElectronBeam::from_energy_kev(energy_kev, None)?;
    let lcoh_m = match (p.lcoh_nm, p.energy_spread_ev) {
        (Some(l), None) => units::nm_to_m(l),
        (None, Some(de)) => {
            catalog::coherence_length(beam.kinetic_energy(), units::ev_to_joules(de))?
        }
        (Some(_), Some(_)) => {
            return Err(CliError::usage(
                "give only one of Lcoh_nm and energy_spread_eV",
            ))
        }
        (None, None) => {
            return Err(missing(
                "Lcoh_nm or energy_spread_eV",
                "lcoh-nm / --energy-spread-ev",
            ))
        }
    };
    let flux = MagneticFlux::from_gauss_cm2(flux_gcm2)?;
    let columns = RecordColumns {
        energy_kev,
        lambda_pm: units::m_to_pm(beam.debroglie_wavelength()),
        lcoh_nm: units::m_to_nm(lcoh_m),
        phase_pi: kinematics::ab_phase(flux) / PI,
        shift_nm: units::m_to_nm(beam.speed() * kinematics::classical_delay(flux, &beam)),
        flux_gcm2,
        ye_um: None,
    };
    Ok(Some(ExperimentRecord::new(
        "custom",
        columns,
        Provenance::User,
    )?))
}

pub fn regimes(p: RegimesParams) -> CliResult<Report> {
    let records = match custom_record(&p)? {
        Some(rec) => vec![rec],
        None => {
            let all = load_catalog(p.catalog.as_deref())?;
            match &p.record {
                None => all,
                Some(name) => match all.iter().find(|r| r.name().eq_ignore_ascii_case(name)) {
                    Some(r) => vec![r.clone()],
                    None => {
                        let names: Vec<_> = all.iter().map(|r| r.name().to_lowercase()).collect();
                        return Err(CliError::usage(format!(
                            "unknown record '{name}'; valid names: {}",
                            names.join(", ")
                        )));
                    }
                },
            }
        }
    };
    let ye_m = p.ye_um.map(units::um_to_m);

    let mut table = Table::new(REGIMES_HEADER);
    let mut warnings = Vec::new();
    for rec in &records {
        let r = catalog::classify_regime(rec, ye_m)?;
        for note in &r.notes {
            warnings.push(format!("{}: {note}", rec.name()));
        }
        table.push(vec![
            r.name.clone().into(),
            Cell::opt(r.impact_parameter),
            r.ab_phase.into(),
            (r.ab_phase / PI).into(),
            r.fringe_threshold.into(),
            r.v_dt_classical.into(),
            Cell::opt(r.v_dt_semiclassical),
            r.coherence_length.into(),
            r.fringe_test_feasible().into(),
            r.classical_force_testable().into(),
            r.dispersionless_force_testable()
                .map_or(Cell::Empty, Cell::Bool),
            r.v_dt_semiclassical.is_some().into(),
            r.outcome().to_string().into(),
            r.outcome_note().into(),
        ]);
    }

    let mut si = SiEcho::default();
    si.put("y_e_m", ye_m);
    Ok(Report {
        command: "regimes",
        parameters: strip_nulls(to_value(&p)),
        parameters_si: si.into_value(),
        results: table.to_json(),
        table,
        warnings,
    })
}
