use std::fs;
use std::path::Path;

use serde_json::json;

use abforce::catalog::{self, ExperimentRecord};
use abforce::units;

use crate::args::Table1Params;
use crate::report::{strip_nulls, to_value, Cell, CliError, CliResult, Report, Table};

/// Fixed CSV header of the `table1` command.
pub const TABLE1_HEADER: [&str; 17] = [
    "name",
    "provenance",
    "energy_keV",
    "lambda_pm",
    "Lcoh_nm",
    "phase_pi",
    "shift_nm",
    "flux_Gcm2",
    "y_e_um",
    "lambda_computed_pm",
    "phase_computed_pi",
    "shift_computed_nm",
    "lambda_deviation_dimless",
    "phase_deviation_dimless",
    "shift_deviation_dimless",
    "energy_spread_eV",
    "flagged",
];

pub fn load_catalog(path: Option<&Path>) -> CliResult<Vec<ExperimentRecord>> {
    match path {
        None => Ok(catalog::builtin_table1()),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            Ok(catalog::import_json(&text)?)
        }
    }
}

pub fn table1(p: Table1Params) -> CliResult<Report> {
    let records = load_catalog(p.catalog.as_deref())?;
    let mut table = Table::new(TABLE1_HEADER);
    let mut checks = Vec::new();
    let mut warnings = Vec::new();
    for rec in &records {
        let check = catalog::verify_record(rec);
        let flagged = check.flagged_columns();
        if !flagged.is_empty() {
            warnings.push(format!(
                "{}: {} deviate from the recomputed values by more than {}%",
                rec.name(),
                flagged.join(", "),
                catalog::VERIFY_TOLERANCE * 100.0
            ));
        }
        let spread_ev = units::joules_to_ev(catalog::derived_energy_spread(rec));
        let c = rec.columns();
        table.push(vec![
            rec.name().into(),
            to_value(&rec.provenance())
                .as_str()
                .unwrap_or_default()
                .into(),
            c.energy_kev.into(),
            c.lambda_pm.into(),
            c.lcoh_nm.into(),
            c.phase_pi.into(),
            c.shift_nm.into(),
            c.flux_gcm2.into(),
            Cell::opt(c.ye_um),
            check.lambda_pm.computed.into(),
            check.phase_pi.computed.into(),
            check.shift_nm.computed.into(),
            Cell::opt(check.lambda_pm.relative_deviation),
            Cell::opt(check.phase_pi.relative_deviation),
            Cell::opt(check.shift_nm.relative_deviation),
            spread_ev.into(),
            flagged.join(";").into(),
        ]);
        checks.push(json!({
            "name": check.name,
            "lambda_computed_pm": check.lambda_pm.computed,
            "phase_computed_pi": check.phase_pi.computed,
            "shift_computed_nm": check.shift_nm.computed,
            "lambda_deviation_dimless": check.lambda_pm.relative_deviation,
            "phase_deviation_dimless": check.phase_pi.relative_deviation,
            "shift_deviation_dimless": check.shift_nm.relative_deviation,
            "energy_spread_eV": spread_ev,
            "flagged_columns": flagged,
        }));
    }
    Ok(Report {
        command: "table1",
        parameters: strip_nulls(to_value(&p)),
        parameters_si: json!({}),
        results: json!({ "records": records, "checks": checks }),
        table,
        warnings,
    })
}
