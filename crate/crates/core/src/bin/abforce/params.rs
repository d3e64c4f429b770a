//! Config loading, precedence merging and shared parameter resolution.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use abforce::units;
use abforce::{MagneticFlux, Solenoid};

use crate::args::FluxParams;
use crate::report::{to_value, CliError, CliResult};

/// Default solenoid when only a current is given: 2.5 mm diameter, 3 turns/mm, no core.
pub const DEFAULT_SOLENOID_R_MM: f64 = 1.25;
pub const DEFAULT_N_PER_MM: f64 = 3.0;
pub const DEFAULT_MU_R: f64 = 1.0;

/// Reads a parameter object, or the `parameters` of a whole report.
pub fn load_config(path: &Path, command: &str) -> CliResult<Map<String, Value>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("{}: invalid JSON: {e}", path.display())))?;
    let Value::Object(mut obj) = value else {
        return Err(CliError::usage(format!(
            "{}: config must be a JSON object",
            path.display()
        )));
    };
    if let Some(Value::Object(params)) = obj.remove("parameters") {
        if let Some(cmd) = obj.get("command").and_then(Value::as_str) {
            if cmd != command {
                return Err(CliError::usage(format!(
                    "{}: report is for '{cmd}', not '{command}'",
                    path.display()
                )));
            }
        }
        return Ok(params);
    }
    Ok(obj)
}

/// Flags override config values; unset flags fall through. Unknown config keys are rejected.
pub fn merge<T>(flags: &T, config: Option<&Map<String, Value>>) -> CliResult<T>
where
    T: Serialize + DeserializeOwned + Default + Clone,
{
    let Some(config) = config else {
        return Ok(flags.clone());
    };
    let Value::Object(known) = to_value(&T::default()) else {
        unreachable!("parameter structs serialize to objects")
    };
    if let Some(bad) = config.keys().find(|k| !known.contains_key(*k)) {
        let mut names: Vec<_> = known.keys().cloned().collect();
        names.sort();
        return Err(CliError::usage(format!(
            "unknown config key '{bad}'; expected one of: {}",
            names.join(", ")
        )));
    }
    let mut merged = config.clone();
    if let Value::Object(set) = to_value(flags) {
        for (k, v) in set {
            if !v.is_null() {
                merged.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(merged))
        .map_err(|e| CliError::usage(format!("config: {e}")))
}

pub fn require<T: Copy>(v: Option<T>, key: &str, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::usage(format!("missing {key} (--{flag})")))
}

/// Flux from exactly one of flux_Gcm2, flux_Wb or a solenoid current.
/// Fills solenoid defaults back into `p` so the echo replays exactly.
pub fn resolve_flux(p: &mut FluxParams) -> CliResult<(MagneticFlux, Option<Solenoid>)> {
    let given = [
        p.flux_gcm2.is_some(),
        p.flux_wb.is_some(),
        p.current.is_some(),
    ];
    match given.iter().filter(|g| **g).count() {
        0 => {
            return Err(CliError::usage(
                "missing flux: give one of flux_Gcm2 (--flux-gcm2), flux_Wb (--flux-wb) \
                 or current_A (--current)",
            ))
        }
        1 => {}
        _ => {
            return Err(CliError::usage(
                "give only one of flux_Gcm2, flux_Wb or current_A",
            ))
        }
    }
    let geometry_given = p.solenoid_r_mm.is_some() || p.n_per_mm.is_some() || p.mu_r.is_some();
    if let Some(current) = p.current {
        let r_mm = *p.solenoid_r_mm.get_or_insert(DEFAULT_SOLENOID_R_MM);
        let n = *p.n_per_mm.get_or_insert(DEFAULT_N_PER_MM);
        let mu = *p.mu_r.get_or_insert(DEFAULT_MU_R);
        let s = Solenoid::new(units::mm_to_m(r_mm), units::per_mm_to_per_m(n), current, mu)?;
        return Ok((s.flux(), Some(s)));
    }
    if geometry_given {
        return Err(CliError::usage(
            "solenoid geometry (solenoid_r_mm, n_per_mm, mu_r_dimless) needs current_A",
        ));
    }
    let flux = match (p.flux_gcm2, p.flux_wb) {
        (Some(g), _) => MagneticFlux::from_gauss_cm2(g)?,
        (_, Some(w)) => MagneticFlux::from_webers(w)?,
        _ => unreachable!(),
    };
    Ok((flux, None))
}
