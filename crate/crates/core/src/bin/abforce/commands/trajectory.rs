use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use abforce::integrator::{integrate_passage, IntegratorConfig, TailCorrection};
use abforce::kinematics::{self, PassageGeometry};
use abforce::units;
use abforce::{ElectronBeam, Error, TrajectoryResult};

use super::SiEcho;
use crate::args::{Format, OnOff, TrajectoryParams};
use crate::params::{require, resolve_flux};
use crate::report::{
    open_file, strip_nulls, to_value, write_json, CliError, CliResult, Quantities, Report, Sink,
    Table,
};

/// Sidecar path next to a CSV dump: `run.csv` gives `run.summary.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("summary.json")
}

pub fn trajectory(mut p: TrajectoryParams, sink: &Sink) -> CliResult<()> {
    let (flux, solenoid) = resolve_flux(&mut p.flux)?;
    let energy_kev = require(p.energy_kev, "energy_keV", "energy-kev")?;
    let ye_um = require(p.ye_um, "y_e_um", "ye-um")?;
    let beam = ElectronBeam::from_energy_kev(energy_kev, None)?;
    let geometry = PassageGeometry::new(units::um_to_m(ye_um))?;

    let defaults = IntegratorConfig::default();
    let cfg = IntegratorConfig {
        window_factor: *p.window_factor.get_or_insert(defaults.window_factor),
        relative_tolerance: *p.rtol.get_or_insert(defaults.relative_tolerance),
        absolute_tolerance_position: *p.atol_m.get_or_insert(defaults.absolute_tolerance_position),
        max_steps: *p.max_steps.get_or_insert(defaults.max_steps),
        tail_correction: match *p.tail_correction.get_or_insert(OnOff::On) {
            OnOff::On => TailCorrection::On,
            OnOff::Off => TailCorrection::Off,
        },
    };

    let mut warnings = Vec::new();
    let epsilon = kinematics::perturbation_strength(flux, &beam, geometry);
    warnings.extend(epsilon.warning().map(|w| w.to_string()));
    if let Some(s) = &solenoid {
        warnings.extend(geometry.check_outside(s).map(|w| w.to_string()));
    }

    let (result, failure) = match integrate_passage(flux, &beam, geometry, &cfg) {
        Ok(r) => (r, None),
        Err(Error::Convergence { reason, partial }) => {
            warnings.push(format!("integration failed: {reason}; output is partial"));
            (*partial, Some(reason))
        }
        Err(e) => return Err(e.into()),
    };

    let side = kinematics::side_displacement(flux, &beam, geometry);
    let rel = kinematics::relative_displacement(flux, &beam, geometry);
    let half_rel = geometry.side().sign() * rel.total / 2.0;
    let mut q = Quantities::default();
    summarize(&mut q, &result);
    q.put("analytic_side_first_order_m", side.first_order);
    q.put("analytic_side_total_m", side.total);
    q.put("analytic_half_relative_m", half_rel);
    if half_rel != 0.0 {
        q.put(
            "deviation_from_half_relative_dimless",
            (result.displacement_vs_free_flight - half_rel) / half_rel,
        );
    }
    q.put("completed", failure.is_none());

    let mut si = SiEcho::default();
    si.put("energy_J", Some(beam.kinetic_energy()));
    si.put("flux_Wb", Some(flux.webers()));
    si.put("y_e_m", Some(geometry.impact_parameter()));
    si.put(
        "half_window_m",
        Some(cfg.window_factor * geometry.distance()),
    );

    let report = Report {
        command: "trajectory",
        parameters: strip_nulls(to_value(&p)),
        parameters_si: si.into_value(),
        results: q.to_json(),
        table: Table::default(),
        warnings,
    };
    let ts = sink.timestamp.as_deref();
    let label = sink.path_label();
    let mut out = sink.open()?;
    let written = match sink.format {
        Format::Json => {
            let mut results = report.results.clone();
            results["samples"] = samples_json(&result);
            write_json(&mut out, &report.envelope(ts, results))
        }
        Format::Csv => report
            .write_csv_preamble(&mut out, ts)
            .and_then(|_| result.write_samples_csv(&mut out)),
    };
    written
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io(&label, e))?;

    if let (Format::Csv, Some(path)) = (sink.format, &sink.out) {
        let side_path = sidecar_path(path);
        let mut f = open_file(&side_path)?;
        write_json(&mut f, &report.envelope(ts, report.results.clone()))
            .and_then(|_| f.flush())
            .map_err(|e| CliError::io(&side_path, e))?;
    }

    match failure {
        None => Ok(()),
        Some(reason) => Err(Error::Convergence {
            reason,
            partial: Box::new(result),
        }
        .into()),
    }
}

fn summarize(q: &mut Quantities, r: &TrajectoryResult) {
    q.put("displacement_m", r.displacement_vs_free_flight);
    q.put("time_delay_s", r.time_delay);
    q.put("initial_speed_m_per_s", r.initial_speed);
    q.put("final_speed_m_per_s", r.final_speed);
    q.put("tail_correction_applied_m", r.tail_correction_applied);
    q.put("local_error_estimate_m", r.local_error_estimate);
    q.put("epsilon_dimless", r.epsilon.value());
    q.put("side", format!("{:?}", r.side).to_lowercase());
    q.put(
        "accepted_steps_count",
        crate::report::Cell::Int(r.accepted_steps),
    );
    q.put(
        "rejected_steps_count",
        crate::report::Cell::Int(r.rejected_steps),
    );
    q.put("samples_count", crate::report::Cell::Int(r.samples.len()));
}

fn samples_json(r: &TrajectoryResult) -> Value {
    Value::Array(
        r.samples
            .iter()
            .map(|s| json!({"t_s": s.t, "x_m": s.x, "v_m_per_s": s.v}))
            .collect(),
    )
}
