use rayon::prelude::*;

use abforce::integrator::{numeric_relative_displacement, IntegratorConfig};
use abforce::kinematics::{self, PassageGeometry};
use abforce::units;
use abforce::{ElectronBeam, Error, Solenoid};

use super::SiEcho;
use crate::args::{CoreMode, SweepOutput, SweepParams};
use crate::params::{require, DEFAULT_N_PER_MM, DEFAULT_SOLENOID_R_MM};
use crate::report::{strip_nulls, to_value, Cell, CliResult, Report, Table};

pub const DEFAULT_MU_R_CORE: f64 = 150.0;
pub const DEFAULT_STEPS: usize = 11;

impl CoreMode {
    fn label(self) -> &'static str {
        match self {
            CoreMode::WithCore => "with_core",
            CoreMode::WithoutCore => "without_core",
        }
    }
}

struct Cellset {
    cells: Vec<Cell>,
    warnings: Vec<String>,
}

pub fn sweep(mut p: SweepParams) -> CliResult<Report> {
    let energy_kev = require(p.energy_kev, "energy_keV", "energy-kev")?;
    let ye_um = require(p.ye_um, "y_e_um", "ye-um")?;
    let i_max = require(p.current_max, "current_max_A", "current-max")?;
    let i_min = *p.current_min.get_or_insert(0.0);
    let steps = *p.steps.get_or_insert(DEFAULT_STEPS);
    let mu_core = *p.mu_r_core.get_or_insert(DEFAULT_MU_R_CORE);
    let r_mm = *p.solenoid_r_mm.get_or_insert(DEFAULT_SOLENOID_R_MM);
    let n_per_mm = *p.n_per_mm.get_or_insert(DEFAULT_N_PER_MM);
    let modes = p
        .modes
        .get_or_insert_with(|| vec![CoreMode::WithCore, CoreMode::WithoutCore])
        .clone();
    let outputs = p
        .outputs
        .get_or_insert_with(|| {
            vec![
                SweepOutput::Classical,
                SweepOutput::Semiclassical,
                SweepOutput::Numeric,
            ]
        })
        .clone();

    if !(i_min.is_finite() && i_max.is_finite() && i_min >= 0.0 && i_max > i_min) {
        return Err(Error::Domain(format!(
            "current range needs 0 <= current_min_A < current_max_A, got [{i_min}, {i_max}]"
        ))
        .into());
    }
    if steps < 2 {
        return Err(Error::Domain(format!("steps_count must be >= 2, got {steps}")).into());
    }
    if modes.is_empty() || outputs.is_empty() {
        return Err(Error::Domain("modes and outputs must not be empty".into()).into());
    }

    let beam = ElectronBeam::from_energy_kev(energy_kev, None)?;
    let geometry = PassageGeometry::new(units::um_to_m(ye_um))?;
    let base = Solenoid::new(
        units::mm_to_m(r_mm),
        units::per_mm_to_per_m(n_per_mm),
        0.0,
        1.0,
    )?;
    let mut warnings = Vec::new();
    warnings.extend(geometry.check_outside(&base).map(|w| w.to_string()));

    let mut header = vec!["current_A".to_string()];
    for m in &modes {
        let l = m.label();
        header.push(format!("{l}_B_T"));
        header.push(format!("{l}_flux_Wb"));
        for o in &outputs {
            header.push(match o {
                SweepOutput::Classical => format!("{l}_dt_classical_s"),
                SweepOutput::Semiclassical => format!("{l}_dt_semiclassical_s"),
                SweepOutput::Numeric => format!("{l}_dt_numeric_s"),
            });
        }
    }

    let cfg = IntegratorConfig::default();
    let currents: Vec<f64> = (0..steps)
        .map(|i| {
            if i == steps - 1 {
                i_max
            } else {
                i_min + (i_max - i_min) * i as f64 / (steps - 1) as f64
            }
        })
        .collect();
    let rows: Vec<CliResult<Cellset>> = currents
        .par_iter()
        .enumerate()
        .map(|(i, &current)| {
            let mut cells = vec![Cell::Num(current)];
            let mut row_warnings = Vec::new();
            for &m in &modes {
                let mu = match m {
                    CoreMode::WithCore => mu_core,
                    CoreMode::WithoutCore => 1.0,
                };
                let s = base.with_current(current)?.with_relative_permeability(mu)?;
                let flux = s.flux();
                cells.push(s.field().into());
                cells.push(flux.webers().into());
                let eps = kinematics::perturbation_strength(flux, &beam, geometry);
                if let Some(w) = eps.warning() {
                    row_warnings.push(format!("row {i} ({}): {w}", m.label()));
                }
                for o in &outputs {
                    cells.push(match o {
                        SweepOutput::Classical => kinematics::classical_delay(flux, &beam).into(),
                        SweepOutput::Semiclassical => {
                            kinematics::semiclassical_delay(flux, &beam, geometry).into()
                        }
                        SweepOutput::Numeric => {
                            match numeric_relative_displacement(flux, &beam, geometry, &cfg) {
                                Ok(d) => Cell::Num(d / beam.speed()),
                                Err(e) => {
                                    row_warnings.push(format!(
                                        "row {i} (current_A = {current:e}, {}): numeric delay \
                                         unavailable: {e}",
                                        m.label()
                                    ));
                                    Cell::Empty
                                }
                            }
                        }
                    });
                }
            }
            Ok(Cellset {
                cells,
                warnings: row_warnings,
            })
        })
        .collect();

    let mut table = Table::new(header);
    for row in rows {
        let row = row?;
        warnings.extend(row.warnings);
        table.push(row.cells);
    }

    let mut si = SiEcho::default();
    si.put("energy_J", Some(beam.kinetic_energy()));
    si.put("y_e_m", Some(geometry.impact_parameter()));
    si.put("solenoid_r_m", Some(base.radius()));
    si.put("n_per_m", Some(base.winding_density()));
    Ok(Report {
        command: "sweep",
        parameters: strip_nulls(to_value(&p)),
        parameters_si: si.into_value(),
        results: table.to_json(),
        table,
        warnings,
    })
}
