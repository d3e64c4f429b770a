use std::f64::consts::PI;

use abforce::catalog::coherence_length;
use abforce::kinematics::{self, PassageGeometry};
use abforce::units;
use abforce::ElectronBeam;

use super::SiEcho;
use crate::args::AnalyticParams;
use crate::params::{require, resolve_flux};
use crate::report::{strip_nulls, to_value, CliResult, Quantities, Report};

pub fn analytic(mut p: AnalyticParams) -> CliResult<Report> {
    let (flux, solenoid) = resolve_flux(&mut p.flux)?;
    let energy_kev = require(p.energy_kev, "energy_keV", "energy-kev")?;
    let beam = ElectronBeam::from_energy_kev(energy_kev, p.energy_spread_ev)?;
    let geometry = p
        .ye_um
        .map(|y| PassageGeometry::new(units::um_to_m(y)))
        .transpose()?;
    let mut warnings = Vec::new();

    let mut q = Quantities::default();
    q.put("energy_J", beam.kinetic_energy());
    q.put("energy_keV", energy_kev);
    q.put("speed_m_per_s", beam.speed());
    q.put("lambda_m", beam.debroglie_wavelength());
    q.put("lambda_pm", units::m_to_pm(beam.debroglie_wavelength()));
    q.put("wavevector_per_m", beam.wavevector());
    if let Some(s) = &solenoid {
        q.put("field_T", s.field());
        q.put("area_m2", s.area());
    }
    q.put("flux_Wb", flux.webers());
    q.put("flux_Gcm2", flux.gauss_cm2());
    let phi_ab = kinematics::ab_phase(flux);
    q.put("ab_phase_rad", phi_ab);
    q.put("ab_phase_pi", phi_ab / PI);
    let dt_clas = kinematics::classical_delay(flux, &beam);
    let lead = beam.speed() * dt_clas;
    q.put("relative_shift_first_order_m", lead);
    q.put("relative_shift_first_order_nm", units::m_to_nm(lead));
    q.put("classical_delay_s", dt_clas);
    q.put("v_dt_classical_m", lead);

    match geometry {
        Some(g) => {
            let side = kinematics::side_displacement(flux, &beam, g);
            let rel = kinematics::relative_displacement(flux, &beam, g);
            let phase = kinematics::semiclassical_phase(flux, &beam, g);
            let envelope = kinematics::envelope_shift(flux, &beam, g);
            let dt_semi = kinematics::semiclassical_delay(flux, &beam, g);
            q.put("y_e_m", g.impact_parameter());
            q.put("side", format!("{:?}", g.side()).to_lowercase());
            q.put("epsilon_dimless", side.epsilon.value());
            q.put("side_shift_first_order_m", side.first_order);
            q.put("side_shift_second_order_m", side.second_order);
            q.put("side_shift_total_m", side.total);
            q.put("relative_shift_second_order_m", rel.second_order);
            q.put("relative_shift_total_m", rel.total);
            q.put("relative_shift_total_nm", units::m_to_nm(rel.total));
            q.put("phase_dispersionless_rad", phase.dispersionless_term);
            q.put("phase_dispersive_rad", phase.dispersive_term);
            q.put("phase_total_rad", phase.total);
            q.put("phase_total_pi", phase.total / PI);
            q.put("envelope_shift_m", envelope);
            q.put("envelope_shift_nm", units::m_to_nm(envelope));
            q.put("semiclassical_delay_s", dt_semi);
            q.put("v_dt_semiclassical_m", beam.speed() * dt_semi);
            warnings.extend(side.warning().map(|w| w.to_string()));
            if let Some(s) = &solenoid {
                warnings.extend(g.check_outside(s).map(|w| w.to_string()));
            }
        }
        None => warnings
            .push("y_e_um not given: impact-parameter dependent quantities omitted".to_string()),
    }
    if let Some(spread) = beam.energy_spread() {
        let lcoh = coherence_length(beam.kinetic_energy(), spread)?;
        q.put("coherence_length_m", lcoh);
        q.put("coherence_length_nm", units::m_to_nm(lcoh));
        q.put(
            "fringe_threshold_rad",
            2.0 * PI * lcoh / beam.debroglie_wavelength(),
        );
    }

    let mut si = SiEcho::default();
    si.put("energy_J", Some(beam.kinetic_energy()));
    si.put("energy_spread_J", beam.energy_spread());
    si.put("flux_Wb", Some(flux.webers()));
    si.put("y_e_m", geometry.map(|g| g.impact_parameter()));
    if let Some(s) = &solenoid {
        si.put("current_A", Some(s.current()));
        si.put("solenoid_r_m", Some(s.radius()));
        si.put("n_per_m", Some(s.winding_density()));
        si.put("mu_r_dimless", Some(s.relative_permeability()));
    }

    Ok(Report {
        command: "analytic",
        parameters: strip_nulls(to_value(&p)),
        parameters_si: si.into_value(),
        results: q.to_json(),
        table: q.to_table(),
        warnings,
    })
}
