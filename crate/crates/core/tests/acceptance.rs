//! Acceptance criteria, one line each. Every quantity is checked against an
//! oracle computed here from CODATA constants, not against the library's own
//! helpers. Exits non-zero when any criterion fails.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::process::{Command, ExitCode};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use abforce::catalog::{self, Outcome};
use abforce::integrator::{extract_second_order, integrate_passage, numeric_relative_displacement};
use abforce::kinematics;
use abforce::{
    ElectronBeam, IntegratorConfig, MagneticFlux, PassageGeometry, Solenoid, TailCorrection,
};

const E: f64 = 1.602_176_634e-19;
const M: f64 = 9.109_383_701_5e-31;
const H: f64 = 6.626_070_15e-34;
const HBAR: f64 = H / (2.0 * PI);

fn speed(energy_j: f64) -> f64 {
    (2.0 * energy_j / M).sqrt()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn flux(wb: f64) -> MagneticFlux {
    MagneticFlux::from_webers(wb).unwrap()
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

/// log-uniform on [lo, hi]
fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

/// Flux giving perturbation strength `eps` for energy (keV) and |y| (m).
fn flux_for_epsilon(eps: f64, kev: f64, y: f64) -> f64 {
    eps * 2.0 * PI * M * speed(kev * 1e3 * E) * y / E
}

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Verdict {
    let detail: String = detail.into();
    Verdict {
        pass,
        detail: detail.split_whitespace().collect::<Vec<_>>().join(" "),
    }
}

fn from_run(r: Result<(), impl std::fmt::Display>, ok: String) -> Verdict {
    match r {
        Ok(()) => outcome(true, ok),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn table1_reproduction() -> Verdict {
    let mut failures = Vec::new();
    let mut computed = Vec::new();
    let mut schaal_flagged = false;
    for rec in catalog::builtin_table1() {
        let c = rec.columns();
        let ek = c.energy_kev * 1e3 * E;
        let v = speed(ek);
        let wb = c.flux_gcm2 * 1e-8;
        let lambda_pm = H / (M * v) * 1e12;
        let phase_pi = E * wb / HBAR / PI;
        let shift_nm = E * wb / (M * v) * 1e9;

        let check = catalog::verify_record(&rec);
        for (lib, oracle) in [
            (check.lambda_pm.computed, lambda_pm),
            (check.phase_pi.computed, phase_pi),
            (check.shift_nm.computed, shift_nm),
        ] {
            if rel(lib, oracle) > 1e-12 {
                failures.push(format!("{}: library {lib} vs oracle {oracle}", rec.name()));
            }
        }

        let dev = |stored: f64, got: f64| rel(got, stored);
        if dev(c.lambda_pm, lambda_pm) > 0.05 {
            failures.push(format!(
                "{} lambda {lambda_pm:.3} pm vs {}",
                rec.name(),
                c.lambda_pm
            ));
        }
        if rec.name() == "Schaal" {
            schaal_flagged = check.phase_pi.is_flagged() && dev(c.phase_pi, phase_pi) > 0.05;
            continue;
        }
        for (col, stored, got) in [
            ("phase", c.phase_pi, phase_pi),
            ("shift", c.shift_nm, shift_nm),
        ] {
            if dev(stored, got) > 0.05 {
                failures.push(format!(
                    "{} {col} {got:.4} vs stored {stored} ({:+.0}%)",
                    rec.name(),
                    100.0 * (got - stored) / stored
                ));
            }
        }
        computed.push(format!(
            "{} shift {shift_nm:.4} nm phase {phase_pi:.4}pi",
            rec.name()
        ));
    }
    if !schaal_flagged {
        failures.push("Schaal phase not flagged".into());
    }
    if failures.is_empty() {
        outcome(true, format!("Schaal flagged; {}", computed.join("; ")))
    } else {
        outcome(false, failures.join("; "))
    }
}

fn feasibility_numbers() -> Verdict {
    let tono = catalog::find_builtin("Tonomura").unwrap();
    let proposed = catalog::find_builtin("Proposed").unwrap();

    let c = tono.columns();
    let v = speed(c.energy_kev * 1e3 * E);
    let tono_vdt = E * c.flux_gcm2 * 1e-8 / (M * v);
    let c = proposed.columns();
    let v = speed(c.energy_kev * 1e3 * E);
    let wb = c.flux_gcm2 * 1e-8;
    let prop_vdt = E * wb / (M * v);
    let y = 50e-6;
    let prop_semi = (E * wb / 2.0).powi(2) / ((M * v).powi(2) * PI * y);
    let lcoh = 77e-9;

    let r_tono = catalog::classify_regime(&tono, None).unwrap();
    let r_prop = catalog::classify_regime(&proposed, Some(y)).unwrap();
    let mut failures = Vec::new();
    if !(1.5e-11..=2.5e-11).contains(&tono_vdt) {
        failures.push(format!(
            "Tonomura v dt_clas {tono_vdt:.3e} m outside [1.5, 2.5]e-11"
        ));
    }
    if prop_vdt <= lcoh {
        failures.push(format!("Proposed v dt_clas {prop_vdt:.3e} m <= L_coh"));
    }
    if !(1e-9..=2e-9).contains(&prop_semi) || prop_semi >= lcoh {
        failures.push(format!(
            "Proposed v dt_semi {prop_semi:.3e} m outside [1, 2]e-9"
        ));
    }
    for (name, lib, oracle) in [
        ("Tonomura v dt_clas", r_tono.v_dt_classical, tono_vdt),
        ("Proposed v dt_clas", r_prop.v_dt_classical, prop_vdt),
        (
            "Proposed v dt_semi",
            r_prop.v_dt_semiclassical.unwrap_or(f64::NAN),
            prop_semi,
        ),
    ] {
        if rel(lib, oracle).is_nan() || rel(lib, oracle) > 1e-12 {
            failures.push(format!("{name}: library {lib:e} vs oracle {oracle:e}"));
        }
    }
    if r_prop.outcome() != Outcome::ClassicalOnly || !r_prop.fringe_test_feasible() {
        failures.push(format!("Proposed classified as {}", r_prop.outcome()));
    }
    if failures.is_empty() {
        outcome(
            true,
            format!(
                "Tonomura v dt_clas {tono_vdt:.3e} m; Proposed v dt_clas {prop_vdt:.3e} m > \
                 L_coh; v dt_semi {prop_semi:.3e} m < L_coh; outcome {}",
                r_prop.outcome()
            ),
        )
    } else {
        outcome(false, failures.join("; "))
    }
}

fn numeric_vs_relative_expansion() -> Verdict {
    let cfg = IntegratorConfig::default();
    let worst = RefCell::new((0.0_f64, 0.0_f64));
    let strat = (
        log_uniform(1e-6, 1e-3),
        1.0..300.0_f64,
        log_uniform(1e-6, 1e-3),
    );
    let r = runner(24).run(&strat, |(eps, kev, y)| {
        let beam = ElectronBeam::from_energy_kev(kev, None).unwrap();
        let wb = flux_for_epsilon(eps, kev, y);
        let v = beam.speed();
        let lead = E * wb / (2.0 * M * v);
        let eq6 = E * wb / (M * v) - lead * lead / (PI * y);
        let num =
            numeric_relative_displacement(flux(wb), &beam, PassageGeometry::new(y).unwrap(), &cfg)
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let d = rel(num, eq6);
        let mut w = worst.borrow_mut();
        if d > w.0 {
            *w = (d, eps);
        }
        prop_assert!(d < 1e-5, "eps {eps:.3e}: relative deviation {d:.3e}");
        Ok(())
    });
    let (d, eps) = *worst.borrow();
    match r {
        Ok(()) => outcome(true, format!("24 cases, worst {d:.2e} at eps {eps:.2e}")),
        Err(e) => outcome(
            false,
            format!("{e}; worst seen {d:.2e} at eps {eps:.2e} (deviation tracks eps/2)"),
        ),
    }
}

fn second_order_extraction() -> Verdict {
    let cfg = IntegratorConfig::default();
    let worst = RefCell::new(0.0_f64);
    let strat = (
        log_uniform(1e-4, 1e-2),
        1.0..300.0_f64,
        log_uniform(1e-6, 1e-3),
    );
    let r = runner(10).run(&strat, |(eps, kev, y)| {
        let beam = ElectronBeam::from_energy_kev(kev, None).unwrap();
        let wb = flux_for_epsilon(eps, kev, y);
        let lead = E * wb / (2.0 * M * beam.speed());
        let eq5 = -lead * lead / (2.0 * PI * y);
        let got = extract_second_order(flux(wb), &beam, PassageGeometry::new(y).unwrap(), &cfg)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let d = rel(got, eq5);
        let mut w = worst.borrow_mut();
        *w = w.max(d);
        prop_assert!(d < 0.01, "eps {eps:.3e}: {got:e} vs {eq5:e}");
        Ok(())
    });
    let ok = format!("10 cases, worst {:.2e}", *worst.borrow());
    from_run(r, ok)
}

fn dispersionless_invariant() -> Verdict {
    let worst = RefCell::new(0.0_f64);
    let strat = (
        log_uniform(1e6, 1e8),
        log_uniform(1e-16, 1e-10),
        log_uniform(1e-6, 1e-3),
    );
    let r = runner(256).run(&strat, |(v0, wb, y)| {
        let beam = ElectronBeam::from_speed(v0).unwrap();
        let g = PassageGeometry::new(y).unwrap();
        let k = M * v0 / HBAR;
        let lead = kinematics::relative_displacement(flux(wb), &beam, g).first_order;
        let d = rel(k * lead, E * wb / HBAR);
        let mut w = worst.borrow_mut();
        *w = w.max(d);
        prop_assert!(d < 1e-12, "v0 {v0:e}: {d:e}");
        Ok(())
    });
    from_run(r, format!("256 cases, worst {:.1e}", *worst.borrow()))
}

fn dispersive_scaling() -> Verdict {
    let wb = 1e-13;
    let g = PassageGeometry::new(1e-5).unwrap();
    let (xs, ys): (Vec<f64>, Vec<f64>) = (0..=20)
        .map(|i| {
            let v0 = 1e6 * 10f64.powf(i as f64 / 10.0);
            let beam = ElectronBeam::from_speed(v0).unwrap();
            let t = kinematics::semiclassical_phase(flux(wb), &beam, g).dispersive_term;
            (v0.ln(), t.abs().ln())
        })
        .unzip();
    let slope = fit_slope(&xs, &ys);
    outcome(
        (slope + 1.0).abs() <= 1e-6,
        format!("fitted slope {slope:.9} over v0 in [1e6, 1e8]"),
    )
}

fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn core_scaling() -> Verdict {
    let worst = RefCell::new((0.0_f64, 0.0_f64));
    let strat = (
        log_uniform(1e-3, 10.0),
        log_uniform(1e-4, 1e-2),
        log_uniform(100.0, 1e4),
        1.0..300.0_f64,
    );
    let r = runner(256).run(&strat, |(current, r, n, kev)| {
        let beam = ElectronBeam::from_energy_kev(kev, None).unwrap();
        let g = PassageGeometry::new(2.0 * r).unwrap();
        let air = Solenoid::new(r, n, current, 1.0).unwrap();
        let iron = air.with_relative_permeability(150.0).unwrap();
        let c = kinematics::classical_delay(iron.flux(), &beam)
            / kinematics::classical_delay(air.flux(), &beam);
        let s = kinematics::semiclassical_delay(iron.flux(), &beam, g)
            / kinematics::semiclassical_delay(air.flux(), &beam, g);
        let (dc, ds) = (rel(c, 150.0), rel(s, 22500.0));
        let mut w = worst.borrow_mut();
        *w = (w.0.max(dc), w.1.max(ds));
        prop_assert!(dc <= 4.0 * f64::EPSILON, "classical ratio {c}");
        prop_assert!(ds <= 8.0 * f64::EPSILON, "semi-classical ratio {s}");
        Ok(())
    });
    let (dc, ds) = *worst.borrow();
    from_run(
        r,
        format!("256 cases, worst deviation {dc:.1e} (x150), {ds:.1e} (x22500)"),
    )
}

fn envelope_derivative() -> Verdict {
    let worst = RefCell::new(0.0_f64);
    let strat = (
        log_uniform(1e-4, 1e-2),
        1.0..300.0_f64,
        log_uniform(1e-6, 1e-3),
    );
    let r = runner(64).run(&strat, |(eps, kev, y)| {
        let beam = ElectronBeam::from_energy_kev(kev, None).unwrap();
        let wb = flux_for_epsilon(eps, kev, y);
        let g = PassageGeometry::new(y).unwrap();
        let phi = |k: f64| {
            let b = ElectronBeam::from_wavevector(k).unwrap();
            kinematics::semiclassical_phase(flux(wb), &b, g).total
        };
        let k = beam.wavevector();
        let h = 1e-4 * k;
        let fd = (phi(k + h) - phi(k - h)) / (2.0 * h);
        let got = kinematics::envelope_shift(flux(wb), &beam, g);
        let d = rel(got, fd);
        let mut w = worst.borrow_mut();
        *w = w.max(d);
        prop_assert!(d < 1e-6, "eps {eps:e}: {got:e} vs {fd:e}");
        Ok(())
    });
    from_run(r, format!("64 cases, worst {:.1e}", *worst.borrow()))
}

fn final_speed_recovery() -> Verdict {
    let cfg = IntegratorConfig::default();
    let worst = RefCell::new(0.0_f64);
    let strat = (
        log_uniform(1e-6, 1e-2),
        1.0..300.0_f64,
        log_uniform(1e-6, 1e-3),
        any::<bool>(),
    );
    let r = runner(16).run(&strat, |(eps, kev, y, upper)| {
        let beam = ElectronBeam::from_energy_kev(kev, None).unwrap();
        let wb = flux_for_epsilon(eps, kev, y);
        let g = PassageGeometry::new(if upper { y } else { -y }).unwrap();
        let res = integrate_passage(flux(wb), &beam, g, &cfg)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let d = rel(res.final_speed, beam.speed());
        let mut w = worst.borrow_mut();
        *w = w.max(d);
        prop_assert!(d <= 10.0 * cfg.relative_tolerance, "eps {eps:e}: {d:e}");
        Ok(())
    });
    from_run(
        r,
        format!(
            "16 cases, worst {:.1e} (bound {:.0e})",
            *worst.borrow(),
            10.0 * cfg.relative_tolerance
        ),
    )
}

fn truncation_decay() -> Verdict {
    let kev = 1.0;
    let y = 5e-5;
    let eps = 1e-3;
    let wb = flux_for_epsilon(eps, kev, y);
    let beam = ElectronBeam::from_energy_kev(kev, None).unwrap();
    let lead = E * wb / (2.0 * M * speed(kev * 1e3 * E));
    let exact = lead / (1.0 + eps).sqrt();
    let windows = [1e2, 3e2, 1e3, 3e3, 1e4];
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for w in windows {
        let cfg = IntegratorConfig::default()
            .with_window_factor(w)
            .with_tail_correction(TailCorrection::Off);
        match integrate_passage(flux(wb), &beam, PassageGeometry::new(y).unwrap(), &cfg) {
            Ok(r) => {
                xs.push(w.ln());
                ys.push((exact - r.displacement_vs_free_flight).abs().ln());
            }
            Err(e) => return outcome(false, format!("window {w}: {e}")),
        }
    }
    let slope = fit_slope(&xs, &ys);
    outcome(
        (slope + 1.0).abs() <= 0.05,
        format!("fitted exponent {slope:.4} over window factors 1e2..1e4"),
    )
}

fn theory_curves_regenerate() -> Verdict {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_abforce"))
            .args([
                "sweep",
                "--energy-kev",
                "1",
                "--ye-um",
                "2000",
                "--current-max",
                "1",
                "--steps",
                "6",
                "--no-timestamp",
            ])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    let text = String::from_utf8_lossy(&a.stdout);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap_or("");
    let curves = [
        "with_core_dt_classical_s",
        "without_core_dt_classical_s",
        "with_core_dt_semiclassical_s",
        "with_core_dt_numeric_s",
    ];
    let pass =
        a.status.success() && a.stdout == b.stdout && curves.iter().all(|c| header.contains(c));
    outcome(
        pass,
        "time-of-flight data points and laboratory confirmation of the proposed interferometer \
         are not reproducible at desk scale; replaced by criteria 1-6 and byte-identical \
         regeneration of the classical (with/without core), semi-classical analytic and numeric \
         delay curves as CSV",
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("1   table reproduction within 5%", table1_reproduction),
        ("2   feasibility numbers and outcome C", feasibility_numbers),
        (
            "3a  numeric vs relative expansion < 1e-5 (eps <= 1e-3)",
            numeric_vs_relative_expansion,
        ),
        (
            "3b  extracted second order within 1% (eps in [1e-4, 1e-2])",
            second_order_extraction,
        ),
        (
            "4a  k * leading shift = e Phi / hbar < 1e-12",
            dispersionless_invariant,
        ),
        ("4b  dispersive term slope -1 +- 1e-6", dispersive_scaling),
        ("5a  core delay ratios 150 and 22500", core_scaling),
        (
            "5b  envelope shift = d phi / dk < 1e-6",
            envelope_derivative,
        ),
        ("6a  final speed within 10 rtol of v0", final_speed_recovery),
        (
            "6b  untruncated error ~ window^-1 within 5%",
            truncation_decay,
        ),
        ("7   desk-scale substitutes", theory_curves_regenerate),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let r = check();
        if !r.pass {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
