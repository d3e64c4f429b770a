//! The files under `docs/formats/` are regenerated here and compared byte for
//! byte. Set `ABFORCE_BLESS=1` to rewrite them after an intended change.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

/// (file name, arguments). Trajectory runs also produce a `.summary.json` sidecar.
const CASES: &[(&str, &[&str])] = &[
    (
        "analytic.json",
        &[
            "analytic",
            "--flux-gcm2",
            "1.7e-4",
            "--energy-kev",
            "20",
            "--ye-um",
            "1",
            "--energy-spread-ev",
            "0.29",
            "--format",
            "json",
        ],
    ),
    (
        "analytic.csv",
        &[
            "analytic",
            "--flux-gcm2",
            "1.7e-4",
            "--energy-kev",
            "20",
            "--ye-um",
            "1",
            "--energy-spread-ev",
            "0.29",
            "--format",
            "csv",
        ],
    ),
    (
        "trajectory.csv",
        &[
            "trajectory",
            "--flux-gcm2",
            "9.9e-3",
            "--energy-kev",
            "1",
            "--ye-um",
            "50",
            "--window-factor",
            "100",
            "--rtol",
            "1e-6",
        ],
    ),
    ("table1.csv", &["table1"]),
    ("table1.json", &["table1", "--format", "json"]),
    ("regimes.csv", &["regimes", "--format", "csv"]),
    ("regimes.json", &["regimes", "--record", "proposed"]),
    (
        "sweep.csv",
        &[
            "sweep",
            "--energy-kev",
            "1",
            "--ye-um",
            "2000",
            "--current-max",
            "1",
            "--steps",
            "6",
        ],
    ),
    (
        "sweep.json",
        &[
            "sweep",
            "--energy-kev",
            "1",
            "--ye-um",
            "2000",
            "--current-max",
            "1",
            "--steps",
            "3",
            "--format",
            "json",
        ],
    ),
];

fn formats_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/formats")
}

#[test]
fn golden_files_are_current() {
    let bless = std::env::var_os("ABFORCE_BLESS").is_some();
    let tmp = tempfile::tempdir().unwrap();
    let mut stale = Vec::new();
    for (name, args) in CASES {
        let out = tmp.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_abforce"))
            .args(*args)
            .arg("--no-timestamp")
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success(), "{name}");
        let mut produced = vec![(name.to_string(), out.clone())];
        let sidecar = out.with_extension("summary.json");
        if sidecar.exists() {
            produced.push((
                sidecar.file_name().unwrap().to_string_lossy().into_owned(),
                sidecar,
            ));
        }
        for (file, path) in produced {
            let got = fs::read(&path).unwrap();
            let golden = formats_dir().join(&file);
            if bless {
                fs::write(&golden, &got).unwrap();
            } else if fs::read(&golden).ok().as_deref() != Some(&got[..]) {
                stale.push(file);
            }
        }
    }
    assert!(
        stale.is_empty(),
        "golden files differ: {stale:?}; rerun with ABFORCE_BLESS=1 if intended"
    );
}
