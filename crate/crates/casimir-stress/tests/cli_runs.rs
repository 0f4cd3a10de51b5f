//! End-to-end runs of the `casimir` binary: exit codes, config and
//! material-library plumbing, and the output file path.

use std::process::Command;

fn casimir() -> Command {
    Command::new(env!("CARGO_BIN_EXE_casimir"))
}

const LIBRARY: &str = "\
[material gold]
model = drude
omega_p = 1.38e16
gamma = 5.07e13

[material thin-oil]
model = constant
eps = 1.5
";

#[test]
fn pressure_run_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("materials.lib"), LIBRARY).unwrap();
    std::fs::write(
        dir.path().join("run.cfg"),
        "materials = materials.lib\n\n[pressure]\nwall = gold\ngap = vacuum\ntemperature = 300\na = 1e-6\nrel_tol = 1e-7\n",
    )
    .unwrap();
    let out_path = dir.path().join("pressure.csv");

    let status = casimir()
        .arg("pressure")
        .arg("--config")
        .arg(dir.path().join("run.cfg"))
        .arg("--out")
        .arg(&out_path)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    let csv = std::fs::read_to_string(&out_path).unwrap();
    assert!(csv.contains("# wall = drude(omega_p=1.38e16, gamma=5.07e13)"));
    assert!(csv.contains("a_m,temperature_K,pressure_Pa"));
    let row = csv
        .lines()
        .find(|l| l.starts_with(|c: char| c.is_ascii_digit()))
        .unwrap();
    let pressure: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!(pressure < 0.0, "gold cavity must attract, got {pressure}");
}

#[test]
fn config_errors_exit_1_with_position() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.cfg"),
        "[pressure]\nwall = ideal-metal\ngap = vacuum\ntemperature = 300\na = 1e-6\nbogus_key = 7\n",
    )
    .unwrap();
    let out = casimir()
        .arg("pressure")
        .arg("--config")
        .arg(dir.path().join("bad.cfg"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("line 6") && stderr.contains("bogus_key"),
        "diagnostics missing position: {stderr}"
    );
}

#[test]
fn missing_preset_and_conflicting_flags_exit_1() {
    let out = casimir().arg("pressure").output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = casimir()
        .arg("pressure")
        .arg("--preset")
        .arg("no-such-preset")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown preset"));
}

#[test]
fn exhausted_budget_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("tight.cfg"),
        "[pressure]\nwall = ideal-metal\ngap = vacuum\ntemperature = 300\na = 1e-6\nrel_tol = 1e-12\nmax_evals = 45\n",
    )
    .unwrap();
    let out = casimir()
        .arg("pressure")
        .arg("--config")
        .arg(dir.path().join("tight.cfg"))
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(2),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    // the run still writes its best-effort rows
    assert!(String::from_utf8_lossy(&out.stdout).contains("pressure_Pa"));
}

#[test]
fn classical_grid_csv_and_state_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cls.cfg"),
        "[classical]\neps = 80\ne_field = 1e6\nrho_mass = 1000\ng = 9.81\nramp_cells = 16\n",
    )
    .unwrap();
    let out = casimir()
        .arg("classical")
        .arg("--config")
        .arg(dir.path().join("cls.cfg"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("# summary rw_surface_jump_Pa = 0.0000000000000000e0"));
    assert!(stdout.contains("i,j,k,f_am_x"));
    // AM z-forces present and negative along the upward ramp
    let some_row = stdout
        .lines()
        .find(|l| l.starts_with("1,1,8"))
        .expect("interior cell row");
    let fz: f64 = some_row.split(',').nth(5).unwrap().parse().unwrap();
    assert!(fz < 0.0, "AM ramp force should push toward lower eps, got {fz}");
}

#[test]
fn rw_profile_csv_matches_direct_evaluation() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("prof.cfg"),
        "[rw-profile]\nwall = ideal-metal\ngap = vacuum\ntemperature = 300\na = 1e-6\nz_points = 5\n",
    )
    .unwrap();
    let out = casimir()
        .arg("rw-profile")
        .arg("--config")
        .arg(dir.path().join("prof.cfg"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("# summary flat_profile = true"));

    use casimir_stress::am::{am_pressure, CavitySpec, WallModel};
    use casimir_stress::engine::QuadratureSpec;
    use casimir_stress::materials::PermittivityModel;
    let p = am_pressure(
        &CavitySpec::new(1e-6, 300.0, WallModel::IdealMetal, PermittivityModel::vacuum()).unwrap(),
        &QuadratureSpec::default(),
    )
    .unwrap();
    let row = stdout
        .lines()
        .find(|l| l.starts_with(|c: char| c.is_ascii_digit()))
        .unwrap();
    let value: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(value, -p.pressure);
}
