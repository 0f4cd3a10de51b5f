//! Config-driven runs exercising the in-process command layer.

use casimir_stress::cli::{execute, Command, CommonArgs};

fn config_args(dir: &std::path::Path, name: &str, text: &str) -> CommonArgs {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    CommonArgs {
        config: Some(path),
        preset: None,
        out: None,
        threads: 1,
        tolerance: None,
    }
}

#[test]
fn identical_wall_and_gap_give_all_zero_pressure_rows() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("same.lib"),
        "[material filler]\nmodel = constant\neps = 4.0\n",
    )
    .unwrap();
    let args = config_args(
        dir.path(),
        "same.cfg",
        "materials = same.lib\n\n[pressure]\nwall = filler\ngap = filler\ntemperature = 300\na_min = 1e-7\na_max = 1e-6\na_points = 4\n",
    );
    let out = execute(&Command::Pressure(args)).unwrap();
    assert!(out.all_converged);
    for row in out.text.lines().filter(|l| l.starts_with(|c: char| c.is_ascii_digit())) {
        let p: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(p, 0.0, "identical media must give exactly zero: {row}");
    }
}

#[test]
fn pressure_scan_magnitude_decreases_with_separation() {
    let dir = tempfile::tempdir().unwrap();
    let args = config_args(
        dir.path(),
        "scan.cfg",
        "[pressure]\nwall = ideal-metal\ngap = vacuum\ntemperature = 300\na_min = 1e-7\na_max = 1e-6\na_points = 5\nrel_tol = 1e-7\n",
    );
    let out = execute(&Command::Pressure(args)).unwrap();
    let magnitudes: Vec<f64> = out
        .text
        .lines()
        .filter(|l| l.starts_with(|c: char| c.is_ascii_digit()))
        .map(|row| row.split(',').nth(2).unwrap().parse::<f64>().unwrap().abs())
        .collect();
    assert_eq!(magnitudes.len(), 5);
    assert!(magnitudes.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn inverted_density_ordering_warns_but_runs() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("inv.lib"),
        "[material dense]\nmodel = constant\neps = 10.0\n\n[material thin]\nmodel = constant\neps = 1.5\n",
    )
    .unwrap();
    let args = config_args(
        dir.path(),
        "inv.cfg",
        "materials = inv.lib\n\n[pressure]\nwall = thin\ngap = dense\ntemperature = 300\na = 1e-6\n",
    );
    let out = execute(&Command::Pressure(args)).unwrap();
    assert!(
        out.warnings.iter().any(|w| w.contains("dilute")),
        "expected a dilute-gap warning, got {:?}",
        out.warnings
    );
    // equal walls still attract (the round trip carries r^2 >= 0); the
    // warning marks leaving the documented density ordering, nothing more
    let row = out
        .text
        .lines()
        .find(|l| l.starts_with(|c: char| c.is_ascii_digit()))
        .unwrap();
    let p: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!(p < 0.0, "symmetric cavities attract, got {p}");
}

#[test]
fn near_interface_vacuum_gap_reports_no_divergent_part() {
    let dir = tempfile::tempdir().unwrap();
    let args = config_args(
        dir.path(),
        "ni.cfg",
        "[near-interface]\nwall = ideal-metal\ngap = vacuum\ntemperature = 300\na = 1e-6\n",
    );
    let out = execute(&Command::NearInterface(args)).unwrap();
    assert!(out.text.contains("# summary divergent_part = none"));
}

#[test]
fn cutoff_scan_cli_reports_interface_fit() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("mat.lib"),
        "[material wall10]\nmodel = constant\neps = 10.0\n\n[material gap15]\nmodel = constant\neps = 1.5\n",
    )
    .unwrap();
    let args = config_args(
        dir.path(),
        "scan.cfg",
        "materials = mat.lib\n\n[cutoff-scan]\nwall = wall10\ngap = gap15\ntemperature = 300\na = 1e-6\nz = 0\nlambda_min = 1e8\nlambda_max = 1e9\nlambda_points = 8\n",
    );
    let out = execute(&Command::CutoffScan(args)).unwrap();
    assert!(out.text.contains("# fit analytic_slope_Pa_m"));
    let dev_line = out
        .text
        .lines()
        .find(|l| l.starts_with("# fit slope_rel_deviation"))
        .unwrap();
    let dev: f64 = dev_line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(dev < 1e-2, "slope deviation {dev} too large");
}
