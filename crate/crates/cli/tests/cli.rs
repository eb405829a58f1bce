//! End-to-end tests of the `spinpair` binary: exit codes, report fields, and
//! file handling.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinpair"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

/// Extracts `key = value` from a report, parsed as f64.
fn field(report: &str, key: &str) -> f64 {
    for line in report.lines() {
        if let Some((k, v)) = line.split_once('=') {
            if k.trim() == key {
                return v.trim().parse().unwrap_or_else(|_| panic!("bad value for {key}: {v}"));
            }
        }
    }
    panic!("field {key} not found in:\n{report}");
}

/// Values of a repeated field, in order of appearance.
fn fields(report: &str, key: &str) -> Vec<f64> {
    report
        .lines()
        .filter_map(|line| {
            let (k, v) = line.split_once('=')?;
            if k.trim() == key {
                v.trim().parse().ok()
            } else {
                None
            }
        })
        .collect()
}

fn write_file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn singlet_file(dir: &TempDir) -> PathBuf {
    write_file(
        dir,
        "singlet.state",
        "label = singlet\n\
         amp00 = 0 0\n\
         amp01 = 0.70710678118654752 0\n\
         amp10 = -0.70710678118654752 0\n\
         amp11 = 0 0\n",
    )
}

fn weighted_file(dir: &TempDir) -> PathBuf {
    write_file(
        dir,
        "weighted.state",
        "amp00 = 0.6 0\namp01 = 0 0\namp10 = 0 0\namp11 = 0.8 0\n",
    )
}

fn basis00_file(dir: &TempDir) -> PathBuf {
    write_file(
        dir,
        "zero.state",
        "amp00 = 1 0\namp01 = 0 0\namp10 = 0 0\namp11 = 0 0\n",
    )
}

#[test]
fn schmidt_landmark_reports() {
    let dir = TempDir::new().unwrap();

    let out = run(&["schmidt", singlet_file(&dir).to_str().unwrap()]);
    assert!(out.status.success());
    assert!(field(&stdout(&out), "r").abs() <= 1e-12);

    let out = run(&["schmidt", basis00_file(&dir).to_str().unwrap()]);
    assert!(out.status.success());
    assert!((field(&stdout(&out), "r") - 1.0).abs() <= 1e-12);

    let out = run(&["schmidt", weighted_file(&dir).to_str().unwrap()]);
    assert!(out.status.success());
    let report = stdout(&out);
    assert!((field(&report, "r") - 0.28).abs() <= 1e-12);
    assert!((field(&report, "coefficient1") - 0.8).abs() <= 1e-12);
    assert!((field(&report, "coefficient2") - 0.6).abs() <= 1e-12);
}

#[test]
fn malformed_file_exits_two_and_names_the_field() {
    let dir = TempDir::new().unwrap();
    let path = write_file(
        &dir,
        "broken.state",
        "amp00 = 1 0\namp01 = 0 0\namp11 = 0 0\n",
    );
    let out = run(&["schmidt", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("amp10"));

    let path = write_file(&dir, "unknown.state", "lambda = 1 0\n");
    let out = run(&["schmidt", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("lambda"));

    let out = run(&["schmidt", dir.path().join("missing.state").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_unit_norm_respects_tolerance_flag() {
    let dir = TempDir::new().unwrap();
    let path = write_file(
        &dir,
        "offnorm.state",
        "amp00 = 1.000001 0\namp01 = 0 0\namp10 = 0 0\namp11 = 0 0\n",
    );
    let out = run(&["schmidt", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["schmidt", path.to_str().unwrap(), "--tolerance", "1e-4"]);
    assert!(out.status.success());

    let path = write_file(
        &dir,
        "autonorm.state",
        "normalize = true\namp00 = 3 0\namp01 = 0 0\namp10 = 4 0\namp11 = 0 0\n",
    );
    let out = run(&["schmidt", path.to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn collapse_on_deterministic_state() {
    let dir = TempDir::new().unwrap();
    let out = run(&[
        "collapse",
        basis00_file(&dir).to_str().unwrap(),
        "--theta",
        "0",
        "--side",
        "1",
    ]);
    assert!(out.status.success());
    let report = stdout(&out);
    let probs = fields(&report, "probability");
    assert!((probs[0] - 1.0).abs() <= 1e-12);
    assert!(probs[1].abs() <= 1e-12);
    assert!(report.contains("remote = impossible"));
}

#[test]
fn collapse_weighted_state_in_input_frame() {
    let dir = TempDir::new().unwrap();
    let out = run(&[
        "collapse",
        weighted_file(&dir).to_str().unwrap(),
        "--theta",
        "0",
        "--side",
        "1",
        "--frame",
        "input",
    ]);
    assert!(out.status.success());
    let report = stdout(&out);
    let probs = fields(&report, "probability");
    assert!((probs[0] - 0.36).abs() <= 1e-12);
    assert!((probs[1] - 0.64).abs() <= 1e-12);
    assert!((field(&report, "probability_sum") - 1.0).abs() <= 1e-12);
    // + outcome leaves the second spin at the input-frame north pole
    let thetas = fields(&report, "remote_theta");
    assert!(thetas[0].abs() <= 1e-9);
    assert!((thetas[1] - std::f64::consts::PI).abs() <= 1e-9);
}

#[test]
fn collapse_singlet_is_antipodal_in_any_direction() {
    let dir = TempDir::new().unwrap();
    let out = run(&[
        "collapse",
        singlet_file(&dir).to_str().unwrap(),
        "--theta",
        "1.1",
        "--phi",
        "2.3",
        "--side",
        "2",
        "--frame",
        "input",
    ]);
    assert!(out.status.success());
    let report = stdout(&out);
    let probs = fields(&report, "probability");
    assert!((probs[0] - 0.5).abs() <= 1e-12);
    assert!((probs[1] - 0.5).abs() <= 1e-12);
    // measured at (1.1, 2.3): the remote spin points the opposite way
    let measured_theta = fields(&report, "measured_theta")[0];
    let remote_theta = fields(&report, "remote_theta")[0];
    assert!((measured_theta + remote_theta - std::f64::consts::PI).abs() <= 1e-9);
}

#[test]
fn degrees_flag_converts_input_and_output() {
    let dir = TempDir::new().unwrap();
    let file = weighted_file(&dir);
    let radians = run(&[
        "collapse",
        file.to_str().unwrap(),
        "--theta",
        "1.0471975511965976",
        "--side",
        "1",
    ]);
    let degrees = run(&[
        "collapse",
        file.to_str().unwrap(),
        "--degrees",
        "--theta",
        "60",
        "--side",
        "1",
    ]);
    assert!(radians.status.success() && degrees.status.success());
    let p_rad = fields(&stdout(&radians), "probability");
    let p_deg = fields(&stdout(&degrees), "probability");
    assert!((p_rad[0] - p_deg[0]).abs() <= 1e-12);
    assert!((field(&stdout(&degrees), "direction_theta") - 60.0).abs() <= 1e-9);
}

#[test]
fn luder_reports_unchanged_remote_trace() {
    let dir = TempDir::new().unwrap();
    let out = run(&[
        "luder",
        weighted_file(&dir).to_str().unwrap(),
        "--theta",
        "1.0471975511965976",
        "--phi",
        "0.6283185307179586",
        "--side",
        "1",
    ]);
    assert!(out.status.success());
    let report = stdout(&out);
    assert!(field(&report, "remote_partial_trace_delta") <= 1e-12);
    // the remote (second) partial trace is diag(0.36, 0.64) before and after
    for key in ["trace2_before_row0", "trace2_after_row0"] {
        let line = report
            .lines()
            .find(|l| l.starts_with(key))
            .unwrap_or_else(|| panic!("{key} missing"));
        let first: f64 = line.split('=').nth(1).unwrap().split_whitespace().next().unwrap()
            .parse()
            .unwrap();
        assert!((first - 0.36).abs() <= 1e-12);
    }
}

#[test]
fn luder_on_product_state_changes_nothing_remote() {
    let dir = TempDir::new().unwrap();
    let out = run(&[
        "luder",
        basis00_file(&dir).to_str().unwrap(),
        "--theta",
        "0.9",
        "--phi",
        "4.0",
        "--side",
        "2",
    ]);
    assert!(out.status.success());
    let report = stdout(&out);
    assert!(field(&report, "remote_partial_trace_delta") <= 1e-12);
}

#[test]
fn spheremap_writes_parseable_grid() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("grid.csv");
    let out = run(&[
        "spheremap",
        singlet_file(&dir).to_str().unwrap(),
        "--ntheta",
        "5",
        "--nphi",
        "8",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report = stdout(&out);
    assert!(field(&report, "r").abs() <= 1e-12);
    assert!((field(&report, "cone_beta") - std::f64::consts::FRAC_PI_2).abs() <= 1e-9);
    assert_eq!(field(&report, "rows") as usize, 40);

    let rows = spinpair_cli::grid_doc::read_grid(&out_path).unwrap();
    assert_eq!(rows.len(), 40);
    // the singlet keeps the equator on the equator
    for row in rows
        .iter()
        .filter(|r| (r.theta1 - std::f64::consts::FRAC_PI_2).abs() <= 1e-12)
    {
        assert!(row.axis_projection.abs() <= 1e-12);
    }
}

#[test]
fn spheremap_cone_height_matches_r() {
    let dir = TempDir::new().unwrap();
    // Schmidt-diagonal state with r = 0.6: amplitudes sqrt(0.8), sqrt(0.2)
    let path = write_file(
        &dir,
        "r06.state",
        "amp00 = 0.8944271909999158785 0\n\
         amp01 = 0 0\n\
         amp10 = 0 0\n\
         amp11 = 0.4472135954999579393 0\n",
    );
    let out_path = dir.path().join("grid.csv");
    let out = run(&[
        "spheremap",
        path.to_str().unwrap(),
        "--ntheta",
        "9",
        "--nphi",
        "4",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rows = spinpair_cli::grid_doc::read_grid(&out_path).unwrap();
    for row in rows
        .iter()
        .filter(|r| (r.theta1 - std::f64::consts::FRAC_PI_2).abs() <= 1e-12)
    {
        assert!((row.axis_projection - 0.6).abs() <= 1e-9);
    }
}

#[test]
fn spheremap_rejects_unwritable_path_and_bad_shape() {
    let dir = TempDir::new().unwrap();
    let file = singlet_file(&dir);
    let out = run(&[
        "spheremap",
        file.to_str().unwrap(),
        "--ntheta",
        "5",
        "--nphi",
        "8",
        "--out",
        "/nonexistent-dir/grid.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "spheremap",
        file.to_str().unwrap(),
        "--ntheta",
        "1",
        "--nphi",
        "8",
        "--out",
        dir.path().join("g.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_zero_cases_passes_vacuously_with_warning() {
    let out = run(&["verify", "--cases", "0"]);
    assert!(out.status.success());
    let report = stdout(&out);
    assert!(report.contains("warning"));
    assert!(report.contains("VACUOUS"));
}

#[test]
fn verify_small_run_exits_zero() {
    let out = run(&["verify", "--seed", "7", "--cases", "25"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("25/25 suites passed"));
}

#[test]
fn state_file_round_trip_is_bit_exact() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("round.state");
    let doc = spinpair_cli::state_doc::StateDocument {
        label: Some("round trip".to_string()),
        normalize: false,
        amplitudes: [
            [1.0 / 3.0, -0.0],
            [2.0f64.sqrt() / 2.0, 1e-17],
            [-0.5, 0.25],
            [0.1, -1e-300],
        ],
    };
    doc.write(&path).unwrap();
    let back = spinpair_cli::state_doc::StateDocument::read(&path).unwrap();
    for (a, b) in doc.amplitudes.iter().zip(back.amplitudes.iter()) {
        assert_eq!(a[0].to_bits(), b[0].to_bits());
        assert_eq!(a[1].to_bits(), b[1].to_bits());
    }
    assert_eq!(doc, back);
}

#[test]
fn unknown_subcommand_exits_two() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

/// The grid written under `--frame input` reports image angles in the input
/// basis: for the singlet the map is the antipode, theta2 = pi - theta1.
#[test]
fn spheremap_input_frame_uses_input_angles() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("grid.csv");
    let out = run(&[
        "spheremap",
        singlet_file(&dir).to_str().unwrap(),
        "--frame",
        "input",
        "--ntheta",
        "7",
        "--nphi",
        "3",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rows = spinpair_cli::grid_doc::read_grid(&out_path).unwrap();
    for row in &rows {
        assert!((row.theta2 - (std::f64::consts::PI - row.theta1)).abs() <= 1e-9);
        assert!((row.norm2 - 0.5).abs() <= 1e-12);
    }
}

#[test]
fn grid_file_has_mandatory_header() {
    let dir = TempDir::new().unwrap();
    let path = write_file(&dir, "bad.csv", "1,2,3,4,5,6\n");
    assert!(spinpair_cli::grid_doc::read_grid(Path::new(path.to_str().unwrap())).is_err());
}
