//! `spinpair`: Schmidt forms, collapse and Luder measurements, sphere
//! deformation grids, and the seeded verification suites, driven from state
//! files on disk.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use spinpair::bloch::{angles_of_ray, MeasurementDirection, SpinPureState};
use spinpair::entangle::{constraint_f12, schmidt_decompose, SchmidtForm, TwoQubitState};
use spinpair::linalg::{partial_trace, Matrix2, Matrix4, Subsystem, Vector2};
use spinpair::measurement::{
    collapse_on_first, collapse_on_second, luder_on_first, luder_on_second,
    sphere_deformation_grid, CollapseResult, GridRow,
};
use spinpair::verify;
use spinpair_cli::state_doc::StateDocument;
use spinpair_cli::{exit_code_for_reports, fmt_f64, grid_doc, CliError};

#[derive(Parser)]
#[command(
    name = "spinpair",
    version,
    about = "Two-spin entanglement geometry: Schmidt forms, measurements, sphere maps"
)]
struct Cli {
    /// Read and report angles in degrees instead of radians.
    #[arg(long, global = true)]
    degrees: bool,

    /// Frame for reported angles: the Schmidt bases or the input basis.
    #[arg(long, global = true, value_enum, default_value_t = Frame::Schmidt)]
    frame: Frame,

    /// Unit-norm acceptance tolerance for state files.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Frame {
    Schmidt,
    Input,
}

#[derive(Subcommand)]
enum Command {
    /// Schmidt form of a state: r, coefficients, and both bases.
    Schmidt { file: PathBuf },

    /// Both outcomes of a collapse measurement on one spin.
    Collapse {
        file: PathBuf,
        /// Polar angle of the measurement direction (input basis).
        #[arg(long)]
        theta: f64,
        /// Azimuth of the measurement direction (input basis).
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        /// Which spin is measured.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        side: u8,
    },

    /// Non-selective (Luder) measurement: joint density matrix and the
    /// partial traces of both spins before and after.
    Luder {
        file: PathBuf,
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        side: u8,
    },

    /// Map a regular grid of sphere-1 rays onto sphere 2 and write it as CSV.
    Spheremap {
        file: PathBuf,
        #[arg(long)]
        ntheta: usize,
        #[arg(long)]
        nphi: usize,
        #[arg(long)]
        out: PathBuf,
    },

    /// Run every verification suite on a seeded random ensemble.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
}

fn main() -> ExitCode {
    // die silently on a closed pipe (e.g. `spinpair schmidt f | head`)
    // instead of panicking in println
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Schmidt { ref file } => cmd_schmidt(&cli, file),
        Command::Collapse {
            ref file,
            theta,
            phi,
            side,
        } => cmd_collapse(&cli, file, theta, phi, side),
        Command::Luder {
            ref file,
            theta,
            phi,
            side,
        } => cmd_luder(&cli, file, theta, phi, side),
        Command::Spheremap {
            ref file,
            ntheta,
            nphi,
            ref out,
        } => cmd_spheremap(&cli, file, ntheta, nphi, out),
        Command::Verify { seed, cases } => cmd_verify(seed, cases),
    }
}

fn angle_in(cli: &Cli, value: f64) -> f64 {
    if cli.degrees {
        value.to_radians()
    } else {
        value
    }
}

fn angle_out(cli: &Cli, value: f64) -> f64 {
    if cli.degrees {
        value.to_degrees()
    } else {
        value
    }
}

fn load_state(cli: &Cli, file: &Path) -> Result<(TwoQubitState, Option<String>), CliError> {
    let doc = StateDocument::read(file)?;
    let state = doc.to_state(cli.tolerance)?;
    Ok((state, doc.label))
}

fn direction(cli: &Cli, theta: f64, phi: f64) -> Result<MeasurementDirection, CliError> {
    MeasurementDirection::new(angle_in(cli, theta), angle_in(cli, phi))
        .map_err(|e| CliError::Input(format!("measurement direction: {e}")))
}

fn fmt_vector2(v: &Vector2) -> String {
    format!(
        "{} {} {} {}",
        fmt_f64(v.0[0].re),
        fmt_f64(v.0[0].im),
        fmt_f64(v.0[1].re),
        fmt_f64(v.0[1].im)
    )
}

fn fmt_matrix2_row(m: &Matrix2, row: usize) -> String {
    format!(
        "{} {} {} {}",
        fmt_f64(m.0[row][0].re),
        fmt_f64(m.0[row][0].im),
        fmt_f64(m.0[row][1].re),
        fmt_f64(m.0[row][1].im)
    )
}

fn fmt_matrix4_row(m: &Matrix4, row: usize) -> String {
    let mut parts = Vec::with_capacity(8);
    for col in 0..4 {
        parts.push(fmt_f64(m.0[row][col].re));
        parts.push(fmt_f64(m.0[row][col].im));
    }
    parts.join(" ")
}

/// Bloch angles of a unit spin vector, either in the given Schmidt frame or
/// in the input (computational) basis.
fn report_angles(
    cli: &Cli,
    form: &SchmidtForm,
    v: &Vector2,
    side: Subsystem,
) -> (f64, f64) {
    let (theta, phi) = match cli.frame {
        Frame::Input => angles_of_ray(v),
        Frame::Schmidt => match side {
            Subsystem::First => form.first_angles(v),
            Subsystem::Second => form.second_angles(v),
        },
    };
    (angle_out(cli, theta), angle_out(cli, phi))
}

fn frame_name(cli: &Cli) -> &'static str {
    match cli.frame {
        Frame::Schmidt => "schmidt",
        Frame::Input => "input",
    }
}

fn print_header(label: Option<&String>, cli: &Cli) {
    if let Some(label) = label {
        println!("label = {label}");
    }
    println!("frame = {}", frame_name(cli));
    println!("angle_unit = {}", if cli.degrees { "degrees" } else { "radians" });
}

fn cmd_schmidt(cli: &Cli, file: &Path) -> Result<(), CliError> {
    let (state, label) = load_state(cli, file)?;
    let form = schmidt_decompose(&state);
    let (c1, c2) = form.coefficients();
    if let Some(label) = label {
        println!("label = {label}");
    }
    println!("r = {}", fmt_f64(form.r()));
    println!("coefficient1 = {}", fmt_f64(c1));
    println!("coefficient2 = {}", fmt_f64(c2));
    let [x11, x12] = form.basis1();
    let [x21, x22] = form.basis2();
    println!("basis1_1 = {}", fmt_vector2(&x11));
    println!("basis1_2 = {}", fmt_vector2(&x12));
    println!("basis2_1 = {}", fmt_vector2(&x21));
    println!("basis2_2 = {}", fmt_vector2(&x22));
    Ok(())
}

fn print_outcome(
    cli: &Cli,
    form: &SchmidtForm,
    sign: char,
    outcome: &CollapseResult,
    measured_side: Subsystem,
) {
    println!("outcome = {sign}");
    println!("probability = {}", fmt_f64(outcome.probability));
    let (mt, mp) = report_angles(cli, form, &outcome.measured, measured_side);
    println!("measured_amplitudes = {}", fmt_vector2(&outcome.measured));
    println!("measured_theta = {}", fmt_f64(mt));
    println!("measured_phi = {}", fmt_f64(mp));
    match &outcome.remote {
        Some(remote) => {
            let (rt, rp) = report_angles(cli, form, remote, measured_side.other());
            println!("remote_amplitudes = {}", fmt_vector2(remote));
            println!("remote_theta = {}", fmt_f64(rt));
            println!("remote_phi = {}", fmt_f64(rp));
        }
        None => println!("remote = impossible"),
    }
}

fn cmd_collapse(cli: &Cli, file: &Path, theta: f64, phi: f64, side: u8) -> Result<(), CliError> {
    let (state, label) = load_state(cli, file)?;
    let dir = direction(cli, theta, phi)?;
    let form = schmidt_decompose(&state);
    print_header(label.as_ref(), cli);
    println!("side = {side}");
    println!("direction_theta = {}", fmt_f64(angle_out(cli, dir.theta())));
    println!("direction_phi = {}", fmt_f64(angle_out(cli, dir.phi())));
    println!("r = {}", fmt_f64(form.r()));
    let (measured_side, (plus, minus)) = match side {
        1 => (Subsystem::First, collapse_on_first(&state, &dir)),
        _ => (Subsystem::Second, collapse_on_second(&state, &dir)),
    };
    print_outcome(cli, &form, '+', &plus, measured_side);
    print_outcome(cli, &form, '-', &minus, measured_side);
    println!(
        "probability_sum = {}",
        fmt_f64(plus.probability + minus.probability)
    );
    Ok(())
}

fn cmd_luder(cli: &Cli, file: &Path, theta: f64, phi: f64, side: u8) -> Result<(), CliError> {
    let (state, label) = load_state(cli, file)?;
    let dir = direction(cli, theta, phi)?;
    let form = schmidt_decompose(&state);
    let amps = state.amplitudes();
    let before4 = Matrix4::outer(&amps, &amps);
    let (after4, measured) = match side {
        1 => (luder_on_first(&state, &dir), Subsystem::First),
        _ => (luder_on_second(&state, &dir), Subsystem::Second),
    };
    print_header(label.as_ref(), cli);
    println!("side = {side}");
    println!("direction_theta = {}", fmt_f64(angle_out(cli, dir.theta())));
    println!("direction_phi = {}", fmt_f64(angle_out(cli, dir.phi())));
    println!("r = {}", fmt_f64(form.r()));
    for row in 0..4 {
        println!("dprime_row{row} = {}", fmt_matrix4_row(&after4, row));
    }
    let traces = |m: &Matrix4, keep: Subsystem| -> Result<Matrix2, CliError> {
        partial_trace(m, keep).map_err(CliError::from)
    };
    let t1_before = traces(&before4, Subsystem::First)?;
    let t1_after = traces(&after4, Subsystem::First)?;
    let t2_before = traces(&before4, Subsystem::Second)?;
    let t2_after = traces(&after4, Subsystem::Second)?;
    for row in 0..2 {
        println!("trace1_before_row{row} = {}", fmt_matrix2_row(&t1_before, row));
    }
    for row in 0..2 {
        println!("trace1_after_row{row} = {}", fmt_matrix2_row(&t1_after, row));
    }
    for row in 0..2 {
        println!("trace2_before_row{row} = {}", fmt_matrix2_row(&t2_before, row));
    }
    for row in 0..2 {
        println!("trace2_after_row{row} = {}", fmt_matrix2_row(&t2_after, row));
    }
    let (remote_before, remote_after) = match measured {
        Subsystem::First => (&t2_before, &t2_after),
        Subsystem::Second => (&t1_before, &t1_after),
    };
    println!(
        "remote_partial_trace_delta = {}",
        fmt_f64(remote_before.max_abs_diff(remote_after))
    );
    Ok(())
}

/// Grid rows in the input frame: rays are taken at computational-basis
/// angles, their images reported in computational-basis angles; the axis
/// projection still refers to the Schmidt axis of sphere 2, where the
/// stretching law lives.
fn input_frame_rows(
    state: &TwoQubitState,
    form: &SchmidtForm,
    n_theta: usize,
    n_phi: usize,
) -> Result<Vec<GridRow>, CliError> {
    use std::f64::consts::PI;
    if n_theta < 2 || n_phi < 1 {
        return Err(CliError::Input(format!(
            "grid too small: need ntheta >= 2 and nphi >= 1, got {n_theta} x {n_phi}"
        )));
    }
    let f12 = constraint_f12(state);
    let mut rows = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let theta1 = PI * i as f64 / (n_theta - 1) as f64;
        for j in 0..n_phi {
            let phi1 = 2.0 * PI * j as f64 / n_phi as f64;
            let x = SpinPureState::new(theta1, phi1)
                .expect("grid angles are in range")
                .amplitudes();
            let image = f12.apply(&x);
            let norm2 = image.norm2();
            let row = if norm2 <= spinpair::ZERO_IMAGE_NORM2 {
                GridRow {
                    theta1,
                    phi1,
                    theta2: f64::NAN,
                    phi2: f64::NAN,
                    norm2: 0.0,
                    axis_projection: f64::NAN,
                }
            } else {
                let normalized = image * (1.0 / norm2.sqrt());
                let (theta2, phi2) = angles_of_ray(&normalized);
                GridRow {
                    theta1,
                    phi1,
                    theta2,
                    phi2,
                    norm2,
                    axis_projection: form.second_axis_projection(&normalized),
                }
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

fn cmd_spheremap(
    cli: &Cli,
    file: &Path,
    ntheta: usize,
    nphi: usize,
    out: &Path,
) -> Result<(), CliError> {
    let (state, label) = load_state(cli, file)?;
    let form = schmidt_decompose(&state);
    let rows = match cli.frame {
        Frame::Schmidt => sphere_deformation_grid(&state, ntheta, nphi)
            .map_err(|e| CliError::Input(e.to_string()))?,
        Frame::Input => input_frame_rows(&state, &form, ntheta, nphi)?,
    };
    grid_doc::write_grid(out, &rows)?;
    let beta = form.r().clamp(0.0, 1.0).acos();
    print_header(label.as_ref(), cli);
    println!("r = {}", fmt_f64(form.r()));
    println!("cone_beta = {}", fmt_f64(angle_out(cli, beta)));
    println!("rows = {}", rows.len());
    println!("out = {}", out.display());
    Ok(())
}

fn cmd_verify(seed: u64, cases: usize) -> Result<(), CliError> {
    println!("seed = {seed}");
    println!("cases = {cases}");
    if cases == 0 {
        println!("warning: 0 cases requested; every suite passes vacuously");
    }
    let reports = verify::run_all(seed, cases);
    let mut failed = 0usize;
    for report in &reports {
        println!(
            "{:<28} {} checks={:<6} max_residual={:.3e} tol={:.1e}",
            report.name,
            if report.vacuous {
                "VACUOUS"
            } else if report.passed() {
                "PASS"
            } else {
                "FAIL"
            },
            report.checks,
            report.max_residual,
            report.tolerance,
        );
        if let Some(first) = &report.first_failure {
            println!("    first counterexample: {first}");
        }
        if !report.passed() {
            failed += 1;
        }
    }
    println!(
        "verify: {}/{} suites passed",
        reports.len() - failed,
        reports.len()
    );
    if exit_code_for_reports(&reports) == 0 {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "{failed} suite(s) failed"
        )))
    }
}
