//! Seeded verification suites covering every invariant of the model.
//!
//! Each suite draws its randomness from a ChaCha8 substream of a single
//! master seed, records the worst residual it saw against a pinned tolerance,
//! and keeps the first counterexample's inputs for diagnostics. The same
//! suites back the `verify` CLI command and the acceptance tests, so a run is
//! reproducible from just `(seed, cases)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::bloch::{
    angles_of_ray, bloch_from_density, density_from_bloch, geometric_projection, luder_single,
    overlap_from_points, BlochPoint, MeasurementDirection, SpinPureState,
};
use crate::entangle::{
    adjoint_relation_check, compose_constraints, constraint_f12, constraint_f21,
    entanglement_parameter, reconstruct_state, schmidt_decompose, TwoQubitState,
};
use crate::linalg::{
    hermitian_eigen2, partial_trace, tensor_operator, tensor_vector, Matrix2, Matrix4, Subsystem,
    Vector2, Vector4,
};
use crate::measurement::{
    collapse_on_first, collapse_on_second, cone_of_equator, line_image_check, luder_on_first,
    luder_on_second, normalized_image_in_frame, orthogonality_image, sphere_deformation_grid,
};
use crate::oracle::{
    brute_force_collapse, brute_force_collapse_second, brute_force_schmidt, monte_carlo_outcomes,
    random_bloch_point, random_direction, random_two_qubit_state, random_unit_spin,
    random_unitary2, RandomSource,
};
use crate::{TOL_ALGEBRAIC, TOL_EIGEN};

/// Result of one verification suite.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub tolerance: f64,
    pub checks: u64,
    pub failures: u64,
    pub max_residual: f64,
    pub first_failure: Option<String>,
    pub vacuous: bool,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Recorder {
    report: SuiteReport,
}

impl Recorder {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Recorder {
            report: SuiteReport {
                name,
                tolerance,
                checks: 0,
                failures: 0,
                max_residual: 0.0,
                first_failure: None,
                vacuous: false,
            },
        }
    }

    fn vacuous(name: &'static str, tolerance: f64) -> SuiteReport {
        let mut rec = Recorder::new(name, tolerance);
        rec.report.vacuous = true;
        rec.report
    }

    /// Records one residual check against the suite tolerance.
    fn residual<F: FnOnce() -> String>(&mut self, value: f64, describe: F) {
        self.report.checks += 1;
        if value.is_finite() {
            self.report.max_residual = self.report.max_residual.max(value);
        }
        if !(value.is_finite() && value <= self.report.tolerance) {
            self.report.failures += 1;
            if self.report.first_failure.is_none() {
                self.report.first_failure = Some(format!("residual {value:.3e}: {}", describe()));
            }
        }
    }

    /// Records a claim that is not residual-shaped (exact or one-sided).
    fn require<F: FnOnce() -> String>(&mut self, ok: bool, describe: F) {
        self.report.checks += 1;
        if !ok {
            self.report.failures += 1;
            if self.report.first_failure.is_none() {
                self.report.first_failure = Some(describe());
            }
        }
    }

    fn finish(self) -> SuiteReport {
        self.report
    }
}

fn fmt_state(psi: &TwoQubitState) -> String {
    let a = psi.amplitudes().0;
    format!(
        "state [{:.9e}{:+.9e}i, {:.9e}{:+.9e}i, {:.9e}{:+.9e}i, {:.9e}{:+.9e}i]",
        a[0].re, a[0].im, a[1].re, a[1].im, a[2].re, a[2].im, a[3].re, a[3].im
    )
}

fn fmt_dir(dir: &MeasurementDirection) -> String {
    format!(
        "direction (theta={:.9e}, phi={:.9e})",
        dir.theta(),
        dir.phi()
    )
}

fn fmt_point(p: &BlochPoint) -> String {
    format!(
        "point (r={:.9e}, theta={:.9e}, phi={:.9e})",
        p.r(),
        p.theta(),
        p.phi()
    )
}

/// Expresses a single-spin operator in an orthonormal frame: entries
/// `<b_i, M b_j>`.
fn in_frame(m: &Matrix2, basis: &[Vector2; 2]) -> Matrix2 {
    Matrix2::from_rows(
        [
            basis[0].inner(&(*m * basis[0])),
            basis[0].inner(&(*m * basis[1])),
        ],
        [
            basis[1].inner(&(*m * basis[0])),
            basis[1].inner(&(*m * basis[1])),
        ],
    )
}

/// Reduced state of the measured spin after a Luder measurement at
/// Schmidt-frame angles `(theta, phi)`:
/// `(1/2) [[1 + r cos^2 t, r sin t cos t e^{-ip}], [.., 1 - r cos^2 t]]`.
fn measured_side_matrix(r: f64, theta: f64, phi: f64) -> Matrix2 {
    let (st, ct) = (theta.sin(), theta.cos());
    let off = Complex64::new(phi.cos(), -phi.sin()) * (0.5 * r * st * ct);
    Matrix2::from_rows(
        [Complex64::new(0.5 * (1.0 + r * ct * ct), 0.0), off],
        [off.conj(), Complex64::new(0.5 * (1.0 - r * ct * ct), 0.0)],
    )
}

fn random_hermitian(rng: &mut ChaCha8Rng) -> Matrix2 {
    let a: f64 = rng.random_range(-2.0..2.0);
    let d: f64 = rng.random_range(-2.0..2.0);
    let b = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    Matrix2::from_rows(
        [Complex64::new(a, 0.0), b],
        [b.conj(), Complex64::new(d, 0.0)],
    )
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn random_vector2(rng: &mut ChaCha8Rng) -> Vector2 {
    Vector2::new(random_complex(rng), random_complex(rng))
}

/// Random state with the product-state limit excluded, for operations that
/// are singular at `r = 1`.
fn random_state_below(rng: &mut ChaCha8Rng, r_cap: f64) -> TwoQubitState {
    for _ in 0..1000 {
        let psi = random_two_qubit_state(rng);
        if entanglement_parameter(&psi) < r_cap {
            return psi;
        }
    }
    TwoQubitState::singlet()
}

// Stream indices per suite, fixed so results do not depend on suite order.
const S_LINALG: u64 = 1;
const S_EIGEN: u64 = 2;
const S_BLOCH_ROUND_TRIP: u64 = 3;
const S_LUDER_GEOMETRY: u64 = 4;
const S_LITTLE_SPHERE: u64 = 5;
const S_LUDER_IDEMPOTENT: u64 = 6;
const S_OVERLAP: u64 = 7;
const S_AXIS_RULE: u64 = 8;
const S_CANONICAL: u64 = 9;
const S_CONJUGATE: u64 = 10;
const S_COMPOSE: u64 = 11;
const S_ADJOINT: u64 = 12;
const S_LANDMARKS: u64 = 13;
const S_SOUNDNESS: u64 = 14;
const S_PROBABILITY: u64 = 15;
const S_REMOTE: u64 = 16;
const S_MEASURED_SIDE: u64 = 17;
const S_GRID_LAWS: u64 = 18;
const S_CONE: u64 = 19;
const S_ANTIPODAL: u64 = 20;
const S_COLLINEAR: u64 = 21;
const S_ORACLE_COLLAPSE: u64 = 22;
const S_ORACLE_SCHMIDT: u64 = 23;
const S_MONTE_CARLO: u64 = 24;
const S_DETERMINISM: u64 = 25;

/// Exact algebraic identities of the tensor layer.
pub fn linalg_identities(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("linalg_identities", TOL_ALGEBRAIC);
    }
    let mut rec = Recorder::new("linalg_identities", TOL_ALGEBRAIC);
    let mut rng = RandomSource::new(seed).stream(S_LINALG);
    for _ in 0..cases {
        let (a, b) = (random_hermitian(&mut rng), random_hermitian(&mut rng));
        let (x, y) = (random_vector2(&mut rng), random_vector2(&mut rng));
        let lhs = tensor_operator(&a, &b) * tensor_vector(&x, &y);
        let rhs = tensor_vector(&(a * x), &(b * y));
        rec.residual(lhs.max_abs_diff(&rhs), || "mixed-product identity".into());

        let u = random_unit_spin(&mut rng);
        let v = random_unit_spin(&mut rng);
        let du = Matrix2::outer(&u, &u);
        let dv = Matrix2::outer(&v, &v);
        let joint = tensor_operator(&du, &dv);
        let d1 = partial_trace(&joint, Subsystem::First).expect("unit trace");
        let d2 = partial_trace(&joint, Subsystem::Second).expect("unit trace");
        rec.residual(d1.max_abs_diff(&du), || {
            "product partial trace, first".into()
        });
        rec.residual(d2.max_abs_diff(&dv), || {
            "product partial trace, second".into()
        });
        rec.residual((d1.trace() - joint.trace()).norm(), || {
            "trace preservation".into()
        });
    }
    rec.finish()
}

/// Spectral reconstruction of random Hermitian matrices.
pub fn eigen_reconstruction(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("eigen_reconstruction", TOL_EIGEN);
    }
    let mut rec = Recorder::new("eigen_reconstruction", TOL_EIGEN);
    let mut rng = RandomSource::new(seed).stream(S_EIGEN);
    for _ in 0..cases {
        let h = random_hermitian(&mut rng);
        let eig = hermitian_eigen2(&h).expect("input built Hermitian");
        let rebuilt = Matrix2::outer(&eig.vectors[0], &eig.vectors[0]) * eig.values[0]
            + Matrix2::outer(&eig.vectors[1], &eig.vectors[1]) * eig.values[1];
        rec.residual(rebuilt.max_abs_diff(&h), || "spectral reconstruction".into());
        rec.residual(eig.vectors[0].inner(&eig.vectors[1]).norm(), || {
            "eigenvector orthogonality".into()
        });
        rec.require(eig.values[0] >= eig.values[1], || {
            "eigenvalues not descending".into()
        });
    }
    rec.finish()
}

/// Ball point -> density matrix -> ball point round trip.
pub fn bloch_round_trip(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("bloch_round_trip", TOL_ALGEBRAIC);
    }
    let mut rec = Recorder::new("bloch_round_trip", TOL_ALGEBRAIC);
    let mut rng = RandomSource::new(seed).stream(S_BLOCH_ROUND_TRIP);
    for _ in 0..cases {
        let p = random_bloch_point(&mut rng);
        let q = bloch_from_density(&density_from_bloch(&p)).expect("valid density by construction");
        rec.residual(p.distance(&q), || fmt_point(&p));
    }
    rec.finish()
}

/// Matrix Luder rule against the orthogonal-projection rule on the ball.
pub fn luder_geometry(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("luder_geometry", TOL_ALGEBRAIC);
    }
    let mut rec = Recorder::new("luder_geometry", TOL_ALGEBRAIC);
    let mut rng = RandomSource::new(seed).stream(S_LUDER_GEOMETRY);
    for _ in 0..cases {
        let u = random_bloch_point(&mut rng);
        let dir = random_direction(&mut rng);
        let via_matrix = bloch_from_density(&luder_single(&density_from_bloch(&u), &dir))
            .expect("Luder output is a density matrix");
        let via_geometry = geometric_projection(&u, &dir);
        rec.residual(via_matrix.distance(&via_geometry), || {
            format!("{}, {}", fmt_point(&u), fmt_dir(&dir))
        });
    }
    rec.finish()
}

/// Projections from a point land on the little sphere with north pole the
/// point and south pole the center.
pub fn little_sphere_law(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("little_sphere_law", TOL_ALGEBRAIC);
    }
    let mut rec = Recorder::new("little_sphere_law", TOL_ALGEBRAIC);
    let mut rng = RandomSource::new(seed).stream(S_LITTLE_SPHERE);
    let side = ((cases as f64).sqrt().ceil() as usize).clamp(1, 100);
    let points: Vec<BlochPoint> = (0..side).map(|_| random_bloch_point(&mut rng)).collect();
    let dirs: Vec<MeasurementDirection> = (0..side).map(|_| random_direction(&mut rng)).collect();
    for u in &points {
        let [cx, cy, cz] = u.cartesian();
        let center = [cx / 2.0, cy / 2.0, cz / 2.0];
        let radius = u.r() / 2.0;
        for dir in &dirs {
            let p = geometric_projection(u, dir).cartesian();
            let dist = ((p[0] - center[0]).powi(2)
                + (p[1] - center[1]).powi(2)
                + (p[2] - center[2]).powi(2))
            .sqrt();
            rec.residual((dist - radius).abs(), || {
                format!("{}, {}", fmt_point(u), fmt_dir(dir))
            });
        }
    }
    rec.finish()
}

/// Luder's rule is idempotent for a fixed direction.
pub fn luder_idempotence(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("luder_idempotence", TOL_ALGEBRAIC);
    }
    let mut rec = Recorder::new("luder_idempotence", TOL_ALGEBRAIC);
    let mut rng = RandomSource::new(seed).stream(S_LUDER_IDEMPOTENT);
    for _ in 0..cases {
        let u = random_bloch_point(&mut rng);
        let dir = random_direction(&mut rng);
        let once = luder_single(&density_from_bloch(&u), &dir);
        rec.residual(luder_single(&once, &dir).max_abs_diff(&once), || {
            format!("{}, {}", fmt_point(&u), fmt_dir(&dir))
        });
    }
    rec.finish()
}

/// Surface overlap rule `(1 + p.q)/2` against the amplitude computation.
pub fn overlap_consistency(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("overlap_consistency", TOL_ALGEBRAIC);
    }
    let mut rec = Recorder::new("overlap_consistency", TOL_ALGEBRAIC);
    let mut rng = RandomSource::new(seed).stream(S_OVERLAP);
    for _ in 0..cases {
        let a = SpinPureState::new(rng.random_range(0.0..PI), rng.random_range(0.0..TAU))
            .expect("angles in range");
        let b = SpinPureState::new(rng.random_range(0.0..PI), rng.random_range(0.0..TAU))
            .expect("angles in range");
        let geometric =
            overlap_from_points(&a.bloch_point(), &b.bloch_point()).expect("surface points");
        let amplitude = a.amplitudes().inner(&b.amplitudes()).norm_sqr();
        rec.residual((geometric - amplitude).abs(), || {
            format!(
                "overlap at ({:.6}, {:.6}) vs ({:.6}, {:.6})",
                a.theta(),
                a.phi(),
                b.theta(),
                b.phi()
            )
        });
    }
    rec.finish()
}

/// Closed-form branch rule for measurements on axis states: the literal
/// two-branch transformation `u(s, 0, .) -> u(s cos t, t, p)` in front of the
/// equator and its mirrored form beyond it.
pub fn axis_measurement_rule(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("axis_measurement_rule", TOL_ALGEBRAIC);
    }
    let mut rec = Recorder::new("axis_measurement_rule", TOL_ALGEBRAIC);
    let mut rng = RandomSource::new(seed).stream(S_AXIS_RULE);
    for _ in 0..cases {
        let s: f64 = rng.random_range(0.0..1.0);
        let u = BlochPoint::new(s, 0.0, 0.0).expect("axis point");
        let dir = random_direction(&mut rng);
        let (theta, phi) = (dir.theta(), dir.phi());
        let expected = if theta <= PI / 2.0 {
            BlochPoint::new(s * theta.cos(), theta, phi)
        } else {
            BlochPoint::new(s * (PI - theta).cos(), PI - theta, phi + PI)
        }
        .expect("projected point stays in the ball");
        let actual = bloch_from_density(&luder_single(&density_from_bloch(&u), &dir))
            .expect("Luder output is a density matrix");
        rec.residual(actual.distance(&expected), || {
            format!("s={s:.9e}, {}", fmt_dir(&dir))
        });
    }
    rec.finish()
}

/// The constraint map does not depend on the expansion used to build it.
#[allow(clippy::needless_range_loop)]
pub fn canonical_definition(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("canonical_definition", TOL_EIGEN);
    }
    let mut rec = Recorder::new("canonical_definition", TOL_EIGEN);
    let mut rng = RandomSource::new(seed).stream(S_CANONICAL);
    for _ in 0..cases {
        let psi = random_two_qubit_state(&mut rng);
        let reference = constraint_f12(&psi);
        let grid = psi.computational_lambdas();
        for _ in 0..2 {
            let u1 = random_unit_spin(&mut rng);
            let b1 = [u1, u1.orthogonal()];
            let u2 = random_unit_spin(&mut rng);
            let b2 = [u2, u2.orthogonal()];
            let mut lambdas = [[Complex64::ZERO; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    let mut sum = Complex64::ZERO;
                    for k in 0..2 {
                        for l in 0..2 {
                            sum += b1[i].0[k].conj() * b2[j].0[l].conj() * grid[k][l];
                        }
                    }
                    lambdas[i][j] = sum;
                }
            }
            let expanded = TwoQubitState::from_expansion(lambdas, b1, b2)
                .expect("re-expansion keeps norm and orthonormality");
            let rebuilt = constraint_f12(&expanded);
            for _ in 0..5 {
                let x = random_vector2(&mut rng);
                rec.residual(rebuilt.apply(&x).max_abs_diff(&reference.apply(&x)), || {
                    fmt_state(&psi)
                });
            }
        }
    }
    rec.finish()
}

/// Conjugate linearity of the constraint maps.
pub fn conjugate_linearity(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("conjugate_linearity", TOL_ALGEBRAIC);
    }
    let mut rec = Recorder::new("conjugate_linearity", TOL_ALGEBRAIC);
    let mut rng = RandomSource::new(seed).stream(S_CONJUGATE);
    for _ in 0..cases {
        let psi = random_two_qubit_state(&mut rng);
        let f = if rng.random::<bool>() {
            constraint_f12(&psi)
        } else {
            constraint_f21(&psi)
        };
        let (x, y) = (random_vector2(&mut rng), random_vector2(&mut rng));
        let (alpha, beta) = (random_complex(&mut rng), random_complex(&mut rng));
        let lhs = f.apply(&(x * alpha + y * beta));
        let rhs = f.apply(&x) * alpha.conj() + f.apply(&y) * beta.conj();
        rec.residual(lhs.max_abs_diff(&rhs), || fmt_state(&psi));
    }
    rec.finish()
}

/// Compositions of the constraint maps reproduce both partial traces.
pub fn compose_partial_traces(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("compose_partial_traces", TOL_ALGEBRAIC);
    }
    let mut rec = Recorder::new("compose_partial_traces", TOL_ALGEBRAIC);
    let mut rng = RandomSource::new(seed).stream(S_COMPOSE);
    for _ in 0..cases {
        let psi = random_two_qubit_state(&mut rng);
        let f12 = constraint_f12(&psi);
        let f21 = constraint_f21(&psi);
        let amps = psi.amplitudes();
        let rho = Matrix4::outer(&amps, &amps);
        let d1 = partial_trace(&rho, Subsystem::First).expect("unit trace");
        let d2 = partial_trace(&rho, Subsystem::Second).expect("unit trace");
        let c1 = compose_constraints(&f21, &f12).expect("compatible directions");
        let c2 = compose_constraints(&f12, &f21).expect("compatible directions");
        rec.residual(c1.max_abs_diff(&d1), || fmt_state(&psi));
        rec.residual(c2.max_abs_diff(&d2), || fmt_state(&psi));
    }
    rec.finish()
}

/// Adjoint relation between the two constraint maps.
pub fn adjoint_relation(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("adjoint_relation", TOL_ALGEBRAIC);
    }
    let mut rec = Recorder::new("adjoint_relation", TOL_ALGEBRAIC);
    let mut rng = RandomSource::new(seed).stream(S_ADJOINT);
    for _ in 0..cases {
        let psi = random_two_qubit_state(&mut rng);
        let x1 = random_vector2(&mut rng);
        let x2 = random_vector2(&mut rng);
        let (lhs, rhs) = adjoint_relation_check(&psi, &x1, &x2);
        rec.residual((lhs - rhs).norm(), || fmt_state(&psi));
    }
    rec.finish()
}

/// Fixed Schmidt landmarks: singlet, product states, and the 0.6/0.8 state.
pub fn schmidt_landmarks(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("schmidt_landmarks", TOL_ALGEBRAIC);
    }
    let mut rec = Recorder::new("schmidt_landmarks", TOL_ALGEBRAIC);
    let mut rng = RandomSource::new(seed).stream(S_LANDMARKS);

    rec.residual(entanglement_parameter(&TwoQubitState::singlet()), || {
        "singlet should have r = 0".into()
    });

    for slot in 0..4 {
        let mut amps = [Complex64::ZERO; 4];
        amps[slot] = Complex64::ONE;
        let psi = TwoQubitState::from_amplitudes(Vector4::new(amps)).expect("basis state");
        rec.residual((entanglement_parameter(&psi) - 1.0).abs(), || {
            format!("basis product state |{slot:02b}> should have r = 1")
        });
    }

    for _ in 0..cases.min(32) {
        let a = random_unit_spin(&mut rng);
        let b = random_unit_spin(&mut rng);
        let psi = TwoQubitState::product(&a, &b).expect("unit product state");
        rec.residual((entanglement_parameter(&psi) - 1.0).abs(), || {
            format!("random product state, {}", fmt_state(&psi))
        });
    }

    let weighted = TwoQubitState::from_amplitudes(Vector4::new([
        Complex64::new(0.6, 0.0),
        Complex64::ZERO,
        Complex64::ZERO,
        Complex64::new(0.8, 0.0),
    ]))
    .expect("weighted state is unit");
    rec.residual((entanglement_parameter(&weighted) - 0.28).abs(), || {
        "0.6|00> + 0.8|11> should have r = 0.28".into()
    });
    let form = schmidt_decompose(&weighted);
    let (c1, c2) = form.coefficients();
    rec.residual((c1 - 0.8).abs().max((c2 - 0.6).abs()), || {
        "coefficients of the 0.6/0.8 state".into()
    });
    rec.finish()
}

/// Structural soundness of the Schmidt decomposition on random states.
pub fn schmidt_soundness(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("schmidt_soundness", TOL_EIGEN);
    }
    let mut rec = Recorder::new("schmidt_soundness", TOL_EIGEN);
    let mut rng = RandomSource::new(seed).stream(S_SOUNDNESS);
    for _ in 0..cases {
        let psi = random_two_qubit_state(&mut rng);
        let form = schmidt_decompose(&psi);
        let r = form.r();
        rec.require((0.0..=1.0).contains(&r), || {
            format!("r = {r} out of range, {}", fmt_state(&psi))
        });
        let (c1, c2) = form.coefficients();
        rec.residual((c1 * c1 + c2 * c2 - 1.0).abs(), || fmt_state(&psi));

        for basis in [form.basis1(), form.basis2()] {
            rec.residual(
                (basis[0].norm2() - 1.0)
                    .abs()
                    .max((basis[1].norm2() - 1.0).abs())
                    .max(basis[0].inner(&basis[1]).norm()),
                || fmt_state(&psi),
            );
        }

        // round-trip ray equality
        let rebuilt = reconstruct_state(&form);
        rec.residual((rebuilt.inner(&psi).norm() - 1.0).abs(), || fmt_state(&psi));

        // pole mapping: basis2 diagonalizes the second reduced density
        let d2 = compose_constraints(&constraint_f12(&psi), &constraint_f21(&psi))
            .expect("compatible directions");
        let [x21, x22] = form.basis2();
        rec.residual((d2 * x21 - x21 * (0.5 * (1.0 + r))).norm(), || {
            fmt_state(&psi)
        });
        rec.residual((d2 * x22 - x22 * (0.5 * (1.0 - r))).norm(), || {
            fmt_state(&psi)
        });

        // r is invariant under local unitaries on either side
        let u = random_unitary2(&mut rng);
        let id = Matrix2::identity();
        let (left, right) = if rng.random::<bool>() { (u, id) } else { (id, u) };
        let rotated = tensor_operator(&left, &right) * psi.amplitudes();
        let rotated = TwoQubitState::from_amplitudes_normalized(rotated)
            .expect("unitaries preserve the norm");
        rec.residual((entanglement_parameter(&rotated) - r).abs(), || {
            fmt_state(&psi)
        });
    }
    rec.finish()
}

/// Collapse probabilities of the two outcomes sum to one.
pub fn probability_normalization(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("probability_normalization", TOL_ALGEBRAIC);
    }
    let mut rec = Recorder::new("probability_normalization", TOL_ALGEBRAIC);
    let mut rng = RandomSource::new(seed).stream(S_PROBABILITY);
    for _ in 0..cases {
        let psi = random_two_qubit_state(&mut rng);
        let dir = random_direction(&mut rng);
        let (plus, minus) = if rng.random::<bool>() {
            collapse_on_first(&psi, &dir)
        } else {
            collapse_on_second(&psi, &dir)
        };
        rec.residual((plus.probability + minus.probability - 1.0).abs(), || {
            format!("{}, {}", fmt_state(&psi), fmt_dir(&dir))
        });
    }
    rec.finish()
}

/// A Luder measurement on one spin leaves the other spin's reduced density
/// matrix unchanged.
pub fn remote_invariance(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("remote_invariance", TOL_ALGEBRAIC);
    }
    let mut rec = Recorder::new("remote_invariance", TOL_ALGEBRAIC);
    let mut rng = RandomSource::new(seed).stream(S_REMOTE);
    for _ in 0..cases {
        let psi = random_two_qubit_state(&mut rng);
        let dir = random_direction(&mut rng);
        let side = if rng.random::<bool>() {
            Subsystem::First
        } else {
            Subsystem::Second
        };
        let (before, after) = crate::measurement::remote_invariance_check(&psi, &dir, side);
        rec.residual(before.max_abs_diff(&after), || {
            format!("{}, {}, side {side:?}", fmt_state(&psi), fmt_dir(&dir))
        });
    }
    rec.finish()
}

/// The measured spin's reduced state after Luder's rule matches the closed
/// form in the Schmidt frame, and the remote one stays diagonal there.
pub fn measured_side_rule(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("measured_side_rule", TOL_EIGEN);
    }
    let mut rec = Recorder::new("measured_side_rule", TOL_EIGEN);
    let mut rng = RandomSource::new(seed).stream(S_MEASURED_SIDE);
    for _ in 0..cases {
        let psi = random_two_qubit_state(&mut rng);
        let dir = random_direction(&mut rng);
        let form = schmidt_decompose(&psi);
        let r = form.r();
        let measure_first = rng.random::<bool>();

        let (after4, measured_basis, remote_basis, keep_measured, keep_remote) = if measure_first {
            (
                luder_on_first(&psi, &dir),
                form.basis1(),
                form.basis2(),
                Subsystem::First,
                Subsystem::Second,
            )
        } else {
            (
                luder_on_second(&psi, &dir),
                form.basis2(),
                form.basis1(),
                Subsystem::Second,
                Subsystem::First,
            )
        };

        let measured_after = partial_trace(&after4, keep_measured).expect("unit trace");
        let ray = dir.ray();
        let coords = Vector2::new(measured_basis[0].inner(&ray), measured_basis[1].inner(&ray));
        let (theta_s, phi_s) = angles_of_ray(&coords);
        let expected = measured_side_matrix(r, theta_s, phi_s);
        let actual = in_frame(&measured_after, &measured_basis);
        rec.residual(actual.max_abs_diff(&expected), || {
            format!("{}, {}", fmt_state(&psi), fmt_dir(&dir))
        });

        // the remote side reads diag((1 + r)/2, (1 - r)/2) in its Schmidt frame
        let remote_after = partial_trace(&after4, keep_remote).expect("unit trace");
        let diag = Matrix2::diag(
            Complex64::new(0.5 * (1.0 + r), 0.0),
            Complex64::new(0.5 * (1.0 - r), 0.0),
        );
        rec.residual(
            in_frame(&remote_after, &remote_basis).max_abs_diff(&diag),
            || format!("{}, {}", fmt_state(&psi), fmt_dir(&dir)),
        );
    }
    rec.finish()
}

/// Norm law `(1 + r cos t1)/2` and axis law `(r + cos t1)/(1 + r cos t1)` on
/// a 50x50 grid for the landmark values of `r`, both for Schmidt-diagonal
/// states and for the same states rotated by random local unitaries.
pub fn norm_axis_grid_laws(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("norm_axis_grid_laws", TOL_ALGEBRAIC);
    }
    let mut rec = Recorder::new("norm_axis_grid_laws", TOL_ALGEBRAIC);
    let mut rng = RandomSource::new(seed).stream(S_GRID_LAWS);
    for &r_target in &[0.0, 0.25, 0.5, 0.75, 1.0] {
        let diagonal = TwoQubitState::schmidt_diagonal(r_target).expect("r in range");
        let rotated = {
            let u = random_unitary2(&mut rng);
            let v = random_unitary2(&mut rng);
            let amps = tensor_operator(&u, &v) * diagonal.amplitudes();
            TwoQubitState::from_amplitudes_normalized(amps).expect("unitaries preserve the norm")
        };
        for psi in [diagonal, rotated] {
            let r = entanglement_parameter(&psi);
            let rows = sphere_deformation_grid(&psi, 50, 50).expect("grid shape is valid");
            rec.require(rows.len() == 2500, || "grid row count".into());
            for row in &rows {
                if row.is_degenerate() || (r >= 1.0 - 1e-9 && row.theta1 >= PI - 1e-9) {
                    rec.require(r >= 1.0 - 1e-9 && row.theta1 >= PI - 1e-9, || {
                        format!("unexpected degenerate row at theta1 = {}", row.theta1)
                    });
                    continue;
                }
                let denom = 1.0 + r * row.theta1.cos();
                rec.residual((row.norm2 - 0.5 * denom).abs(), || {
                    format!("norm law at r={r}, theta1={}", row.theta1)
                });
                rec.residual(
                    (row.axis_projection - (r + row.theta1.cos()) / denom).abs(),
                    || format!("axis law at r={r}, theta1={}", row.theta1),
                );
            }
        }
    }
    rec.finish()
}

/// The equator maps onto the cone `cos beta = r`.
pub fn cone_law(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("cone_law", TOL_ALGEBRAIC);
    }
    let mut rec = Recorder::new("cone_law", TOL_ALGEBRAIC);
    let mut rng = RandomSource::new(seed).stream(S_CONE);

    fn check(psi: &TwoQubitState, rec: &mut Recorder, rng: &mut ChaCha8Rng) {
        let r = entanglement_parameter(psi);
        let cone = cone_of_equator(psi);
        rec.residual((cone.cos_beta() - r).abs(), || format!("cone angle at r={r}"));
        let form = schmidt_decompose(psi);
        for _ in 0..100 {
            let x =
                SpinPureState::new(PI / 2.0, rng.random_range(0.0..TAU)).expect("equator point");
            match normalized_image_in_frame(psi, &form, &x) {
                Ok(image) => rec.residual((image.axis_projection - cone.cos_beta()).abs(), || {
                    format!("equator point at phi={}, r={r}", x.phi())
                }),
                Err(_) => rec.require(false, || "equator image must exist".into()),
            }
        }
    }

    for &r_target in &[0.0, 0.25, 0.5, 0.6, 0.75, 1.0] {
        let psi = TwoQubitState::schmidt_diagonal(r_target).expect("r in range");
        check(&psi, &mut rec, &mut rng);
    }
    for _ in 0..cases.min(20) {
        let psi = random_two_qubit_state(&mut rng);
        check(&psi, &mut rec, &mut rng);
    }
    rec.finish()
}

/// Antipodal points map to antipodal points exactly for the singlet: the
/// image inner product vanishes iff `r = 0`, with magnitude `r sin(t1) / 2`.
pub fn antipodal_iff_singlet(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("antipodal_iff_singlet", TOL_ALGEBRAIC);
    }
    let mut rec = Recorder::new("antipodal_iff_singlet", TOL_ALGEBRAIC);
    let mut rng = RandomSource::new(seed).stream(S_ANTIPODAL);
    let singlet = TwoQubitState::singlet();
    for _ in 0..cases {
        let x = SpinPureState::new(rng.random_range(0.0..PI), rng.random_range(0.0..TAU))
            .expect("angles in range");
        rec.residual(orthogonality_image(&singlet, &x).norm(), || {
            format!("singlet antipodal image at theta1={}", x.theta())
        });

        let psi = random_two_qubit_state(&mut rng);
        let r = entanglement_parameter(&psi);
        let non_polar = SpinPureState::new(
            rng.random_range(PI / 4.0..3.0 * PI / 4.0),
            rng.random_range(0.0..TAU),
        )
        .expect("angles in range");
        let value = orthogonality_image(&psi, &non_polar);
        rec.residual(
            (value.norm() - 0.5 * r * non_polar.theta().sin()).abs(),
            || fmt_state(&psi),
        );
        if r > 1e-6 {
            rec.require(value.norm() > TOL_ALGEBRAIC, || {
                format!("image inner product vanished at r={r}, {}", fmt_state(&psi))
            });
        }
    }
    rec.finish()
}

/// Images of a ray and its antipode are collinear with the axis point
/// `(0, 0, r)` of sphere 2.
pub fn collinearity(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("collinearity", TOL_EIGEN);
    }
    let mut rec = Recorder::new("collinearity", TOL_EIGEN);
    let mut rng = RandomSource::new(seed).stream(S_COLLINEAR);
    for _ in 0..cases {
        let psi = random_state_below(&mut rng, 1.0 - 1e-6);
        let x = SpinPureState::new(rng.random_range(0.0..PI), rng.random_range(0.0..TAU))
            .expect("angles in range");
        let (y_plus, y_minus, pivot) =
            line_image_check(&psi, &x).expect("r below the product threshold");
        let a = [
            y_plus[0] - pivot[0],
            y_plus[1] - pivot[1],
            y_plus[2] - pivot[2],
        ];
        let b = [
            y_minus[0] - pivot[0],
            y_minus[1] - pivot[1],
            y_minus[2] - pivot[2],
        ];
        let cross = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        let norm = (cross[0].powi(2) + cross[1].powi(2) + cross[2].powi(2)).sqrt();
        rec.residual(norm, || {
            format!("{}, ray at theta1={}", fmt_state(&psi), x.theta())
        });
    }
    rec.finish()
}

/// Constraint-function collapse against the brute-force 4x4 projector route:
/// probabilities agree and post states agree up to a global phase.
pub fn oracle_collapse_agreement(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("oracle_collapse_agreement", TOL_ALGEBRAIC);
    }
    let mut rec = Recorder::new("oracle_collapse_agreement", TOL_ALGEBRAIC);
    let mut rng = RandomSource::new(seed).stream(S_ORACLE_COLLAPSE);
    for _ in 0..cases {
        let psi = random_two_qubit_state(&mut rng);
        let dir = random_direction(&mut rng);
        let measure_first = rng.random::<bool>();
        let (outcomes, brute) = if measure_first {
            (
                collapse_on_first(&psi, &dir),
                brute_force_collapse(&psi, &dir),
            )
        } else {
            (
                collapse_on_second(&psi, &dir),
                brute_force_collapse_second(&psi, &dir),
            )
        };
        for (primary, oracle) in [(outcomes.0, brute[0]), (outcomes.1, brute[1])] {
            rec.residual((primary.probability - oracle.probability).abs(), || {
                format!("{}, {}", fmt_state(&psi), fmt_dir(&dir))
            });
            match (primary.remote, oracle.post) {
                (Some(remote), Some(post)) => {
                    let joint = if measure_first {
                        tensor_vector(&primary.measured, &remote)
                    } else {
                        tensor_vector(&remote, &primary.measured)
                    };
                    rec.residual((joint.inner(&post).norm() - 1.0).abs(), || {
                        format!("{}, {}", fmt_state(&psi), fmt_dir(&dir))
                    });
                }
                (None, None) => {}
                _ => rec.require(false, || {
                    format!(
                        "impossible-outcome disagreement, {}, {}",
                        fmt_state(&psi),
                        fmt_dir(&dir)
                    )
                }),
            }
        }
    }
    rec.finish()
}

/// Schmidt `r` from the eigenvector route against the SVD oracle.
pub fn oracle_schmidt_agreement(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("oracle_schmidt_agreement", TOL_EIGEN);
    }
    let mut rec = Recorder::new("oracle_schmidt_agreement", TOL_EIGEN);
    let mut rng = RandomSource::new(seed).stream(S_ORACLE_SCHMIDT);
    for _ in 0..cases {
        let psi = random_two_qubit_state(&mut rng);
        let svd = brute_force_schmidt(&psi);
        rec.residual((svd.r - entanglement_parameter(&psi)).abs(), || {
            fmt_state(&psi)
        });
    }
    rec.finish()
}

/// Monte Carlo frequencies stay within the three-sigma binomial bound of the
/// analytic probabilities. Residuals are normalized to the bound.
pub fn monte_carlo_bounds(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("monte_carlo_bounds", 1.0);
    }
    let mut rec = Recorder::new("monte_carlo_bounds", 1.0);
    let mut rng = RandomSource::new(seed).stream(S_MONTE_CARLO);
    let n = 100_000u64;
    let mc_cases = (cases / 20).max(1);
    for _ in 0..mc_cases {
        let psi = random_two_qubit_state(&mut rng);
        let dir = random_direction(&mut rng);
        let p = brute_force_collapse(&psi, &dir)[0].probability;
        let source = RandomSource::new(rng.random::<u64>());
        let dist = monte_carlo_outcomes(&psi, &dir, n, &source);
        let bound = 3.0 * (p * (1.0 - p) / n as f64).sqrt();
        if bound == 0.0 {
            let expected = if p >= 1.0 { n } else { 0 };
            rec.require(dist.counts()[0] == expected, || {
                format!("deterministic outcome missed, p={p}")
            });
        } else {
            rec.residual((dist.frequency(0) - p).abs() / bound, || {
                format!(
                    "frequency {} vs p={p} (bound {bound:.3e}), {}",
                    dist.frequency(0),
                    fmt_state(&psi)
                )
            });
        }
    }
    rec.finish()
}

/// Identical seeds reproduce identical draws bit for bit.
pub fn rng_determinism(seed: u64, cases: usize) -> SuiteReport {
    if cases == 0 {
        return Recorder::vacuous("rng_determinism", TOL_ALGEBRAIC);
    }
    let mut rec = Recorder::new("rng_determinism", TOL_ALGEBRAIC);
    let source = RandomSource::new(seed);
    let mut a = source.stream(S_DETERMINISM);
    let mut b = source.stream(S_DETERMINISM);
    for _ in 0..cases.min(100) {
        let x = random_two_qubit_state(&mut a);
        let y = random_two_qubit_state(&mut b);
        rec.require(x.amplitudes().0 == y.amplitudes().0, || {
            "same seed produced different amplitudes".into()
        });
    }
    let psi = TwoQubitState::singlet();
    let dir = MeasurementDirection::new(1.0, 2.0).expect("angles in range");
    let d1 = monte_carlo_outcomes(&psi, &dir, 30_000, &RandomSource::new(seed));
    let d2 = monte_carlo_outcomes(&psi, &dir, 30_000, &RandomSource::new(seed));
    rec.require(d1.counts() == d2.counts(), || {
        "Monte Carlo counts differ across identical runs".into()
    });
    rec.finish()
}

/// Runs every suite on substreams of one master seed.
pub fn run_all(seed: u64, cases: usize) -> Vec<SuiteReport> {
    vec![
        linalg_identities(seed, cases),
        eigen_reconstruction(seed, cases),
        bloch_round_trip(seed, cases),
        luder_geometry(seed, cases),
        little_sphere_law(seed, cases),
        luder_idempotence(seed, cases),
        overlap_consistency(seed, cases),
        axis_measurement_rule(seed, cases),
        canonical_definition(seed, cases),
        conjugate_linearity(seed, cases),
        compose_partial_traces(seed, cases),
        adjoint_relation(seed, cases),
        schmidt_landmarks(seed, cases),
        schmidt_soundness(seed, cases),
        probability_normalization(seed, cases),
        remote_invariance(seed, cases),
        measured_side_rule(seed, cases),
        norm_axis_grid_laws(seed, cases),
        cone_law(seed, cases),
        antipodal_iff_singlet(seed, cases),
        collinearity(seed, cases),
        oracle_collapse_agreement(seed, cases),
        oracle_schmidt_agreement(seed, cases),
        monte_carlo_bounds(seed, cases),
        rng_determinism(seed, cases),
    ]
}
