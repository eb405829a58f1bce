//! Measurements on the entangled pair and their geometric images.
//!
//! A non-selective (Luder) measurement on one spin leaves the other spin's
//! reduced density matrix untouched: the spins behave as separated entities.
//! A collapse (Von Neumann) measurement instead drags the other spin through
//! the constraint map, which on the second sphere acts as a rotation plus a
//! stretching toward the north pole of the Schmidt frame: the squared norm of
//! an image is `(1 + r cos t1)/2`, the equator lands on the cone of half
//! angle `arccos r`, and straight lines through the center of sphere 1 map to
//! straight lines through the axis point `(0, 0, r)` of sphere 2.
//!
//! The closed-form laws live in the Schmidt frame; operations taking
//! [`SpinPureState`] inputs interpret the angles relative to the Schmidt
//! bases and say so explicitly rather than silently rotating.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bloch::{MeasurementDirection, SpinPureState};
use crate::entangle::{
    constraint_f12, constraint_f21, schmidt_decompose, SchmidtForm, TwoQubitState, DEGENERATE_R,
};
use crate::error::{Error, Result};
use crate::linalg::{partial_trace, tensor_operator, Matrix2, Matrix4, Subsystem, Vector2};
use crate::ZERO_IMAGE_NORM2;

/// One outcome of a collapse measurement on a single spin of the pair.
///
/// `probability` equals the squared norm of the unnormalized constraint image
/// of the measured ray. The post-measurement joint state is the product of
/// `measured` and `remote`; a `None` remote marks an impossible outcome
/// (probability zero), for which no direction is defined.
#[derive(Clone, Copy, Debug)]
pub struct CollapseResult {
    pub probability: f64,
    /// Collapsed state of the measured spin (the measurement ray itself).
    pub measured: Vector2,
    /// Collapsed state of the other spin, `None` for an impossible outcome.
    pub remote: Option<Vector2>,
    /// Squared norm of the unnormalized constraint image.
    pub remote_norm2: f64,
}

impl CollapseResult {
    pub fn is_impossible(&self) -> bool {
        self.remote.is_none()
    }

    fn from_image(measured: Vector2, image: Vector2) -> CollapseResult {
        let norm2 = image.norm2();
        let remote = if norm2 <= ZERO_IMAGE_NORM2 {
            None
        } else {
            Some(image * (1.0 / norm2.sqrt()))
        };
        CollapseResult {
            probability: norm2,
            measured,
            remote,
            remote_norm2: norm2,
        }
    }
}

/// Normalized image of a sphere-1 ray on sphere 2, in Schmidt-frame angles.
#[derive(Clone, Copy, Debug)]
pub struct ImagePoint {
    pub theta2: f64,
    pub phi2: f64,
    /// Squared norm of the unnormalized image, `(1 + r cos t1)/2`.
    pub norm2: f64,
    /// Projection of the image onto the north-south axis of sphere 2,
    /// `(r + cos t1)/(1 + r cos t1)`.
    pub axis_projection: f64,
}

/// Image of sphere 1's equator on sphere 2: a cone of half angle `beta`
/// around the north-south axis with `cos beta = r`.
#[derive(Clone, Copy, Debug)]
pub struct ConeResult {
    pub beta: f64,
}

impl ConeResult {
    pub fn cos_beta(&self) -> f64 {
        self.beta.cos()
    }
}

/// Row of a sphere-deformation table. Angles are Schmidt-frame on both
/// spheres; a degenerate row (zero image) carries NaN in the image columns.
#[derive(Clone, Copy, Debug)]
pub struct GridRow {
    pub theta1: f64,
    pub phi1: f64,
    pub theta2: f64,
    pub phi2: f64,
    pub norm2: f64,
    pub axis_projection: f64,
}

impl GridRow {
    pub fn is_degenerate(&self) -> bool {
        self.theta2.is_nan()
    }
}

/// Both outcomes of a collapse measurement on the first spin, along `dir`
/// and its antipode. The direction is a lab direction (computational frame).
pub fn collapse_on_first(
    psi: &TwoQubitState,
    dir: &MeasurementDirection,
) -> (CollapseResult, CollapseResult) {
    let f12 = constraint_f12(psi);
    let plus_ray = dir.ray();
    let minus_ray = dir.antipode().ray();
    (
        CollapseResult::from_image(plus_ray, f12.apply(&plus_ray)),
        CollapseResult::from_image(minus_ray, f12.apply(&minus_ray)),
    )
}

/// Mirror of [`collapse_on_first`] for a measurement on the second spin;
/// `measured` is then the second spin's state and `remote` the first's.
pub fn collapse_on_second(
    psi: &TwoQubitState,
    dir: &MeasurementDirection,
) -> (CollapseResult, CollapseResult) {
    let f21 = constraint_f21(psi);
    let plus_ray = dir.ray();
    let minus_ray = dir.antipode().ray();
    (
        CollapseResult::from_image(plus_ray, f21.apply(&plus_ray)),
        CollapseResult::from_image(minus_ray, f21.apply(&minus_ray)),
    )
}

fn luder_on(psi: &TwoQubitState, dir: &MeasurementDirection, side: Subsystem) -> Matrix4 {
    let p = dir.projector_matrix();
    let q = Matrix2::identity() - p;
    let id = Matrix2::identity();
    let (p4, q4) = match side {
        Subsystem::First => (tensor_operator(&p, &id), tensor_operator(&q, &id)),
        Subsystem::Second => (tensor_operator(&id, &p), tensor_operator(&id, &q)),
    };
    let amps = psi.amplitudes();
    let rho = Matrix4::outer(&amps, &amps);
    p4 * rho * p4 + q4 * rho * q4
}

/// Joint density matrix after a non-selective measurement of the first spin:
/// `(P (x) 1) D (P (x) 1) + ((1-P) (x) 1) D ((1-P) (x) 1)`.
pub fn luder_on_first(psi: &TwoQubitState, dir: &MeasurementDirection) -> Matrix4 {
    luder_on(psi, dir, Subsystem::First)
}

/// Mirror of [`luder_on_first`] for a measurement on the second spin.
pub fn luder_on_second(psi: &TwoQubitState, dir: &MeasurementDirection) -> Matrix4 {
    luder_on(psi, dir, Subsystem::Second)
}

/// Reduced density matrix of the unmeasured spin before and after a Luder
/// measurement of `measured` along `dir`; the two are equal.
pub fn remote_invariance_check(
    psi: &TwoQubitState,
    dir: &MeasurementDirection,
    measured: Subsystem,
) -> (Matrix2, Matrix2) {
    let amps = psi.amplitudes();
    let rho = Matrix4::outer(&amps, &amps);
    let keep = measured.other();
    let before = partial_trace(&rho, keep).expect("pure state density has unit trace");
    let after = partial_trace(&luder_on(psi, dir, measured), keep)
        .expect("Luder's rule preserves the trace");
    (before, after)
}

/// Normalized constraint image of the sphere-1 ray at Schmidt-frame angles
/// `(x.theta, x.phi)`, reported in Schmidt-frame angles of sphere 2.
///
/// Fails with [`Error::DegenerateImage`] for the zero image (product state
/// measured at its south pole).
pub fn normalized_image(psi: &TwoQubitState, x: &SpinPureState) -> Result<ImagePoint> {
    let form = schmidt_decompose(psi);
    normalized_image_in_frame(psi, &form, x)
}

/// As [`normalized_image`] with a precomputed Schmidt form, for callers that
/// map many points of the same state.
pub fn normalized_image_in_frame(
    psi: &TwoQubitState,
    form: &SchmidtForm,
    x: &SpinPureState,
) -> Result<ImagePoint> {
    let input = form.first_ray_from_angles(x.theta(), x.phi());
    let image = constraint_f12(psi).apply(&input);
    let norm2 = image.norm2();
    if norm2 <= ZERO_IMAGE_NORM2 {
        return Err(Error::DegenerateImage);
    }
    let normalized = image * (1.0 / norm2.sqrt());
    let (theta2, phi2) = form.second_angles(&normalized);
    Ok(ImagePoint {
        theta2,
        phi2,
        norm2,
        axis_projection: form.second_axis_projection(&normalized),
    })
}

/// Cone image of sphere 1's equator on sphere 2, `beta = arccos r`.
pub fn cone_of_equator(psi: &TwoQubitState) -> ConeResult {
    let form = schmidt_decompose(psi);
    ConeResult {
        beta: form.r().clamp(0.0, 1.0).acos(),
    }
}

/// Sphere-2 Cartesian images (Schmidt frame) of a ray and its antipode,
/// together with the pivot `(0, 0, r)` the connecting line passes through.
pub fn line_image_check(
    psi: &TwoQubitState,
    x: &SpinPureState,
) -> Result<([f64; 3], [f64; 3], [f64; 3])> {
    let form = schmidt_decompose(psi);
    let r = form.r();
    if r >= 1.0 - DEGENERATE_R {
        return Err(Error::ProductStateDegenerate(r));
    }
    let f12 = constraint_f12(psi);
    let image = |s: &SpinPureState| -> Result<[f64; 3]> {
        let input = form.first_ray_from_angles(s.theta(), s.phi());
        let mapped = f12.apply(&input).normalized()?;
        Ok(form.second_cartesian(&mapped))
    };
    let y_plus = image(x)?;
    let y_minus = image(&x.antipode())?;
    Ok((y_plus, y_minus, [0.0, 0.0, r]))
}

/// Inner product of the constraint images of a ray and its antipode,
/// `<F12(psi_u), F12(psi_-u)>`; zero exactly when `r = 0` (away from the
/// poles, where it vanishes for every state).
pub fn orthogonality_image(psi: &TwoQubitState, x: &SpinPureState) -> Complex64 {
    let form = schmidt_decompose(psi);
    let f12 = constraint_f12(psi);
    let up = f12.apply(&form.first_ray_from_angles(x.theta(), x.phi()));
    let antipode = x.antipode();
    let down = f12.apply(&form.first_ray_from_angles(antipode.theta(), antipode.phi()));
    up.inner(&down)
}

/// Regular Schmidt-frame grid of sphere-1 rays and their sphere-2 images,
/// ordered theta-major. Degenerate points are kept as flagged rows.
pub fn sphere_deformation_grid(
    psi: &TwoQubitState,
    n_theta: usize,
    n_phi: usize,
) -> Result<Vec<GridRow>> {
    if n_theta < 2 || n_phi < 1 {
        return Err(Error::GridTooSmall {
            ntheta: n_theta,
            nphi: n_phi,
        });
    }
    let form = schmidt_decompose(psi);
    let mut rows = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let theta1 = PI * i as f64 / (n_theta - 1) as f64;
        for j in 0..n_phi {
            let phi1 = 2.0 * PI * j as f64 / n_phi as f64;
            let x = SpinPureState::new(theta1, phi1).expect("grid angles are in range");
            let row = match normalized_image_in_frame(psi, &form, &x) {
                Ok(image) => GridRow {
                    theta1,
                    phi1,
                    theta2: image.theta2,
                    phi2: image.phi2,
                    norm2: image.norm2,
                    axis_projection: image.axis_projection,
                },
                Err(Error::DegenerateImage) => GridRow {
                    theta1,
                    phi1,
                    theta2: f64::NAN,
                    phi2: f64::NAN,
                    norm2: 0.0,
                    axis_projection: f64::NAN,
                },
                Err(other) => return Err(other),
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::bloch_from_density;
    use crate::entangle::entanglement_parameter;
    use crate::linalg::{c, Vector4};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, TAU};

    const TOL: f64 = 1e-12;

    fn re(x: f64) -> Complex64 {
        c(x, 0.0)
    }

    fn weighted() -> TwoQubitState {
        TwoQubitState::from_amplitudes(Vector4::new([
            re(0.6),
            Complex64::ZERO,
            Complex64::ZERO,
            re(0.8),
        ]))
        .unwrap()
    }

    fn random_state(rng: &mut ChaCha8Rng) -> TwoQubitState {
        let mut parts = [Complex64::ZERO; 4];
        for z in parts.iter_mut() {
            *z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        TwoQubitState::from_amplitudes_normalized(Vector4::new(parts)).unwrap()
    }

    fn random_direction(rng: &mut ChaCha8Rng) -> MeasurementDirection {
        let cos_t: f64 = rng.random_range(-1.0..1.0);
        MeasurementDirection::new(cos_t.acos(), rng.random_range(0.0..TAU)).unwrap()
    }

    #[test]
    fn singlet_collapse_is_anticorrelated() {
        let psi = TwoQubitState::singlet();
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..100 {
            let dir = random_direction(&mut rng);
            let (plus, minus) = collapse_on_first(&psi, &dir);
            assert!((plus.probability - 0.5).abs() <= TOL);
            assert!((minus.probability - 0.5).abs() <= TOL);
            // the second spin lands on the ray antipodal to the measured one
            let remote = plus.remote.unwrap();
            let antipodal_ray = dir.antipode().ray();
            assert!((remote.inner(&antipodal_ray).norm() - 1.0).abs() <= TOL);
        }
    }

    #[test]
    fn collapse_probabilities_follow_schmidt_frame_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for _ in 0..300 {
            let psi = random_state(&mut rng);
            let dir = random_direction(&mut rng);
            let form = schmidt_decompose(&psi);
            let (plus, minus) = collapse_on_first(&psi, &dir);
            assert!((plus.probability + minus.probability - 1.0).abs() <= TOL);
            // probability = (1 + r cos t)/2 with t measured from x1_1
            let overlap2 = form.basis1()[0].inner(&dir.ray()).norm_sqr();
            let cos_t = 2.0 * overlap2 - 1.0;
            let expected = 0.5 * (1.0 + form.r() * cos_t);
            assert!((plus.probability - expected).abs() <= TOL);
        }
    }

    #[test]
    fn collapse_along_schmidt_pole_hits_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        for r in [0.0, 0.3, 0.9] {
            let psi = TwoQubitState::schmidt_diagonal(r).unwrap();
            let dir = MeasurementDirection::new(0.0, rng.random_range(0.0..TAU)).unwrap();
            let (plus, minus) = collapse_on_first(&psi, &dir);
            assert!((plus.probability - 0.5 * (1.0 + r)).abs() <= TOL);
            assert!((minus.probability - 0.5 * (1.0 - r)).abs() <= TOL);
        }
    }

    #[test]
    fn weighted_state_collapse_along_z() {
        let (plus, minus) =
            collapse_on_first(&weighted(), &MeasurementDirection::new(0.0, 0.0).unwrap());
        assert!((plus.probability - 0.36).abs() <= TOL);
        assert!((minus.probability - 0.64).abs() <= TOL);
        let up = plus.remote.unwrap();
        let down = minus.remote.unwrap();
        assert!((up.inner(&Vector2::basis(0)).norm() - 1.0).abs() <= TOL);
        assert!((down.inner(&Vector2::basis(1)).norm() - 1.0).abs() <= TOL);
    }

    #[test]
    fn impossible_outcome_is_flagged() {
        let psi = TwoQubitState::from_amplitudes(Vector4::new([
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
        ]))
        .unwrap();
        let (plus, minus) =
            collapse_on_first(&psi, &MeasurementDirection::new(0.0, 0.0).unwrap());
        assert!((plus.probability - 1.0).abs() <= TOL);
        assert!(!plus.is_impossible());
        assert!(minus.probability <= TOL);
        assert!(minus.is_impossible());
    }

    #[test]
    fn luder_leaves_remote_partial_trace_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        for _ in 0..300 {
            let psi = random_state(&mut rng);
            let dir = random_direction(&mut rng);
            let side = if rng.random::<bool>() {
                Subsystem::First
            } else {
                Subsystem::Second
            };
            let (before, after) = remote_invariance_check(&psi, &dir, side);
            assert!(before.max_abs_diff(&after) <= TOL);
        }
    }

    #[test]
    fn weighted_state_remote_trace() {
        let dir = MeasurementDirection::new(FRAC_PI_3, PI / 5.0).unwrap();
        let (before, after) = remote_invariance_check(&weighted(), &dir, Subsystem::First);
        let expected = Matrix2::diag(re(0.36), re(0.64));
        assert!(before.max_abs_diff(&expected) <= TOL);
        assert!(after.max_abs_diff(&expected) <= TOL);
    }

    #[test]
    fn luder_measured_side_follows_single_spin_rule() {
        // The measured side's reduced state moves exactly like a single spin
        // under the orthogonal-projection rule.
        let mut rng = ChaCha8Rng::seed_from_u64(89);
        for _ in 0..200 {
            let psi = random_state(&mut rng);
            let dir = random_direction(&mut rng);
            let amps = psi.amplitudes();
            let rho = Matrix4::outer(&amps, &amps);
            let before = partial_trace(&rho, Subsystem::First).unwrap();
            let after = partial_trace(&luder_on_first(&psi, &dir), Subsystem::First).unwrap();
            let expected = crate::bloch::geometric_projection(
                &bloch_from_density(&before).unwrap(),
                &dir,
            );
            assert!(bloch_from_density(&after).unwrap().distance(&expected) <= 1e-9);
        }
    }

    #[test]
    fn luder_on_product_state_keeps_second_factor() {
        let a = Vector2::new(re(0.6), c(0.0, 0.8));
        let b = Vector2::new(re(1.0 / 2.0f64.sqrt()), re(1.0 / 2.0f64.sqrt()));
        let psi = TwoQubitState::product(&a, &b).unwrap();
        let dir = MeasurementDirection::new(1.1, 0.4).unwrap();
        let d_after = luder_on_first(&psi, &dir);
        let second = partial_trace(&d_after, Subsystem::Second).unwrap();
        assert!(second.max_abs_diff(&Matrix2::outer(&b, &b)) <= TOL);
        // the joint state stays the product of its partial traces
        let first = partial_trace(&d_after, Subsystem::First).unwrap();
        assert!(d_after.max_abs_diff(&tensor_operator(&first, &second)) <= TOL);
    }

    #[test]
    fn image_laws_at_landmark_angles() {
        let psi = TwoQubitState::schmidt_diagonal(0.5).unwrap();
        let north = normalized_image(&psi, &SpinPureState::new(0.0, 0.0).unwrap()).unwrap();
        assert!((north.axis_projection - 1.0).abs() <= TOL);
        assert!((north.norm2 - 0.75).abs() <= TOL);

        let south = normalized_image(&psi, &SpinPureState::new(PI, 0.0).unwrap()).unwrap();
        assert!((south.axis_projection + 1.0).abs() <= TOL);

        let equator =
            normalized_image(&psi, &SpinPureState::new(FRAC_PI_2, 1.3).unwrap()).unwrap();
        assert!((equator.axis_projection - 0.5).abs() <= TOL);
    }

    #[test]
    fn image_matches_inproduct_scaling() {
        // |<y, x2_1>| = sqrt((1+r)/(1+r cos t1)) |<x, x1_1>|, phases included.
        let mut rng = ChaCha8Rng::seed_from_u64(97);
        for _ in 0..200 {
            let psi = random_state(&mut rng);
            let form = schmidt_decompose(&psi);
            let r = form.r();
            if r >= 1.0 - 1e-6 {
                continue;
            }
            let theta1: f64 = rng.random_range(0.0..PI);
            let phi1: f64 = rng.random_range(0.0..TAU);
            let input = form.first_ray_from_angles(theta1, phi1);
            let y = constraint_f12(&psi).apply(&input).normalized().unwrap();
            let lhs = y.inner(&form.basis2()[0]);
            let scale = ((1.0 + r) / (1.0 + r * theta1.cos())).sqrt();
            let rhs = input.inner(&form.basis1()[0]).conj() * scale;
            assert!((lhs - rhs).norm() <= TOL);
        }
    }

    #[test]
    fn degenerate_image_errors_cleanly() {
        let psi = TwoQubitState::schmidt_diagonal(1.0).unwrap();
        let south = SpinPureState::new(PI, 0.0).unwrap();
        assert!(matches!(
            normalized_image(&psi, &south),
            Err(Error::DegenerateImage)
        ));
    }

    #[test]
    fn cone_examples() {
        assert!((cone_of_equator(&TwoQubitState::singlet()).beta - FRAC_PI_2).abs() <= TOL);
        let product = TwoQubitState::schmidt_diagonal(1.0).unwrap();
        assert!(cone_of_equator(&product).beta.abs() <= TOL);
        let mid = TwoQubitState::schmidt_diagonal(0.6).unwrap();
        assert!((cone_of_equator(&mid).beta - 0.6f64.acos()).abs() <= TOL);
        // 100 sampled equator points land on the cone
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let beta = cone_of_equator(&mid).beta;
        for _ in 0..100 {
            let x = SpinPureState::new(FRAC_PI_2, rng.random_range(0.0..TAU)).unwrap();
            let image = normalized_image(&mid, &x).unwrap();
            assert!((image.axis_projection - beta.cos()).abs() <= TOL);
        }
    }

    #[test]
    fn lines_pass_through_the_axis_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        for _ in 0..300 {
            let psi = random_state(&mut rng);
            if entanglement_parameter(&psi) >= 1.0 - 1e-6 {
                continue;
            }
            let x = SpinPureState::new(
                rng.random_range(0.0..PI),
                rng.random_range(0.0..TAU),
            )
            .unwrap();
            let (y_plus, y_minus, pivot) = line_image_check(&psi, &x).unwrap();
            let a = [y_plus[0] - pivot[0], y_plus[1] - pivot[1], y_plus[2] - pivot[2]];
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
            assert!(norm <= 1e-9);
        }
    }

    #[test]
    fn line_image_explicit_case() {
        let psi = TwoQubitState::schmidt_diagonal(0.5).unwrap();
        let x = SpinPureState::new(FRAC_PI_3, 1.1).unwrap();
        let (y_plus, y_minus, pivot) = line_image_check(&psi, &x).unwrap();
        assert!((pivot[2] - 0.5).abs() <= TOL);
        let a = [y_plus[0] - pivot[0], y_plus[1] - pivot[1], y_plus[2] - pivot[2]];
        let b = [
            y_minus[0] - pivot[0],
            y_minus[1] - pivot[1],
            y_minus[2] - pivot[2],
        ];
        let cross_norm = ((a[1] * b[2] - a[2] * b[1]).powi(2)
            + (a[2] * b[0] - a[0] * b[2]).powi(2)
            + (a[0] * b[1] - a[1] * b[0]).powi(2))
        .sqrt();
        assert!(cross_norm <= 1e-9);
    }

    #[test]
    fn singlet_maps_antipodes_to_antipodes() {
        let psi = TwoQubitState::singlet();
        let mut rng = ChaCha8Rng::seed_from_u64(107);
        for _ in 0..100 {
            let x = SpinPureState::new(
                rng.random_range(0.0..PI),
                rng.random_range(0.0..TAU),
            )
            .unwrap();
            assert!(orthogonality_image(&psi, &x).norm() <= TOL);
        }
    }

    #[test]
    fn orthogonality_image_magnitude_is_half_r_sin_theta() {
        let mut rng = ChaCha8Rng::seed_from_u64(109);
        for _ in 0..200 {
            let psi = random_state(&mut rng);
            let r = entanglement_parameter(&psi);
            let theta1: f64 = rng.random_range(0.0..PI);
            let x = SpinPureState::new(theta1, rng.random_range(0.0..TAU)).unwrap();
            let value = orthogonality_image(&psi, &x);
            assert!((value.norm() - 0.5 * r * theta1.sin()).abs() <= TOL);
        }
        // poles map to poles for every state
        let psi = TwoQubitState::schmidt_diagonal(0.5).unwrap();
        for theta in [0.0, PI] {
            let x = SpinPureState::new(theta, 0.0).unwrap();
            assert!(orthogonality_image(&psi, &x).norm() <= TOL);
        }
    }

    #[test]
    fn grid_shape_and_laws() {
        let psi = TwoQubitState::schmidt_diagonal(0.5).unwrap();
        let rows = sphere_deformation_grid(&psi, 5, 8).unwrap();
        assert_eq!(rows.len(), 40);
        // theta-major ordering
        assert!(rows.windows(2).all(|w| w[0].theta1 <= w[1].theta1 + TOL));
        for row in &rows {
            assert!(!row.is_degenerate());
            let expected_norm2 = 0.5 * (1.0 + 0.5 * row.theta1.cos());
            assert!((row.norm2 - expected_norm2).abs() <= TOL);
            let expected_axis =
                (0.5 + row.theta1.cos()) / (1.0 + 0.5 * row.theta1.cos());
            assert!((row.axis_projection - expected_axis).abs() <= TOL);
        }
    }

    #[test]
    fn grid_flags_degenerate_rows_at_r_one() {
        let psi = TwoQubitState::schmidt_diagonal(1.0).unwrap();
        let rows = sphere_deformation_grid(&psi, 5, 4).unwrap();
        for row in &rows {
            if (row.theta1 - PI).abs() <= TOL {
                assert!(row.is_degenerate());
                assert!(row.norm2 <= TOL);
            } else {
                assert!((row.axis_projection - 1.0).abs() <= TOL);
            }
        }
    }

    #[test]
    fn grid_for_singlet_reflects_sphere() {
        // In the paired Schmidt frames the lab-frame antipodal map of the
        // singlet reads as theta2 = theta1, phi2 = -phi1: the antipode is
        // absorbed into the basis pairing, and azimuths are mirrored.
        let rows = sphere_deformation_grid(&TwoQubitState::singlet(), 7, 6).unwrap();
        for row in &rows {
            assert!((row.norm2 - 0.5).abs() <= TOL);
            assert!((row.axis_projection - row.theta1.cos()).abs() <= TOL);
            assert!((row.theta2 - row.theta1).abs() <= TOL);
            if row.theta1 > 0.0 && row.theta1 < PI {
                let mirrored = crate::bloch::wrap_angle(-row.phi1);
                let diff = (row.phi2 - mirrored).abs();
                assert!(diff <= TOL || (diff - TAU).abs() <= TOL);
            }
        }
    }

    #[test]
    fn grid_axis_projection_monotone_in_cos_theta() {
        let psi = TwoQubitState::schmidt_diagonal(0.3).unwrap();
        let rows = sphere_deformation_grid(&psi, 20, 1).unwrap();
        for w in rows.windows(2) {
            // theta increases, so cos theta and the axis projection decrease
            assert!(w[1].axis_projection <= w[0].axis_projection + TOL);
        }
    }

    #[test]
    fn grid_validates_shape() {
        let psi = TwoQubitState::singlet();
        assert!(matches!(
            sphere_deformation_grid(&psi, 1, 4),
            Err(Error::GridTooSmall { .. })
        ));
        assert!(matches!(
            sphere_deformation_grid(&psi, 4, 0),
            Err(Error::GridTooSmall { .. })
        ));
    }

    #[test]
    fn collapse_on_second_mirrors_first() {
        let mut rng = ChaCha8Rng::seed_from_u64(113);
        for _ in 0..200 {
            let psi = random_state(&mut rng);
            let dir = random_direction(&mut rng);
            let (plus, minus) = collapse_on_second(&psi, &dir);
            assert!((plus.probability + minus.probability - 1.0).abs() <= TOL);
        }
    }
}
