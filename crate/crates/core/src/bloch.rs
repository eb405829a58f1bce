//! The sphere model of a single spin 1/2.
//!
//! A point `u(r, theta, phi)` of the closed unit ball stands for the density
//! matrix `D(r, theta, phi)`; surface points are pure states, the center is
//! the maximally mixed state. A non-selective measurement along a direction
//! acts on the ball as the ordinary orthogonal projection onto the
//! measurement axis, so the states reachable from a point `u` form the small
//! sphere with north pole `u` and south pole the center of the ball.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{projector, Matrix2, Vector2};
use crate::TOL_ALGEBRAIC;

/// Wraps an angle into `[0, 2*pi)`.
pub fn wrap_angle(phi: f64) -> f64 {
    let t = phi.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

fn check_polar(theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::NonFinite("polar angle"));
    }
    if !(-TOL_ALGEBRAIC..=PI + TOL_ALGEBRAIC).contains(&theta) {
        return Err(Error::AngleOutOfRange(theta));
    }
    Ok(theta.clamp(0.0, PI))
}

/// Point `(r, theta, phi)` of the closed unit ball.
///
/// Canonical form: `phi` lies in `[0, 2*pi)` and is forced to zero at the
/// poles and at the center, so that equal states compare equal.
#[derive(Clone, Copy, Debug)]
pub struct BlochPoint {
    r: f64,
    theta: f64,
    phi: f64,
}

impl BlochPoint {
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !r.is_finite() || !phi.is_finite() {
            return Err(Error::NonFinite("Bloch point"));
        }
        if !(-TOL_ALGEBRAIC..=1.0 + TOL_ALGEBRAIC).contains(&r) {
            return Err(Error::RadiusOutOfRange(r));
        }
        let r = r.clamp(0.0, 1.0);
        let mut theta = check_polar(theta)?;
        let mut phi = wrap_angle(phi);
        if r == 0.0 {
            theta = 0.0;
        }
        if theta == 0.0 || theta == PI {
            phi = 0.0;
        }
        Ok(BlochPoint { r, theta, phi })
    }

    pub fn center() -> Self {
        BlochPoint {
            r: 0.0,
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub fn from_cartesian(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::NonFinite("Cartesian point"));
        }
        let r = (x * x + y * y + z * z).sqrt();
        if r > 1.0 + TOL_ALGEBRAIC {
            return Err(Error::RadiusOutOfRange(r));
        }
        if r == 0.0 {
            return Ok(Self::center());
        }
        let theta = (z / r).clamp(-1.0, 1.0).acos();
        let phi = wrap_angle(y.atan2(x));
        Self::new(r.min(1.0), theta, phi)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn cartesian(&self) -> [f64; 3] {
        [
            self.r * self.theta.sin() * self.phi.cos(),
            self.r * self.theta.sin() * self.phi.sin(),
            self.r * self.theta.cos(),
        ]
    }

    pub fn dot(&self, other: &BlochPoint) -> f64 {
        let a = self.cartesian();
        let b = other.cartesian();
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    /// Euclidean distance between the Cartesian forms; the natural metric for
    /// comparing canonicalized points.
    pub fn distance(&self, other: &BlochPoint) -> f64 {
        let a = self.cartesian();
        let b = other.cartesian();
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    }
}

/// Pure spin state at `(theta, phi)` with amplitude form
/// `(cos(theta/2) e^{-i phi/2}, sin(theta/2) e^{i phi/2})`.
#[derive(Clone, Copy, Debug)]
pub struct SpinPureState {
    theta: f64,
    phi: f64,
}

impl SpinPureState {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::NonFinite("azimuth"));
        }
        let theta = check_polar(theta)?;
        let mut phi = wrap_angle(phi);
        if theta == 0.0 || theta == PI {
            phi = 0.0;
        }
        Ok(SpinPureState { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn amplitudes(&self) -> Vector2 {
        Vector2::new(
            Complex64::from_polar((self.theta / 2.0).cos(), -self.phi / 2.0),
            Complex64::from_polar((self.theta / 2.0).sin(), self.phi / 2.0),
        )
    }

    pub fn bloch_point(&self) -> BlochPoint {
        BlochPoint::new(1.0, self.theta, self.phi).expect("angles already canonical")
    }

    /// The state at the antipodal point of the sphere.
    pub fn antipode(&self) -> SpinPureState {
        SpinPureState::new(PI - self.theta, self.phi + PI).expect("antipode stays on the sphere")
    }
}

/// Unit direction of a spin measurement.
#[derive(Clone, Copy, Debug)]
pub struct MeasurementDirection {
    theta: f64,
    phi: f64,
}

impl MeasurementDirection {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        let s = SpinPureState::new(theta, phi)?;
        Ok(MeasurementDirection {
            theta: s.theta,
            phi: s.phi,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Unit Cartesian axis `u(1, theta, phi)`.
    pub fn axis(&self) -> [f64; 3] {
        [
            self.theta.sin() * self.phi.cos(),
            self.theta.sin() * self.phi.sin(),
            self.theta.cos(),
        ]
    }

    /// The ray state whose Bloch point is the axis.
    pub fn ray(&self) -> Vector2 {
        SpinPureState {
            theta: self.theta,
            phi: self.phi,
        }
        .amplitudes()
    }

    pub fn antipode(&self) -> MeasurementDirection {
        MeasurementDirection::new(PI - self.theta, self.phi + PI)
            .expect("antipode stays on the sphere")
    }

    /// Projector on the ray state along this direction.
    pub fn projector_matrix(&self) -> Matrix2 {
        projector(&self.ray()).expect("ray states are unit by construction")
    }
}

/// Density matrix of the ball point:
/// `(1/2) [[1 + r cos t, r sin t e^{-i p}], [r sin t e^{i p}, 1 - r cos t]]`.
pub fn density_from_bloch(p: &BlochPoint) -> Matrix2 {
    let [x, y, z] = p.cartesian();
    Matrix2::from_rows(
        [
            Complex64::new(0.5 * (1.0 + z), 0.0),
            Complex64::new(0.5 * x, -0.5 * y),
        ],
        [
            Complex64::new(0.5 * x, 0.5 * y),
            Complex64::new(0.5 * (1.0 - z), 0.0),
        ],
    )
}

/// Ball point of a density matrix; rejects non-density input.
pub fn bloch_from_density(d: &Matrix2) -> Result<BlochPoint> {
    if !d.is_finite() {
        return Err(Error::NonFinite("density matrix"));
    }
    let asym = d.hermiticity_defect();
    if asym > TOL_ALGEBRAIC {
        return Err(Error::NotHermitian(asym));
    }
    let trace_defect = (d.trace() - Complex64::ONE).norm();
    if trace_defect > TOL_ALGEBRAIC {
        return Err(Error::NotUnitTrace(trace_defect));
    }
    let a = d.0[0][0].re;
    let b = d.0[1][1].re;
    let off = 0.5 * (d.0[1][0] + d.0[0][1].conj());
    let delta = (0.25 * (a - b) * (a - b) + off.norm_sqr()).sqrt();
    let min_eigenvalue = 0.5 * (a + b) - delta;
    if min_eigenvalue < -TOL_ALGEBRAIC {
        return Err(Error::NotPositive(min_eigenvalue));
    }
    BlochPoint::from_cartesian(2.0 * off.re, 2.0 * off.im, a - b)
}

/// Non-selective measurement of a single spin:
/// `P D P + (1 - P) D (1 - P)` with `P` the projector along `dir`.
pub fn luder_single(d: &Matrix2, dir: &MeasurementDirection) -> Matrix2 {
    let p = dir.projector_matrix();
    let q = Matrix2::identity() - p;
    p * *d * p + q * *d * q
}

/// Geometric form of [`luder_single`]: orthogonal projection of the ball
/// point onto the measurement axis, `(u . a) a`.
pub fn geometric_projection(u: &BlochPoint, dir: &MeasurementDirection) -> BlochPoint {
    let p = u.cartesian();
    let a = dir.axis();
    let s = p[0] * a[0] + p[1] * a[1] + p[2] * a[2];
    BlochPoint::from_cartesian(s * a[0], s * a[1], s * a[2])
        .expect("projection of a ball point stays in the ball")
}

/// Sphere of all points reachable from `u` under measurements in arbitrary
/// directions: center `u/2`, radius `|u|/2`.
pub fn reachable_sphere(u: &BlochPoint) -> ([f64; 3], f64) {
    let p = u.cartesian();
    ([p[0] / 2.0, p[1] / 2.0, p[2] / 2.0], u.r() / 2.0)
}

/// Transition probability between two surface points,
/// `(1 + p . q) / 2 = |<psi_p, psi_q>|^2`.
pub fn overlap_from_points(p: &BlochPoint, q: &BlochPoint) -> Result<f64> {
    for point in [p, q] {
        if (point.r() - 1.0).abs() > TOL_ALGEBRAIC {
            return Err(Error::InteriorPoint(point.r()));
        }
    }
    Ok(0.5 * (1.0 + p.dot(q)))
}

/// Bloch angles of a ray state: `theta = 2 atan2(|v1|, |v0|)` and `phi` the
/// relative phase of the components, zero at the poles.
pub fn angles_of_ray(v: &Vector2) -> (f64, f64) {
    let theta = 2.0 * v.0[1].norm().atan2(v.0[0].norm());
    let rel = v.0[1] * v.0[0].conj();
    let phi = if rel.norm() == 0.0 {
        0.0
    } else {
        wrap_angle(rel.arg())
    };
    (theta, phi)
}
