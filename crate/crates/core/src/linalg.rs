//! Exact-size complex linear algebra for the two-spin model.
//!
//! Vectors and matrices of dimensions 2 and 4, tensor products, partial
//! traces, ray projectors, and a closed-form eigensolver for 2x2 Hermitian
//! matrices. Inner products follow the physics convention: `inner(a, b)`
//! is conjugate-linear in `a` and linear in `b`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::TOL_ALGEBRAIC;

/// Eigenvalue gap below which a Hermitian 2x2 matrix is treated as degenerate
/// and the computational basis is returned.
const DEGENERATE_GAP: f64 = 1e-14;

/// Complex column vector of dimension 2.
#[derive(Clone, Copy, Debug)]
pub struct Vector2(pub [Complex64; 2]);

/// Complex column vector of dimension 4.
#[derive(Clone, Copy, Debug)]
pub struct Vector4(pub [Complex64; 4]);

/// Complex 2x2 matrix, row major.
#[derive(Clone, Copy, Debug)]
pub struct Matrix2(pub [[Complex64; 2]; 2]);

/// Complex 4x4 matrix, row major.
#[derive(Clone, Copy, Debug)]
pub struct Matrix4(pub [[Complex64; 4]; 4]);

/// Which tensor factor of the pair an operation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

impl Subsystem {
    pub fn other(self) -> Subsystem {
        match self {
            Subsystem::First => Subsystem::Second,
            Subsystem::Second => Subsystem::First,
        }
    }
}

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Vector2 {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        Vector2([a, b])
    }

    pub fn zero() -> Self {
        Vector2([Complex64::ZERO; 2])
    }

    /// Computational basis vector `|i>`.
    pub fn basis(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i] = Complex64::ONE;
        v
    }

    /// Physics inner product `<self, other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Vector2) -> Complex64 {
        self.0[0].conj() * other.0[0] + self.0[1].conj() * other.0[1]
    }

    pub fn norm2(&self) -> f64 {
        self.0[0].norm_sqr() + self.0[1].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn conj(&self) -> Vector2 {
        Vector2([self.0[0].conj(), self.0[1].conj()])
    }

    /// The unit vector orthogonal to `self`: `(a, b) -> (-conj(b), conj(a))`.
    pub fn orthogonal(&self) -> Vector2 {
        Vector2([-self.0[1].conj(), self.0[0].conj()])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn normalized(&self) -> Result<Vector2> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(*self * (1.0 / n))
    }

    /// Multiplies by a global phase so that the component of largest modulus
    /// becomes real and non-negative (the first one on a tie).
    pub fn phase_normalized(&self) -> Vector2 {
        let idx = if self.0[0].norm_sqr() >= self.0[1].norm_sqr() {
            0
        } else {
            1
        };
        let m = self.0[idx].norm();
        if m == 0.0 {
            return *self;
        }
        *self * (self.0[idx] / m).conj()
    }

    pub fn max_abs_diff(&self, other: &Vector2) -> f64 {
        (0..2)
            .map(|i| (self.0[i] - other.0[i]).norm())
            .fold(0.0, f64::max)
    }
}

impl Vector4 {
    pub fn new(components: [Complex64; 4]) -> Self {
        Vector4(components)
    }

    pub fn zero() -> Self {
        Vector4([Complex64::ZERO; 4])
    }

    pub fn inner(&self, other: &Vector4) -> Complex64 {
        (0..4).map(|i| self.0[i].conj() * other.0[i]).sum()
    }

    pub fn norm2(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn normalized(&self) -> Result<Vector4> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(*self * (1.0 / n))
    }

    pub fn max_abs_diff(&self, other: &Vector4) -> f64 {
        (0..4)
            .map(|i| (self.0[i] - other.0[i]).norm())
            .fold(0.0, f64::max)
    }
}

impl Matrix2 {
    pub fn zero() -> Self {
        Matrix2([[Complex64::ZERO; 2]; 2])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        m.0[0][0] = Complex64::ONE;
        m.0[1][1] = Complex64::ONE;
        m
    }

    pub fn from_rows(r0: [Complex64; 2], r1: [Complex64; 2]) -> Self {
        Matrix2([r0, r1])
    }

    pub fn diag(a: Complex64, b: Complex64) -> Self {
        Matrix2([[a, Complex64::ZERO], [Complex64::ZERO, b]])
    }

    /// Outer product `|x><y|`.
    pub fn outer(x: &Vector2, y: &Vector2) -> Self {
        let mut m = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = x.0[i] * y.0[j].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn adjoint(&self) -> Matrix2 {
        let mut m = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn conj(&self) -> Matrix2 {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for z in row.iter_mut() {
                *z = z.conj();
            }
        }
        m
    }

    /// Largest entry modulus of `self - self^dagger`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn max_abs_diff(&self, other: &Matrix2) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Matrix4 {
    pub fn zero() -> Self {
        Matrix4([[Complex64::ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = Complex64::ONE;
        }
        m
    }

    /// Outer product `|x><y|`.
    pub fn outer(x: &Vector4, y: &Vector4) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = x.0[i] * y.0[j].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn adjoint(&self) -> Matrix4 {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn max_abs_diff(&self, other: &Matrix4) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

macro_rules! vector_ops {
    ($ty:ident, $n:expr) => {
        impl Add for $ty {
            type Output = $ty;
            fn add(self, rhs: $ty) -> $ty {
                let mut out = self;
                for i in 0..$n {
                    out.0[i] += rhs.0[i];
                }
                out
            }
        }
        impl Sub for $ty {
            type Output = $ty;
            fn sub(self, rhs: $ty) -> $ty {
                let mut out = self;
                for i in 0..$n {
                    out.0[i] -= rhs.0[i];
                }
                out
            }
        }
        impl Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                let mut out = self;
                for i in 0..$n {
                    out.0[i] = -out.0[i];
                }
                out
            }
        }
        impl Mul<Complex64> for $ty {
            type Output = $ty;
            fn mul(self, rhs: Complex64) -> $ty {
                let mut out = self;
                for i in 0..$n {
                    out.0[i] *= rhs;
                }
                out
            }
        }
        impl Mul<f64> for $ty {
            type Output = $ty;
            fn mul(self, rhs: f64) -> $ty {
                self * Complex64::new(rhs, 0.0)
            }
        }
    };
}

vector_ops!(Vector2, 2);
vector_ops!(Vector4, 4);

macro_rules! matrix_ops {
    ($ty:ident, $vec:ident, $n:expr) => {
        impl Add for $ty {
            type Output = $ty;
            fn add(self, rhs: $ty) -> $ty {
                let mut out = self;
                for i in 0..$n {
                    for j in 0..$n {
                        out.0[i][j] += rhs.0[i][j];
                    }
                }
                out
            }
        }
        impl Sub for $ty {
            type Output = $ty;
            fn sub(self, rhs: $ty) -> $ty {
                let mut out = self;
                for i in 0..$n {
                    for j in 0..$n {
                        out.0[i][j] -= rhs.0[i][j];
                    }
                }
                out
            }
        }
        impl Mul for $ty {
            type Output = $ty;
            fn mul(self, rhs: $ty) -> $ty {
                let mut out = $ty::zero();
                for i in 0..$n {
                    for j in 0..$n {
                        let mut sum = Complex64::ZERO;
                        for k in 0..$n {
                            sum += self.0[i][k] * rhs.0[k][j];
                        }
                        out.0[i][j] = sum;
                    }
                }
                out
            }
        }
        impl Mul<$vec> for $ty {
            type Output = $vec;
            fn mul(self, rhs: $vec) -> $vec {
                let mut out = $vec::zero();
                for i in 0..$n {
                    let mut sum = Complex64::ZERO;
                    for k in 0..$n {
                        sum += self.0[i][k] * rhs.0[k];
                    }
                    out.0[i] = sum;
                }
                out
            }
        }
        impl Mul<Complex64> for $ty {
            type Output = $ty;
            fn mul(self, rhs: Complex64) -> $ty {
                let mut out = self;
                for i in 0..$n {
                    for j in 0..$n {
                        out.0[i][j] *= rhs;
                    }
                }
                out
            }
        }
        impl Mul<f64> for $ty {
            type Output = $ty;
            fn mul(self, rhs: f64) -> $ty {
                self * Complex64::new(rhs, 0.0)
            }
        }
    };
}

matrix_ops!(Matrix2, Vector2, 2);
matrix_ops!(Matrix4, Vector4, 4);

/// Tensor product of two single-spin vectors; component `2i + j` is `a_i b_j`.
pub fn tensor_vector(a: &Vector2, b: &Vector2) -> Vector4 {
    let mut out = Vector4::zero();
    for i in 0..2 {
        for j in 0..2 {
            out.0[2 * i + j] = a.0[i] * b.0[j];
        }
    }
    out
}

/// Tensor product of two single-spin operators.
pub fn tensor_operator(a: &Matrix2, b: &Matrix2) -> Matrix4 {
    let mut out = Matrix4::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.0[2 * i + j][2 * k + l] = a.0[i][k] * b.0[j][l];
                }
            }
        }
    }
    out
}

/// Reduced density matrix of one subsystem of a two-spin density matrix.
///
/// Rejects input whose trace deviates from 1 by more than the algebraic
/// tolerance; a non-unit trace here always signals a caller bug.
pub fn partial_trace(d: &Matrix4, keep: Subsystem) -> Result<Matrix2> {
    if !d.is_finite() {
        return Err(Error::NonFinite("partial trace input"));
    }
    let defect = (d.trace() - Complex64::ONE).norm();
    if defect > TOL_ALGEBRAIC {
        return Err(Error::NotUnitTrace(defect));
    }
    let mut out = Matrix2::zero();
    match keep {
        Subsystem::First => {
            for i in 0..2 {
                for k in 0..2 {
                    out.0[i][k] = (0..2).map(|j| d.0[2 * i + j][2 * k + j]).sum();
                }
            }
        }
        Subsystem::Second => {
            for j in 0..2 {
                for l in 0..2 {
                    out.0[j][l] = (0..2).map(|i| d.0[2 * i + j][2 * i + l]).sum();
                }
            }
        }
    }
    Ok(out)
}

/// Projector `|x><x|` on a unit ray.
pub fn projector(x: &Vector2) -> Result<Matrix2> {
    if !x.is_finite() {
        return Err(Error::NonFinite("projector input"));
    }
    let defect = (x.norm2() - 1.0).abs();
    if defect > TOL_ALGEBRAIC {
        return Err(Error::NotUnitNorm(defect));
    }
    Ok(Matrix2::outer(x, x))
}

/// Spectral decomposition of a 2x2 Hermitian matrix.
#[derive(Clone, Copy, Debug)]
pub struct Eigen2 {
    /// Eigenvalues in descending order.
    pub values: [f64; 2],
    /// Orthonormal eigenvectors matching `values`, each phase-normalized so
    /// that its component of largest modulus is real and non-negative.
    pub vectors: [Vector2; 2],
}

/// Closed-form eigendecomposition of a Hermitian 2x2 matrix.
///
/// Eigenvalues come from the trace and the discriminant of the characteristic
/// polynomial; the top eigenvector is read off the cancellation-free row of
/// `H - lambda I` and the second is its exact orthogonal complement. Within
/// `DEGENERATE_GAP` of a double eigenvalue the computational basis is
/// returned, which makes the degenerate case deterministic.
pub fn hermitian_eigen2(h: &Matrix2) -> Result<Eigen2> {
    if !h.is_finite() {
        return Err(Error::NonFinite("eigensolver input"));
    }
    let defect = h.hermiticity_defect();
    if defect > TOL_ALGEBRAIC {
        return Err(Error::NotHermitian(defect));
    }
    let a = h.0[0][0].re;
    let d = h.0[1][1].re;
    let b = (h.0[0][1] + h.0[1][0].conj()) * 0.5;
    let mean = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d);
    let delta = (half_gap * half_gap + b.norm_sqr()).sqrt();
    let values = [mean + delta, mean - delta];

    let scale = a.abs().max(d.abs()).max(1.0);
    if delta <= DEGENERATE_GAP * scale {
        return Ok(Eigen2 {
            values,
            vectors: [Vector2::basis(0), Vector2::basis(1)],
        });
    }

    // Pick the component of H - lambda_1 I that cannot cancel.
    let top = if half_gap >= 0.0 {
        Vector2::new(c(half_gap + delta, 0.0), b.conj())
    } else {
        Vector2::new(b, c(delta - half_gap, 0.0))
    };
    let top = top
        .normalized()
        .expect("gap above threshold implies a nonzero eigenvector")
        .phase_normalized();
    let bottom = top.orthogonal().phase_normalized();
    Ok(Eigen2 {
        values,
        vectors: [top, bottom],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, SQRT_2};

    const TOL: f64 = 1e-12;

    fn re(x: f64) -> Complex64 {
        c(x, 0.0)
    }

    fn singlet_vector() -> Vector4 {
        Vector4::new([
            Complex64::ZERO,
            re(1.0 / SQRT_2),
            re(-1.0 / SQRT_2),
            Complex64::ZERO,
        ])
    }

    #[test]
    fn tensor_vector_basis_cases() {
        let e0 = Vector2::basis(0);
        let e1 = Vector2::basis(1);
        let t = tensor_vector(&e0, &e0);
        assert_eq!(t.0[0], Complex64::ONE);
        assert!(t.0[1..].iter().all(|z| z.norm() == 0.0));
        let t = tensor_vector(&e0, &e1);
        assert_eq!(t.0[1], Complex64::ONE);
        assert_eq!(t.0[0].norm() + t.0[2].norm() + t.0[3].norm(), 0.0);
    }

    #[test]
    fn tensor_vector_hand_multiplied() {
        // (0.6, 0.8) tensor (i, 0) = (0.6i, 0, 0.8i, 0)
        let a = Vector2::new(re(0.6), re(0.8));
        let b = Vector2::new(c(0.0, 1.0), Complex64::ZERO);
        let t = tensor_vector(&a, &b);
        assert!((t.0[0] - c(0.0, 0.6)).norm() <= TOL);
        assert!(t.0[1].norm() <= TOL);
        assert!((t.0[2] - c(0.0, 0.8)).norm() <= TOL);
        assert!(t.0[3].norm() <= TOL);
    }

    #[test]
    fn tensor_vector_norm_multiplies() {
        let a = Vector2::new(c(0.3, -0.1), c(0.2, 0.7));
        let b = Vector2::new(c(-1.1, 0.4), c(0.0, 2.0));
        let t = tensor_vector(&a, &b);
        assert!((t.norm() - a.norm() * b.norm()).abs() <= TOL);
    }

    #[test]
    fn tensor_operator_identity_and_blocks() {
        let id4 = tensor_operator(&Matrix2::identity(), &Matrix2::identity());
        assert!(id4.max_abs_diff(&Matrix4::identity()) <= TOL);

        let p0 = Matrix2::diag(Complex64::ONE, Complex64::ZERO);
        let block = tensor_operator(&p0, &Matrix2::identity());
        let mut expected = Matrix4::zero();
        expected.0[0][0] = Complex64::ONE;
        expected.0[1][1] = Complex64::ONE;
        assert!(block.max_abs_diff(&expected) <= TOL);
    }

    #[test]
    fn tensor_operator_on_singlet_halves_norm() {
        // Projector along theta = pi/2, phi = 0 has all entries 1/2.
        let p = Matrix2::from_rows([re(0.5), re(0.5)], [re(0.5), re(0.5)]);
        let applied = tensor_operator(&p, &Matrix2::identity()) * singlet_vector();
        assert!((applied.norm2() - 0.5).abs() <= TOL);
    }

    #[test]
    fn partial_trace_product_state() {
        let psi = tensor_vector(&Vector2::basis(0), &Vector2::basis(0));
        let rho = Matrix4::outer(&psi, &psi);
        let d1 = partial_trace(&rho, Subsystem::First).unwrap();
        assert!(d1.max_abs_diff(&Matrix2::diag(Complex64::ONE, Complex64::ZERO)) <= TOL);
    }

    #[test]
    fn partial_trace_singlet_is_center() {
        let rho = Matrix4::outer(&singlet_vector(), &singlet_vector());
        let d1 = partial_trace(&rho, Subsystem::First).unwrap();
        assert!(d1.max_abs_diff(&(Matrix2::identity() * 0.5)) <= TOL);
        let d2 = partial_trace(&rho, Subsystem::Second).unwrap();
        assert!(d2.max_abs_diff(&(Matrix2::identity() * 0.5)) <= TOL);
    }

    #[test]
    fn partial_trace_weighted_superposition() {
        let psi = Vector4::new([re(0.6), Complex64::ZERO, Complex64::ZERO, re(0.8)]);
        let rho = Matrix4::outer(&psi, &psi);
        let d1 = partial_trace(&rho, Subsystem::First).unwrap();
        assert!(d1.max_abs_diff(&Matrix2::diag(re(0.36), re(0.64))) <= TOL);
    }

    #[test]
    fn partial_trace_rejects_non_unit_trace() {
        let mut rho = Matrix4::identity();
        rho.0[0][0] = re(2.0);
        assert!(matches!(
            partial_trace(&rho, Subsystem::First),
            Err(Error::NotUnitTrace(_))
        ));
    }

    #[test]
    fn eigen_diagonal() {
        let eig = hermitian_eigen2(&Matrix2::diag(re(0.8), re(0.2))).unwrap();
        assert!((eig.values[0] - 0.8).abs() <= TOL);
        assert!((eig.values[1] - 0.2).abs() <= TOL);
        assert!(eig.vectors[0].max_abs_diff(&Vector2::basis(0)) <= TOL);
        assert!(eig.vectors[1].max_abs_diff(&Vector2::basis(1)) <= TOL);
    }

    #[test]
    fn eigen_degenerate_tie_breaks_to_computational_basis() {
        let eig = hermitian_eigen2(&(Matrix2::identity() * 0.5)).unwrap();
        assert!((eig.values[0] - 0.5).abs() <= TOL);
        assert!((eig.values[1] - 0.5).abs() <= TOL);
        assert!(eig.vectors[0].max_abs_diff(&Vector2::basis(0)) <= TOL);
        assert!(eig.vectors[1].max_abs_diff(&Vector2::basis(1)) <= TOL);
    }

    #[test]
    fn eigen_of_bloch_density() {
        // Density at (r, theta, phi) = (0.5, pi/3, pi/4): eigenvalues (1 +- r)/2,
        // top eigenvector the ray at (theta, phi).
        let (r, theta, phi) = (0.5, FRAC_PI_3, FRAC_PI_4);
        let h = Matrix2::from_rows(
            [
                re(0.5 * (1.0 + r * theta.cos())),
                Complex64::from_polar(0.5 * r * theta.sin(), -phi),
            ],
            [
                Complex64::from_polar(0.5 * r * theta.sin(), phi),
                re(0.5 * (1.0 - r * theta.cos())),
            ],
        );
        let eig = hermitian_eigen2(&h).unwrap();
        assert!((eig.values[0] - 0.75).abs() <= TOL);
        assert!((eig.values[1] - 0.25).abs() <= TOL);
        let ray = Vector2::new(
            Complex64::from_polar((theta / 2.0).cos(), -phi / 2.0),
            Complex64::from_polar((theta / 2.0).sin(), phi / 2.0),
        );
        assert!((eig.vectors[0].inner(&ray).norm() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = Matrix2::from_rows([re(1.0), re(0.5)], [re(0.1), re(0.0)]);
        assert!(matches!(
            hermitian_eigen2(&m),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn eigen_reconstructs_random_hermitians() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a: f64 = rng.random_range(-2.0..2.0);
            let d: f64 = rng.random_range(-2.0..2.0);
            let b = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let h = Matrix2::from_rows([re(a), b], [b.conj(), re(d)]);
            let eig = hermitian_eigen2(&h).unwrap();
            let rebuilt = Matrix2::outer(&eig.vectors[0], &eig.vectors[0]) * eig.values[0]
                + Matrix2::outer(&eig.vectors[1], &eig.vectors[1]) * eig.values[1];
            assert!(rebuilt.max_abs_diff(&h) <= 1e-9);
            assert!(eig.vectors[0].inner(&eig.vectors[1]).norm() <= 1e-9);
            assert!((eig.vectors[0].norm2() - 1.0).abs() <= 1e-9);
            assert!((eig.vectors[1].norm2() - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn projector_cases() {
        let p = projector(&Vector2::basis(0)).unwrap();
        assert!(p.max_abs_diff(&Matrix2::diag(Complex64::ONE, Complex64::ZERO)) <= TOL);

        let x = Vector2::new(re(1.0 / SQRT_2), re(1.0 / SQRT_2));
        let p = projector(&x).unwrap();
        assert!(p.max_abs_diff(&Matrix2::from_rows([re(0.5), re(0.5)], [re(0.5), re(0.5)])) <= TOL);

        // idempotent, Hermitian, trace 1
        assert!((p * p).max_abs_diff(&p) <= TOL);
        assert!(p.hermiticity_defect() <= TOL);
        assert!((p.trace() - Complex64::ONE).norm() <= TOL);

        assert!(matches!(
            projector(&Vector2::new(re(1.0), re(1.0))),
            Err(Error::NotUnitNorm(_))
        ));
    }

    #[test]
    fn tensor_mixed_product_identity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let rand_c = |rng: &mut rand_chacha::ChaCha8Rng| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        };
        for _ in 0..200 {
            let a = Matrix2::from_rows(
                [rand_c(&mut rng), rand_c(&mut rng)],
                [rand_c(&mut rng), rand_c(&mut rng)],
            );
            let b = Matrix2::from_rows(
                [rand_c(&mut rng), rand_c(&mut rng)],
                [rand_c(&mut rng), rand_c(&mut rng)],
            );
            let x = Vector2::new(rand_c(&mut rng), rand_c(&mut rng));
            let y = Vector2::new(rand_c(&mut rng), rand_c(&mut rng));
            let lhs = tensor_operator(&a, &b) * tensor_vector(&x, &y);
            let rhs = tensor_vector(&(a * x), &(b * y));
            assert!(lhs.max_abs_diff(&rhs) <= TOL);
        }
    }

    #[test]
    fn partial_trace_of_product_density_returns_factors() {
        let x = Vector2::new(
            Complex64::from_polar((0.7f64 / 2.0).cos(), -0.3),
            Complex64::from_polar((0.7f64 / 2.0).sin(), 0.3),
        );
        let y = Vector2::new(re(0.6), c(0.0, 0.8));
        let dx = Matrix2::outer(&x, &x);
        let dy = Matrix2::outer(&y, &y);
        let joint = tensor_operator(&dx, &dy);
        assert!(partial_trace(&joint, Subsystem::First)
            .unwrap()
            .max_abs_diff(&dx)
            <= TOL);
        assert!(partial_trace(&joint, Subsystem::Second)
            .unwrap()
            .max_abs_diff(&dy)
            <= TOL);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let psi = Vector4::new([c(0.1, 0.2), c(-0.3, 0.4), c(0.5, -0.6), c(0.2, 0.1)])
            .normalized()
            .unwrap();
        let rho = Matrix4::outer(&psi, &psi);
        for keep in [Subsystem::First, Subsystem::Second] {
            let reduced = partial_trace(&rho, keep).unwrap();
            assert!((reduced.trace() - rho.trace()).norm() <= TOL);
        }
    }

    #[test]
    fn half_overlap_projector_on_equator() {
        // sanity for the pi/2 projector used above
        let theta: f64 = FRAC_PI_2;
        let ray = Vector2::new(re((theta / 2.0).cos()), re((theta / 2.0).sin()));
        let p = projector(&ray).unwrap();
        assert!(p.max_abs_diff(&Matrix2::from_rows([re(0.5), re(0.5)], [re(0.5), re(0.5)])) <= TOL);
    }
}
