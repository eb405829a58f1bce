//! Constraint functions and the Schmidt diagonal form of a two-spin state.
//!
//! A pure state `psi = sum_{ij} lambda_ij |e1_i> (x) |e2_j>` induces two
//! conjugate-linear maps between the single-spin spaces: `F12(psi)` sends the
//! state one spin collapses to under a measurement to the state the other
//! spin is forced into by the entanglement correlation, and `F21(psi)` is its
//! mirror. Composing the two in either order reproduces the reduced density
//! matrices, and diagonalizing those yields the Schmidt form
//! `psi = sqrt((1+r)/2) x1_1 (x) x2_1 + sqrt((1-r)/2) x1_2 (x) x2_2`
//! with the entanglement parameter `r` in `[0, 1]`.

use num_complex::Complex64;

use crate::bloch::angles_of_ray;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen2, tensor_vector, Matrix2, Vector2, Vector4};
use crate::{TOL_ALGEBRAIC, TOL_EIGEN};

/// Above `r = 1 - DEGENERATE_R` the second Schmidt coefficient is treated as
/// zero: the second basis vector of sphere 2 is then completed orthogonally
/// instead of dividing by `sqrt(1 - r)`.
pub const DEGENERATE_R: f64 = 1e-10;

fn orthonormality_defect(basis: &[Vector2; 2]) -> f64 {
    let mut worst = (basis[0].norm2() - 1.0).abs();
    worst = worst.max((basis[1].norm2() - 1.0).abs());
    worst.max(basis[0].inner(&basis[1]).norm())
}

/// Pure state of the pair, stored as the coefficient grid of an expansion
/// over a pair of orthonormal single-spin bases (computational by default).
#[derive(Clone, Copy, Debug)]
pub struct TwoQubitState {
    lambdas: [[Complex64; 2]; 2],
    basis1: [Vector2; 2],
    basis2: [Vector2; 2],
}

impl TwoQubitState {
    fn computational_bases() -> [Vector2; 2] {
        [Vector2::basis(0), Vector2::basis(1)]
    }

    /// State from amplitudes in the computational product basis,
    /// ordered `|00>, |01>, |10>, |11>`.
    pub fn from_amplitudes(amplitudes: Vector4) -> Result<Self> {
        if !amplitudes.is_finite() {
            return Err(Error::NonFinite("state amplitudes"));
        }
        let defect = (amplitudes.norm2() - 1.0).abs();
        if defect > TOL_ALGEBRAIC {
            return Err(Error::NotUnitNorm(defect));
        }
        let a = amplitudes.0;
        Ok(TwoQubitState {
            lambdas: [[a[0], a[1]], [a[2], a[3]]],
            basis1: Self::computational_bases(),
            basis2: Self::computational_bases(),
        })
    }

    /// As [`from_amplitudes`](Self::from_amplitudes) but rescales the input
    /// to unit norm first.
    pub fn from_amplitudes_normalized(amplitudes: Vector4) -> Result<Self> {
        if !amplitudes.is_finite() {
            return Err(Error::NonFinite("state amplitudes"));
        }
        Self::from_amplitudes(amplitudes.normalized()?)
    }

    /// State from a coefficient grid over an explicit orthonormal base pair.
    pub fn from_expansion(
        lambdas: [[Complex64; 2]; 2],
        basis1: [Vector2; 2],
        basis2: [Vector2; 2],
    ) -> Result<Self> {
        for basis in [&basis1, &basis2] {
            if !basis[0].is_finite() || !basis[1].is_finite() {
                return Err(Error::NonFinite("basis vector"));
            }
            let defect = orthonormality_defect(basis);
            if defect > TOL_ALGEBRAIC {
                return Err(Error::NotOrthonormal(defect));
            }
        }
        let norm2: f64 = lambdas.iter().flatten().map(|z| z.norm_sqr()).sum();
        if !norm2.is_finite() {
            return Err(Error::NonFinite("coefficient grid"));
        }
        let defect = (norm2 - 1.0).abs();
        if defect > TOL_ALGEBRAIC {
            return Err(Error::NotUnitNorm(defect));
        }
        Ok(TwoQubitState {
            lambdas,
            basis1,
            basis2,
        })
    }

    /// The singlet state `(|01> - |10>) / sqrt(2)`.
    pub fn singlet() -> Self {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        TwoQubitState {
            lambdas: [[Complex64::ZERO, s], [-s, Complex64::ZERO]],
            basis1: Self::computational_bases(),
            basis2: Self::computational_bases(),
        }
    }

    /// Product state `a (x) b` of two unit spin states.
    pub fn product(a: &Vector2, b: &Vector2) -> Result<Self> {
        Self::from_amplitudes(tensor_vector(a, b))
    }

    /// Schmidt-diagonal state `sqrt((1+r)/2) |00> + sqrt((1-r)/2) |11>`;
    /// its Schmidt bases coincide with the computational ones.
    pub fn schmidt_diagonal(r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::RadiusOutOfRange(r));
        }
        let c1 = (0.5 * (1.0 + r)).sqrt();
        let c2 = (0.5 * (1.0 - r)).sqrt();
        Self::from_amplitudes_normalized(Vector4::new([
            Complex64::new(c1, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(c2, 0.0),
        ]))
    }

    pub fn lambdas(&self) -> [[Complex64; 2]; 2] {
        self.lambdas
    }

    pub fn basis1(&self) -> [Vector2; 2] {
        self.basis1
    }

    pub fn basis2(&self) -> [Vector2; 2] {
        self.basis2
    }

    /// Amplitudes in the computational product basis.
    pub fn amplitudes(&self) -> Vector4 {
        let mut out = Vector4::zero();
        for i in 0..2 {
            for j in 0..2 {
                out = out + tensor_vector(&self.basis1[i], &self.basis2[j]) * self.lambdas[i][j];
            }
        }
        out
    }

    /// Coefficient grid relative to the computational bases.
    pub fn computational_lambdas(&self) -> [[Complex64; 2]; 2] {
        let a = self.amplitudes().0;
        [[a[0], a[1]], [a[2], a[3]]]
    }

    /// Physics inner product of the amplitude vectors.
    pub fn inner(&self, other: &TwoQubitState) -> Complex64 {
        self.amplitudes().inner(&other.amplitudes())
    }

    /// Reduced density matrix of the first spin, `D1 = lambda lambda^dagger`
    /// in the computational frame; exactly Hermitian by construction.
    pub(crate) fn reduced_density_first(&self) -> Matrix2 {
        let l = self.computational_lambdas();
        let off = l[0][0] * l[1][0].conj() + l[0][1] * l[1][1].conj();
        Matrix2::from_rows(
            [
                Complex64::new(l[0][0].norm_sqr() + l[0][1].norm_sqr(), 0.0),
                off,
            ],
            [
                off.conj(),
                Complex64::new(l[1][0].norm_sqr() + l[1][1].norm_sqr(), 0.0),
            ],
        )
    }
}

/// Which single-spin space a constraint map goes from and to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapDirection {
    FirstToSecond,
    SecondToFirst,
}

impl MapDirection {
    pub fn reversed(self) -> MapDirection {
        match self {
            MapDirection::FirstToSecond => MapDirection::SecondToFirst,
            MapDirection::SecondToFirst => MapDirection::FirstToSecond,
        }
    }
}

/// Conjugate-linear map between the two single-spin spaces, represented as a
/// matrix acting on the conjugated input in the computational frame:
/// `x -> M conj(x)`.
#[derive(Clone, Copy, Debug)]
pub struct ConstraintMap {
    matrix: Matrix2,
    direction: MapDirection,
}

impl ConstraintMap {
    pub fn matrix(&self) -> Matrix2 {
        self.matrix
    }

    pub fn direction(&self) -> MapDirection {
        self.direction
    }

    /// Applies the map: `M conj(x)`. The input need not be unit.
    pub fn apply(&self, x: &Vector2) -> Vector2 {
        self.matrix * x.conj()
    }
}

/// Constraint function `F12(psi)`: sends the collapsed state `x1` of the
/// first spin to `sum_{ij} lambda_ij <x1, e1_i> |e2_j>`, the state forced on
/// the second spin. Built from the state's own expansion; the result does not
/// depend on the chosen bases.
pub fn constraint_f12(psi: &TwoQubitState) -> ConstraintMap {
    let mut m = Matrix2::zero();
    for i in 0..2 {
        for j in 0..2 {
            // lambda_ij |e2_j><conj(e1_i)| so that M conj(x) = sum lambda_ij <x, e1_i> e2_j
            m = m + Matrix2::outer(&psi.basis2[j], &psi.basis1[i].conj()) * psi.lambdas[i][j];
        }
    }
    ConstraintMap {
        matrix: m,
        direction: MapDirection::FirstToSecond,
    }
}

/// Mirror of [`constraint_f12`] with the roles of the spins exchanged.
pub fn constraint_f21(psi: &TwoQubitState) -> ConstraintMap {
    let mut m = Matrix2::zero();
    for i in 0..2 {
        for j in 0..2 {
            m = m + Matrix2::outer(&psi.basis1[i], &psi.basis2[j].conj()) * psi.lambdas[i][j];
        }
    }
    ConstraintMap {
        matrix: m,
        direction: MapDirection::SecondToFirst,
    }
}

/// Composition `F o G` of two constraint maps with compatible directions.
///
/// Two conjugate-linear maps compose to a linear one, here the matrix
/// `M_F conj(M_G)`; for `F = F21(psi)`, `G = F12(psi)` this is the reduced
/// density matrix of the first spin, and symmetrically for the other order.
pub fn compose_constraints(f: &ConstraintMap, g: &ConstraintMap) -> Result<Matrix2> {
    if f.direction != g.direction.reversed() {
        return Err(Error::IncompatibleDirections);
    }
    Ok(f.matrix * g.matrix.conj())
}

/// Both sides of the adjoint relation
/// `<F12(psi)(x1), x2> = <x1, F21(psi)(x2)>*`.
pub fn adjoint_relation_check(
    psi: &TwoQubitState,
    x1: &Vector2,
    x2: &Vector2,
) -> (Complex64, Complex64) {
    let lhs = constraint_f12(psi).apply(x1).inner(x2);
    let rhs = x1.inner(&constraint_f21(psi).apply(x2)).conj();
    (lhs, rhs)
}

/// Schmidt diagonal form: parameter `r`, paired orthonormal bases, and the
/// coefficients `sqrt((1 +- r)/2)`.
#[derive(Clone, Copy, Debug)]
pub struct SchmidtForm {
    r: f64,
    basis1: [Vector2; 2],
    basis2: [Vector2; 2],
}

impl SchmidtForm {
    pub fn new(r: f64, basis1: [Vector2; 2], basis2: [Vector2; 2]) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::RadiusOutOfRange(r));
        }
        for basis in [&basis1, &basis2] {
            let defect = orthonormality_defect(basis);
            if defect > TOL_EIGEN {
                return Err(Error::NotOrthonormal(defect));
            }
        }
        Ok(SchmidtForm { r, basis1, basis2 })
    }

    /// Entanglement parameter: 0 for the singlet, 1 for a product state.
    pub fn r(&self) -> f64 {
        self.r
    }

    /// Schmidt basis of the first spin; the first vector carries the larger
    /// coefficient.
    pub fn basis1(&self) -> [Vector2; 2] {
        self.basis1
    }

    /// Schmidt basis of the second spin, paired with `basis1`.
    pub fn basis2(&self) -> [Vector2; 2] {
        self.basis2
    }

    /// Schmidt coefficients `(sqrt((1+r)/2), sqrt((1-r)/2))`.
    pub fn coefficients(&self) -> (f64, f64) {
        (
            (0.5 * (1.0 + self.r)).sqrt(),
            (0.5 * (1.0 - self.r)).sqrt(),
        )
    }

    /// Ray of the first spin with angles measured from the Schmidt basis:
    /// `cos(t/2) e^{-ip/2} x1_1 + sin(t/2) e^{ip/2} x1_2`.
    pub fn first_ray_from_angles(&self, theta: f64, phi: f64) -> Vector2 {
        let a = Complex64::from_polar((theta / 2.0).cos(), -phi / 2.0);
        let b = Complex64::from_polar((theta / 2.0).sin(), phi / 2.0);
        self.basis1[0] * a + self.basis1[1] * b
    }

    /// Coordinates of a vector of the second space in the Schmidt basis.
    pub fn second_coords(&self, y: &Vector2) -> Vector2 {
        Vector2::new(self.basis2[0].inner(y), self.basis2[1].inner(y))
    }

    /// Coordinates of a vector of the first space in the Schmidt basis.
    pub fn first_coords(&self, x: &Vector2) -> Vector2 {
        Vector2::new(self.basis1[0].inner(x), self.basis1[1].inner(x))
    }

    /// Bloch angles of a unit vector of the second space, relative to the
    /// Schmidt frame of sphere 2.
    pub fn second_angles(&self, y: &Vector2) -> (f64, f64) {
        angles_of_ray(&self.second_coords(y))
    }

    /// Bloch angles of a unit vector of the first space, relative to the
    /// Schmidt frame of sphere 1.
    pub fn first_angles(&self, x: &Vector2) -> (f64, f64) {
        angles_of_ray(&self.first_coords(x))
    }

    /// Projection of a unit vector's Bloch point onto the north-south axis of
    /// the Schmidt frame of sphere 2.
    pub fn second_axis_projection(&self, y: &Vector2) -> f64 {
        let coords = self.second_coords(y);
        coords.0[0].norm_sqr() - coords.0[1].norm_sqr()
    }

    /// Cartesian Bloch vector of a unit vector of the second space in the
    /// Schmidt frame of sphere 2.
    pub fn second_cartesian(&self, y: &Vector2) -> [f64; 3] {
        let coords = self.second_coords(y);
        let cross = coords.0[0].conj() * coords.0[1];
        [
            2.0 * cross.re,
            2.0 * cross.im,
            coords.0[0].norm_sqr() - coords.0[1].norm_sqr(),
        ]
    }
}

/// Schmidt decomposition of a pure state of the pair.
///
/// The first basis diagonalizes the reduced density matrix of spin 1 with
/// eigenvalues `(1 +- r)/2`; the second basis is obtained by pushing the
/// first through the constraint function,
/// `x2_k = sqrt(2/(1 +- r)) F12(psi)(x1_k)`. With that normalization the
/// coefficients come out real and non-negative, so the reconstruction
/// reproduces `psi` exactly rather than merely up to a phase. For
/// `r > 1 - DEGENERATE_R` the second image vanishes and the basis is
/// completed orthogonally instead.
pub fn schmidt_decompose(psi: &TwoQubitState) -> SchmidtForm {
    let d1 = psi.reduced_density_first();
    let eig = hermitian_eigen2(&d1).expect("reduced density matrix is Hermitian by construction");
    let r = (2.0 * eig.values[0] - 1.0).clamp(0.0, 1.0);
    let basis1 = eig.vectors;

    let f12 = constraint_f12(psi);
    let (c1, c2) = (
        (0.5 * (1.0 + r)).sqrt(),
        (0.5 * (1.0 - r)).sqrt(),
    );
    let x21 = f12.apply(&basis1[0]) * (1.0 / c1);
    let x22 = if r >= 1.0 - DEGENERATE_R {
        x21.orthogonal().phase_normalized()
    } else {
        f12.apply(&basis1[1]) * (1.0 / c2)
    };

    SchmidtForm::new(r, basis1, [x21, x22])
        .expect("eigenvectors and constraint images form orthonormal bases")
}

/// Rebuilds the state `sqrt((1+r)/2) x1_1 (x) x2_1 + sqrt((1-r)/2) x1_2 (x) x2_2`.
pub fn reconstruct_state(form: &SchmidtForm) -> TwoQubitState {
    let (c1, c2) = form.coefficients();
    let amps = tensor_vector(&form.basis1[0], &form.basis2[0]) * c1
        + tensor_vector(&form.basis1[1], &form.basis2[1]) * c2;
    TwoQubitState::from_amplitudes_normalized(amps)
        .expect("a Schmidt form always rebuilds a unit state")
}

/// Entanglement parameter `r = 2 lambda_max(D1) - 1`, clamped to `[0, 1]`.
pub fn entanglement_parameter(psi: &TwoQubitState) -> f64 {
    let eig = hermitian_eigen2(&psi.reduced_density_first())
        .expect("reduced density matrix is Hermitian by construction");
    (2.0 * eig.values[0] - 1.0).clamp(0.0, 1.0)
}
