//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite component in {0}")]
    NonFinite(&'static str),

    #[error("vector is not unit norm (|norm^2 - 1| = {0:.3e})")]
    NotUnitNorm(f64),

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix trace is not 1 (|trace - 1| = {0:.3e})")]
    NotUnitTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("radius {0} outside the unit ball")]
    RadiusOutOfRange(f64),

    #[error("polar angle {0} outside [0, pi]")]
    AngleOutOfRange(f64),

    #[error("basis pair is not orthonormal (max defect {0:.3e})")]
    NotOrthonormal(f64),

    #[error("constraint map directions do not compose")]
    IncompatibleDirections,

    #[error("point with radius {0} is not on the sphere surface")]
    InteriorPoint(f64),

    #[error("zero-norm image: the mapped point has no defined direction")]
    DegenerateImage,

    #[error("cannot normalize a zero vector")]
    ZeroVector,

    #[error("grid too small: need ntheta >= 2 and nphi >= 1, got {ntheta} x {nphi}")]
    GridTooSmall { ntheta: usize, nphi: usize },

    #[error("entanglement parameter r = {0} is too close to 1 for a line image")]
    ProductStateDegenerate(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
