//! Geometric model of a pair of entangled spin-1/2 systems.
//!
//! States of a single spin live on the Bloch ball ([`bloch`]); a pure state of
//! the pair is encoded by a conjugate-linear constraint map between the two
//! single-spin spaces ([`entangle`]), whose Schmidt diagonal form yields a
//! single entanglement parameter `r` in `[0, 1]` (`r = 0` is the singlet,
//! `r = 1` a product state). A measurement on one spin acts on the other
//! through the constraint map: the second sphere is rotated and stretched
//! toward its north pole ([`measurement`]). Every closed-form prediction is
//! checked against a brute-force four-dimensional oracle ([`oracle`]) by the
//! seeded verification suites in [`verify`].

pub mod bloch;
pub mod entangle;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod oracle;
pub mod verify;

pub use error::{Error, Result};

/// Tolerance for closed-form algebraic identities (norms, traces, Hermiticity).
pub const TOL_ALGEBRAIC: f64 = 1e-12;

/// Tolerance for eigen-derived and frame-converted quantities.
pub const TOL_EIGEN: f64 = 1e-9;

/// Squared norm below which a collapse image is reported as an impossible
/// outcome instead of being normalized.
pub const ZERO_IMAGE_NORM2: f64 = 1e-24;
