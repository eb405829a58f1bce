//! Brute-force verifier for the closed-form model.
//!
//! Everything here recomputes predictions from first principles in the full
//! four-dimensional space: collapse outcomes through explicit 4x4 projectors,
//! the entanglement parameter through a one-sided Jacobi SVD of the
//! coefficient grid, and outcome statistics through seeded Monte Carlo
//! sampling. None of it calls into the constraint-function implementation;
//! the duplication is the point.
//!
//! Randomness is pinned to ChaCha8 (`rand_chacha::ChaCha8Rng`), which yields
//! the same stream for the same seed on every platform. Parallel sampling
//! partitions the draws into chunks, each on its own ChaCha8 stream derived
//! from the master seed, so the merged counts are independent of scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::bloch::{BlochPoint, MeasurementDirection};
use crate::entangle::TwoQubitState;
use crate::linalg::{projector, tensor_operator, Matrix2, Vector2, Vector4};
use crate::ZERO_IMAGE_NORM2;

/// Draws per Monte Carlo chunk; each chunk runs on its own ChaCha8 stream.
const CHUNK: u64 = 1 << 14;

/// Reproducible source of randomness: a seed for the ChaCha8 generator.
///
/// `rng()` yields stream 0; `stream(k)` yields independent substreams of the
/// same seed for deterministic parallel partitioning.
#[derive(Clone, Copy, Debug)]
pub struct RandomSource {
    seed: u64,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

/// Outcome counts of a repeated two-outcome measurement.
#[derive(Clone, Copy, Debug)]
pub struct EmpiricalDistribution {
    counts: [u64; 2],
    total: u64,
}

impl EmpiricalDistribution {
    pub fn counts(&self) -> [u64; 2] {
        self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn frequency(&self, outcome: usize) -> f64 {
        self.counts[outcome] as f64 / self.total as f64
    }
}

/// One outcome of the brute-force collapse: the squared norm of
/// `(P (x) 1)|psi>` and the normalized post state, absent for probability
/// zero.
#[derive(Clone, Copy, Debug)]
pub struct BruteOutcome {
    pub probability: f64,
    pub post: Option<Vector4>,
}

/// Unit-norm random state with unitarily invariant distribution
/// (normalized complex Gaussian amplitudes).
pub fn random_two_qubit_state<R: Rng>(rng: &mut R) -> TwoQubitState {
    loop {
        let mut parts = [Complex64::ZERO; 4];
        for z in parts.iter_mut() {
            *z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
        if let Ok(state) = TwoQubitState::from_amplitudes_normalized(Vector4::new(parts)) {
            return state;
        }
    }
}

/// Uniformly distributed measurement direction.
pub fn random_direction<R: Rng>(rng: &mut R) -> MeasurementDirection {
    let cos_t: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    MeasurementDirection::new(cos_t.acos(), phi).expect("sampled angles are in range")
}

/// Random unit spin state.
pub fn random_unit_spin<R: Rng>(rng: &mut R) -> Vector2 {
    loop {
        let v = Vector2::new(
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)),
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)),
        );
        if let Ok(unit) = v.normalized() {
            return unit;
        }
    }
}

/// Haar-like random unitary: a random unit column, its orthogonal complement,
/// and a random relative phase.
pub fn random_unitary2<R: Rng>(rng: &mut R) -> Matrix2 {
    let first = random_unit_spin(rng);
    let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    let second = first.orthogonal() * phase;
    Matrix2::from_rows([first.0[0], second.0[0]], [first.0[1], second.0[1]])
}

/// Uniform random point of the closed unit ball.
pub fn random_bloch_point<R: Rng>(rng: &mut R) -> BlochPoint {
    let r = rng.random_range(0.0f64..=1.0).cbrt();
    let cos_t: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    BlochPoint::new(r, cos_t.acos(), phi).expect("sampled point is in the ball")
}

/// Collapse outcomes along `dir` and its antipode computed with explicit 4x4
/// projectors: probabilities are squared norms of `(P (x) 1)|psi>`.
pub fn brute_force_collapse(
    psi: &TwoQubitState,
    dir: &MeasurementDirection,
) -> [BruteOutcome; 2] {
    brute_force_collapse_on(psi, dir, true)
}

/// As [`brute_force_collapse`] but measuring the second spin (`1 (x) P`).
pub fn brute_force_collapse_second(
    psi: &TwoQubitState,
    dir: &MeasurementDirection,
) -> [BruteOutcome; 2] {
    brute_force_collapse_on(psi, dir, false)
}

fn brute_force_collapse_on(
    psi: &TwoQubitState,
    dir: &MeasurementDirection,
    measure_first: bool,
) -> [BruteOutcome; 2] {
    let amps = psi.amplitudes();
    let identity = Matrix2::identity();
    let mut outcomes = [BruteOutcome {
        probability: 0.0,
        post: None,
    }; 2];
    for (slot, d) in [*dir, dir.antipode()].iter().enumerate() {
        let p = projector(&d.ray()).expect("measurement rays are unit");
        let p4 = if measure_first {
            tensor_operator(&p, &identity)
        } else {
            tensor_operator(&identity, &p)
        };
        let unnormalized = p4 * amps;
        let probability = unnormalized.norm2();
        let post = if probability <= ZERO_IMAGE_NORM2 {
            None
        } else {
            Some(unnormalized * (1.0 / probability.sqrt()))
        };
        outcomes[slot] = BruteOutcome { probability, post };
    }
    outcomes
}

/// Schmidt data recovered by an SVD of the coefficient grid.
#[derive(Clone, Copy, Debug)]
pub struct SvdSchmidt {
    pub r: f64,
    pub singular_values: [f64; 2],
    pub basis1: [Vector2; 2],
    pub basis2: [Vector2; 2],
}

/// Schmidt decomposition through a one-sided Jacobi SVD of the 2x2
/// coefficient grid: one complex rotation makes the columns orthogonal, the
/// singular values are the resulting column norms, and
/// `r = s1^2 - s2^2`. This route never touches reduced density matrices or
/// the eigensolver.
pub fn brute_force_schmidt(psi: &TwoQubitState) -> SvdSchmidt {
    let grid = psi.computational_lambdas();
    // columns of the grid
    let col = |k: usize| Vector2::new(grid[0][k], grid[1][k]);
    let (a1, a2) = (col(0), col(1));
    let g11 = a1.norm2();
    let g22 = a2.norm2();
    let g12 = a1.inner(&a2);

    // complex Jacobi rotation [[c, -conj(s)], [s, c]] nulling <b1, b2>
    let (c_rot, s_rot) = if g12.norm() <= 1e-300 {
        (1.0, Complex64::ZERO)
    } else {
        let gamma = g12.arg();
        let zeta = (g22 - g11) / (2.0 * g12.norm());
        // smaller root of t^2 - 2 zeta t - 1 = 0
        let t = -zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
        let c = 1.0 / (1.0 + t * t).sqrt();
        (c, Complex64::from_polar(t * c, -gamma))
    };

    let b1 = a1 * c_rot + a2 * s_rot;
    let b2 = a1 * (-s_rot.conj()) + a2 * c_rot;
    let v1 = Vector2::new(Complex64::new(c_rot, 0.0), s_rot);
    let v2 = Vector2::new(-s_rot.conj(), Complex64::new(c_rot, 0.0));

    let mut pairs = [(b1, v1), (b2, v2)];
    if pairs[0].0.norm2() < pairs[1].0.norm2() {
        pairs.swap(0, 1);
    }
    let s1 = pairs[0].0.norm();
    let s2 = pairs[1].0.norm();
    let u1 = pairs[0]
        .0
        .normalized()
        .expect("a unit state has a nonzero leading singular value");
    let u2 = match pairs[1].0.normalized() {
        Ok(v) => v,
        Err(_) => u1.orthogonal(),
    };
    SvdSchmidt {
        r: (s1 * s1 - s2 * s2).clamp(0.0, 1.0),
        singular_values: [s1, s2],
        basis1: [u1, u2],
        basis2: [pairs[0].1.conj(), pairs[1].1.conj()],
    }
}

/// Samples `n` outcomes of the measurement along `dir` with the brute-force
/// probabilities. Draws are partitioned into chunks on derived ChaCha8
/// streams and counted in parallel; the merged counts depend only on the
/// seed.
pub fn monte_carlo_outcomes(
    psi: &TwoQubitState,
    dir: &MeasurementDirection,
    n: u64,
    source: &RandomSource,
) -> EmpiricalDistribution {
    let p_plus = brute_force_collapse(psi, dir)[0].probability;
    let chunks: Vec<(u64, u64)> = (0..n.div_ceil(CHUNK))
        .map(|k| (k, CHUNK.min(n - k * CHUNK)))
        .collect();
    let plus: u64 = chunks
        .par_iter()
        .map(|&(k, len)| {
            let mut rng = source.stream(k + 1);
            (0..len).filter(|_| rng.random::<f64>() < p_plus).count() as u64
        })
        .sum();
    EmpiricalDistribution {
        counts: [plus, n - plus],
        total: n,
    }
}
