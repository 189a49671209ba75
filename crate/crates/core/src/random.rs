//! Seeded random states and unitaries.
//!
//! All randomness in the crate flows through [`seeded_rng`], a ChaCha20 stream
//! cipher used as a counter-based generator: the output is a pure function of
//! `(seed, stream, word position)`, so results are bit-reproducible across runs
//! and platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{orthonormalize_columns, DensityOperator, Ket, Matrix, QubitLayout, C64};

pub type DeterministicRng = ChaCha20Rng;

/// Generator for `(seed, stream)`. Independent streams are used for parallel work.
pub fn seeded_rng(seed: u64, stream: u64) -> DeterministicRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Haar-random pure state.
pub fn random_ket<R: Rng + ?Sized>(layout: QubitLayout, rng: &mut R) -> Result<Ket> {
    let amps = (0..layout.dim()).map(|_| complex_gaussian(rng)).collect();
    Ket::normalized(layout, amps)
}

/// `G G† / Tr(G G†)` with `G` a `dim × rank` complex Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(layout: QubitLayout, rank: usize, rng: &mut R) -> Result<DensityOperator> {
    let d = layout.dim();
    let rank = rank.clamp(1, d);
    let g: Vec<C64> = (0..d * rank).map(|_| complex_gaussian(rng)).collect();
    let mut m = Matrix::from_fn(d, |i, j| (0..rank).map(|k| g[i * rank + k] * g[j * rank + k].conj()).sum());
    let tr = m.trace().re;
    m = m.scale_real(1.0 / tr);
    DensityOperator::new(layout, m.hermitian_part())
}

/// Haar-random `rows × cols` isometry (orthonormal columns), row-major.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Vec<C64> {
    assert!(cols <= rows);
    loop {
        let mut a: Vec<C64> = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
        if orthonormalize_columns(&mut a, rows, cols) {
            return a;
        }
    }
}

/// Haar-random unitary.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Matrix {
    let a = random_isometry(dim, dim, rng);
    Matrix::from_fn(dim, |i, j| a[i * dim + j])
}
