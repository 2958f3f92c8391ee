#![allow(dead_code)]

use grasslp::codes::CodeSet;
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n × n` orthogonal matrix from the QR factorization of a random matrix.
pub fn random_orthogonal(n: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    a.qr().q()
}

/// `m × n` frame with orthonormal rows.
pub fn random_frame(n: usize, m: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    random_orthogonal(n, rng).rows(0, m).into_owned()
}

pub fn random_code(n: usize, m: usize, size: usize, rng: &mut impl Rng) -> CodeSet {
    let frames = (0..size).map(|_| random_frame(n, m, rng)).collect();
    CodeSet::new(n, m, frames, None, false).unwrap()
}

/// Coordinate frame spanned by the given standard basis vectors.
pub fn coordinate_frame(n: usize, axes: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(axes.len(), n, |i, j| if axes[i] == j { 1.0 } else { 0.0 })
}
