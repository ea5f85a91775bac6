//! Seeded random inputs shared by the checks and the suite.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::num::{ratio, round_to_grid, Rational};

pub type SeededRng = ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 20_240_917;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent child stream, so adding draws to one check does not shift
/// another.
pub fn derive_seed(seed: u64, salt: &str) -> u64 {
    salt.bytes().fold(seed ^ 0x9e37_79b9_7f4a_7c15, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

pub fn gaussian_vec(rng: &mut SeededRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn gaussian_matrix(rng: &mut SeededRng, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal))
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the sign
/// of `R`'s diagonal folded into `Q`).
pub fn random_orthogonal(rng: &mut SeededRng, n: usize) -> DMatrix<f64> {
    let qr = gaussian_matrix(rng, n).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

pub fn random_permutation(rng: &mut SeededRng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Uniform rational `a/denom` with `lo ≤ a/denom ≤ hi`.
pub fn random_rational(rng: &mut SeededRng, lo: i64, hi: i64, denom: i64) -> Rational {
    ratio(rng.random_range(lo * denom..=hi * denom), denom)
}

pub fn inf_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

pub fn two_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn scaled(x: &[f64], c: f64) -> Vec<f64> {
    x.iter().map(|v| v * c).collect()
}

pub fn axpy(x: &[f64], a: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| xi + a * yi).collect()
}

/// Rounds each coordinate to the grid `1/denom`.
pub fn grid_vector(x: &[f64], denom: i64) -> Vec<Rational> {
    x.iter().map(|&v| round_to_grid(v, denom)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_repeat() {
        let a = gaussian_vec(&mut rng(7), 5);
        let b = gaussian_vec(&mut rng(7), 5);
        assert_eq!(a, b);
        assert_ne!(derive_seed(7, "a"), derive_seed(7, "b"));
    }

    #[test]
    fn orthogonal_is_orthogonal() {
        let q = random_orthogonal(&mut rng(3), 4);
        let err = (q.transpose() * &q - DMatrix::<f64>::identity(4, 4)).abs().max();
        assert!(err < 1e-12);
    }

    #[test]
    fn rationals_in_range() {
        let mut r = rng(1);
        for _ in 0..100 {
            let q = random_rational(&mut r, 1, 3, 4);
            assert!(q >= ratio(1, 1) && q <= ratio(3, 1));
        }
    }
}
