//! Seeded randomness: complex Gaussian matrices, Haar-ish unitaries via QR,
//! and seeded projections. Every draw is derived from an explicit seed
//! through a counter-based stream, so outputs are bit-identical across runs
//! and platforms.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::matrix::CMatrix;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// n×n matrix with i.i.d. standard complex Gaussian entries.
pub fn random_gaussian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            m[(i, j)] = Complex64::new(re, im);
        }
    }
    m
}

/// Seeded unitary from QR (modified Gram–Schmidt) of a seeded complex
/// Gaussian, with the diagonal of R made real positive so the result is a
/// deterministic function of the seed.
pub fn random_unitary(n: usize, seed: u64) -> CMatrix {
    let mut rng = rng_from_seed(seed);
    random_unitary_from(n, &mut rng)
}

pub fn random_unitary_from(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = random_gaussian(n, rng);
    let mut q = g;
    for j in 0..n {
        for k in 0..j {
            // proj = <q_k, q_j>
            let mut proj = Complex64::new(0.0, 0.0);
            for i in 0..n {
                proj += q[(i, k)].conj() * q[(i, j)];
            }
            for i in 0..n {
                let qik = q[(i, k)];
                q[(i, j)] -= proj * qik;
            }
        }
        let norm: f64 = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        // Gaussian columns are independent a.s.; norm is bounded away from 0.
        for i in 0..n {
            q[(i, j)] /= norm;
        }
        // Phase fix: make the j-th component (the R diagonal) real positive.
        let d = q[(j, j)];
        if d.norm() > 1e-14 {
            let phase = d.conj() / d.norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Seeded diagonal 0/1 projection of the given size and rank.
pub fn seeded_diag_projection(n: usize, rank: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    assert!(rank <= n);
    let mut slots: Vec<usize> = (0..n).collect();
    // Fisher–Yates with the seeded stream.
    for i in (1..n).rev() {
        let j = Uniform::new_inclusive(0, i).sample(rng);
        slots.swap(i, j);
    }
    let mut diag = vec![0.0; n];
    for &s in slots.iter().take(rank) {
        diag[s] = 1.0;
    }
    CMatrix::from_diag(&diag)
}

/// Uniform draw in (lo, hi).
pub fn uniform_in(lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> f64 {
    Uniform::new(lo, hi).sample(rng)
}

/// Uniform integer in [lo, hi].
pub fn uniform_usize(lo: usize, hi: usize, rng: &mut ChaCha8Rng) -> usize {
    Uniform::new_inclusive(lo, hi).sample(rng)
}
