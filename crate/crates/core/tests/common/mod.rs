#![allow(dead_code)]

use dephasing_core::hilbert::{DensityMatrix, LevelSystem, StateVector, SystemKind};
use dephasing_core::numerics::{hermitian_eigen, ComplexMatrix};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn system(kind: SystemKind) -> LevelSystem {
    LevelSystem::new(kind, 0.0).unwrap()
}

pub fn random_amplitudes(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

pub fn random_state(rng: &mut impl Rng, kind: SystemKind) -> StateVector {
    let amps = random_amplitudes(rng, kind.dim());
    StateVector::normalized(system(kind), amps).unwrap()
}

/// Mixture of `rank` random pure states with random weights.
pub fn random_psd(rng: &mut impl Rng, n: usize, rank: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n);
    let mut total = 0.0;
    for _ in 0..rank {
        let v = random_amplitudes(rng, n);
        let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        let w = rng.gen_range(0.05..1.0) / norm;
        total += w * norm;
        m = &m + &ComplexMatrix::outer(&v, &v).scale(C64::new(w, 0.0));
    }
    m.scale(C64::new(1.0 / total, 0.0)).hermitian_part()
}

pub fn random_density(rng: &mut impl Rng, kind: SystemKind, rank: usize) -> DensityMatrix {
    DensityMatrix::new(system(kind), random_psd(rng, kind.dim(), rank)).unwrap()
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// `exp(i H)` for a random Hermitian `H`.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let h = random_hermitian(rng, n).scale(C64::new(3.0, 0.0));
    let e = hermitian_eigen(&h).unwrap();
    let phases: Vec<C64> = e.values.iter().map(|&x| C64::from_polar(1.0, x)).collect();
    let d = ComplexMatrix::from_diagonal(&phases);
    &(&e.vectors * &d) * &e.vectors.adjoint()
}

pub fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).max_abs()
}
