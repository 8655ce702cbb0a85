mod common;

use common::*;
use dephasing_core::channel::{evolve, BathMode, BathParams};
use dephasing_core::hilbert::{pure_density, slater_state, DensityMatrix, StateVector, SystemKind};
use dephasing_core::measures::{coherence, concurrence, linear_entropy, pure_concurrence, tilde, SpinFlipConvention};
use dephasing_core::numerics::ComplexMatrix;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

/// Hand expansion of `|<psi| D |psi>|` for the published flip matrix in the
/// basis with `i|0,0>`: `|2 c1 c5 - 2 c2 c4 + c3^2 - c6^2|`.
fn flip_closed_form(c: &[C64]) -> f64 {
    (2.0 * c[0] * c[4] - 2.0 * c[1] * c[3] + c[2] * c[2] - c[5] * c[5]).norm()
}

/// Slater-rank concurrence `2 |Pf(w)|` of the antisymmetric coefficients
/// `w_ij = <slater_ij|psi>`.
fn pfaffian_concurrence(amps: &[C64]) -> f64 {
    let f = system(SystemKind::Fermionic);
    let w = |i: usize, j: usize| -> C64 {
        let s = slater_state(&f, i, j).unwrap();
        s.amplitudes().iter().zip(amps).map(|(a, b)| a.conj() * b).sum()
    };
    2.0 * (w(1, 2) * w(3, 4) - w(1, 3) * w(2, 4) + w(1, 4) * w(2, 3)).norm()
}

/// Wootters pure-state formula `|<psi| sy x sy |psi*>|` in the computational basis.
fn qubit_pure(amps: &[C64]) -> f64 {
    (2.0 * (amps[0] * amps[3] - amps[1] * amps[2])).norm()
}

fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (n, m) = (a.dim(), b.dim());
    let mut out = ComplexMatrix::zeros(n * m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[(i * m + k, j * m + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

#[test]
fn pure_shortcut_agrees_with_full_evaluation_on_1000_states() {
    let mut r = rng(7);
    for kind in [SystemKind::Fermionic, SystemKind::Qubit] {
        for _ in 0..1000 {
            let psi = random_state(&mut r, kind);
            let full = concurrence(&pure_density(&psi)).unwrap();
            assert!((full - pure_concurrence(&psi)).abs() <= 1e-10, "{full}");
        }
    }
}

// The published flip matrix and the Slater map of `slater_state` are not mutually
// consistent once |2,0>/|0,0> mix with the m != 0 states: the product
// (|1> + |2>) ^ (|3> + |4>) / 2 has Slater rank 1 but flip concurrence 1.
#[test]
fn flip_convention_departs_from_slater_rank_on_mixed_blocks() {
    let h = C64::new(0.5, 0.0);
    let z = C64::new(0.0, 0.0);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // w13 = w14 = w23 = w24 = 1/2 in the plain basis.
    let amps = vec![z, h, z, h, z, C64::new(s, 0.0)];
    let psi = StateVector::new(system(SystemKind::Fermionic), amps).unwrap();
    assert!(pfaffian_concurrence(psi.amplitudes()) < 1e-15);
    assert!((concurrence(&pure_density(&psi)).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn slater_basis_is_orthonormal() {
    let f = system(SystemKind::Fermionic);
    let pairs = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];
    for &(i, j) in &pairs {
        for &(k, l) in &pairs {
            let a = slater_state(&f, i, j).unwrap();
            let b = slater_state(&f, k, l).unwrap();
            let dot: C64 = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x.conj() * y).sum();
            let expected = if (i, j) == (k, l) { 1.0 } else { 0.0 };
            assert!((dot - expected).norm() < 1e-15);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn fermionic_concurrence_matches_closed_form(seed in any::<u64>()) {
        let psi = random_state(&mut rng(seed), SystemKind::Fermionic);
        let ours = concurrence(&pure_density(&psi)).unwrap();
        prop_assert!((ours - flip_closed_form(psi.amplitudes())).abs() <= 1e-10);
    }

    // Without amplitude on |2,0> or |0,0> both conventions reduce to
    // 2|c1 c5 - c2 c4|.
    #[test]
    fn pfaffian_agrees_off_the_m0_block(seed in any::<u64>()) {
        let mut amps = random_amplitudes(&mut rng(seed), 6);
        amps[2] = C64::new(0.0, 0.0);
        amps[5] = C64::new(0.0, 0.0);
        let psi = StateVector::normalized(system(SystemKind::Fermionic), amps).unwrap();
        let ours = concurrence(&pure_density(&psi)).unwrap();
        prop_assert!((ours - pfaffian_concurrence(psi.amplitudes())).abs() <= 1e-10);
    }

    #[test]
    fn pfaffian_agrees_on_the_m0_block(seed in any::<u64>()) {
        let mut amps = vec![C64::new(0.0, 0.0); 6];
        let r = random_amplitudes(&mut rng(seed), 2);
        amps[2] = r[0];
        amps[5] = r[1];
        let psi = StateVector::normalized(system(SystemKind::Fermionic), amps).unwrap();
        let ours = concurrence(&pure_density(&psi)).unwrap();
        prop_assert!((ours - pfaffian_concurrence(psi.amplitudes())).abs() <= 1e-10);
    }

    #[test]
    fn qubit_concurrence_matches_pure_formula(seed in any::<u64>()) {
        let psi = random_state(&mut rng(seed), SystemKind::Qubit);
        let ours = concurrence(&pure_density(&psi)).unwrap();
        prop_assert!((ours - qubit_pure(psi.amplitudes())).abs() <= 1e-10);
    }

    #[test]
    fn qubit_concurrence_invariant_under_local_unitaries(seed in any::<u64>(), rank in 1usize..=4) {
        let mut r = rng(seed);
        let rho = random_density(&mut r, SystemKind::Qubit, rank);
        let u = kron(&random_unitary(&mut r, 2), &random_unitary(&mut r, 2));
        let moved = DensityMatrix::new(rho.system().clone(), rho.matrix().conjugate_by(&u).hermitian_part()).unwrap();
        let (a, b) = (concurrence(&rho).unwrap(), concurrence(&moved).unwrap());
        prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
    }

    #[test]
    fn concurrence_invariant_under_jz_phases(seed in any::<u64>(), phi in -10.0f64..10.0, rank in 1usize..=6, fermion in any::<bool>()) {
        let kind = if fermion { SystemKind::Fermionic } else { SystemKind::Qubit };
        let mut r = rng(seed);
        let rho = random_density(&mut r, kind, rank.min(kind.dim()));
        let phases: Vec<C64> = rho.system().pointer().iter().map(|&l| C64::from_polar(1.0, phi * l)).collect();
        let u = ComplexMatrix::from_diagonal(&phases);
        let moved = DensityMatrix::new(rho.system().clone(), rho.matrix().conjugate_by(&u).hermitian_part()).unwrap();
        let (a, b) = (concurrence(&rho).unwrap(), concurrence(&moved).unwrap());
        prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
    }

    #[test]
    fn tilde_is_an_involution(seed in any::<u64>(), rank in 1usize..=6, fermion in any::<bool>()) {
        let kind = if fermion { SystemKind::Fermionic } else { SystemKind::Qubit };
        let rho = random_density(&mut rng(seed), kind, rank.min(kind.dim()));
        let conv = SpinFlipConvention::for_system(kind);
        let twice = tilde(&tilde(rho.matrix(), &conv).unwrap(), &conv).unwrap();
        prop_assert!(max_diff(&twice, rho.matrix()) <= 1e-12);
    }

    #[test]
    fn measures_stay_in_range(seed in any::<u64>(), rank in 1usize..=6, fermion in any::<bool>()) {
        let kind = if fermion { SystemKind::Fermionic } else { SystemKind::Qubit };
        let rho = random_density(&mut rng(seed), kind, rank.min(kind.dim()));
        let c = concurrence(&rho).unwrap();
        prop_assert!((0.0..=1.0).contains(&c));
        let s = linear_entropy(&rho);
        prop_assert!(s >= -1e-12 && s <= 1.0 - 1.0 / kind.dim() as f64 + 1e-12);
        prop_assert!(coherence(&rho) >= 0.0);
    }

    #[test]
    fn coherence_never_increases(seed in any::<u64>(), t in 0.0f64..20.0, warm in any::<bool>(), fermion in any::<bool>()) {
        let kind = if fermion { SystemKind::Fermionic } else { SystemKind::Qubit };
        let rho = random_density(&mut rng(seed), kind, 2);
        let params = if warm {
            BathParams::from_temperature_ratio(1.0, 1.0, 1.0 / 60.0, BathMode::ClosedFormLowT).unwrap()
        } else {
            BathParams::default()
        };
        let later = evolve(&rho, &params, t).unwrap();
        prop_assert!(coherence(&later) <= coherence(&rho) + 1e-12);
    }
}
