mod common;

use common::*;
use dephasing_core::channel::{bath_functions, dephasing_factors, evolve, BathMode, BathParams};
use dephasing_core::hilbert::{named_state, pure_density, DensityMatrix, LevelSystem, SystemKind};
use dephasing_core::numerics::{hermitian_eigenvalues, ComplexMatrix};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn warm(j0: f64) -> BathParams {
    BathParams::from_temperature_ratio(j0, 1.0, 1.0 / 60.0, BathMode::ClosedFormLowT).unwrap()
}

fn cold(j0: f64) -> BathParams {
    BathParams::new(j0, 1.0, f64::INFINITY, BathMode::ClosedFormZeroT).unwrap()
}

fn kind(fermion: bool) -> SystemKind {
    if fermion {
        SystemKind::Fermionic
    } else {
        SystemKind::Qubit
    }
}

#[test]
fn every_mode_starts_at_zero() {
    let modes = [
        cold(1.0),
        warm(1.0),
        BathParams::new(1.0, 1.0, 60.0, BathMode::Quadrature).unwrap(),
        BathParams::new(1.0, 1.0, f64::INFINITY, BathMode::Quadrature).unwrap(),
        BathParams::new(1.0, 1.0, 60.0, BathMode::discrete_default(1.0)).unwrap(),
    ];
    for p in modes {
        let b = bath_functions(&p, 0.0).unwrap();
        assert_eq!((b.gamma, b.delta, b.theta), (0.0, 0.0, 0.0), "{:?}", p.mode());
    }
}

#[test]
fn low_t_survives_overflowing_sinh() {
    let p = BathParams::from_temperature_ratio(1.0, 1.0, 1.0 / 20.0, BathMode::ClosedFormLowT).unwrap();
    // pi t / beta > 700
    let t = 5000.0;
    let b = bath_functions(&p, t).unwrap();
    let x = std::f64::consts::PI * t / p.beta();
    let expected = 0.125 * (1.0 + t * t).ln() + 0.25 * (x - (2.0 * x).ln());
    assert!(b.gamma.is_finite());
    assert!((b.gamma - expected).abs() / expected < 1e-14);
}

#[test]
fn discrete_sum_converges_with_mode_count() {
    let quad = BathParams::new(1.0, 1.0, 60.0, BathMode::Quadrature).unwrap();
    let exact = bath_functions(&quad, 3.0).unwrap().gamma;
    let err = |n: usize| {
        let p = BathParams::new(
            1.0,
            1.0,
            60.0,
            BathMode::DiscreteModes {
                n_modes: n,
                omega_max: 40.0,
            },
        )
        .unwrap();
        (bath_functions(&p, 3.0).unwrap().gamma - exact).abs()
    };
    // Midpoint sums converge as 1/n^2.
    let (coarse, fine) = (err(1000), err(8000));
    assert!(fine < coarse / 30.0, "{coarse} -> {fine}");
}

#[test]
fn dfs_and_diagonal_states_are_stationary() {
    for t in [0.1, 1.0, 10.0, 100.0] {
        for p in [cold(3.0), warm(3.0)] {
            for name in ["dfs_fermion(0.3)", "dfs_qubit(0.9)", "bell_phi"] {
                let rho = pure_density(&named_state(name, None).unwrap());
                let later = evolve(&rho, &p, t).unwrap();
                assert!(max_diff(later.matrix(), rho.matrix()) <= 1e-12);
            }
            let diag = DensityMatrix::maximally_mixed(LevelSystem::fermionic());
            assert_eq!(evolve(&diag, &p, t).unwrap(), diag);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn evolution_is_entrywise_factor_product(
        seed in any::<u64>(), t in 0.0f64..30.0, omega0 in 0.0f64..3.0, fermion in any::<bool>(), hot in any::<bool>(),
    ) {
        let system = LevelSystem::new(kind(fermion), omega0).unwrap();
        let rho = random_psd(&mut rng(seed), system.dim(), 3);
        let rho = DensityMatrix::new(system.clone(), rho).unwrap();
        let params = if hot { warm(2.0) } else { cold(2.0) };
        let b = bath_functions(&params, t).unwrap();
        let later = evolve(&rho, &params, t).unwrap();
        let (l, e) = (system.pointer(), system.energies());
        for m in 0..system.dim() {
            for n in 0..system.dim() {
                let f = C64::from_polar(1.0, (e[n] - e[m]) * t)
                    * (-(l[m] - l[n]).powi(2) * b.gamma).exp()
                    * C64::from_polar(1.0, -(l[m] * l[m] - l[n] * l[n]) * b.r());
                prop_assert!((later.matrix()[(m, n)] - rho.matrix()[(m, n)] * f).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn factor_matrix_is_a_psd_kernel(t in 0.0f64..50.0, omega0 in 0.0f64..3.0, fermion in any::<bool>(), hot in any::<bool>()) {
        let system = LevelSystem::new(kind(fermion), omega0).unwrap();
        let params = if hot { warm(1.0) } else { cold(1.0) };
        let f = dephasing_factors(&system, &params, t).unwrap().factors;
        let n = system.dim();
        for m in 0..n {
            prop_assert_eq!(f[(m, m)], C64::new(1.0, 0.0));
            for k in 0..n {
                prop_assert!(f[(m, k)].norm() <= 1.0 + 1e-15);
                prop_assert_eq!(f[(m, k)], f[(k, m)].conj());
            }
        }
        let ev = hermitian_eigenvalues(&f).unwrap();
        prop_assert!(ev.iter().all(|&x| x >= -1e-12), "{ev:?}");
    }

    #[test]
    fn gamma_is_non_decreasing(t1 in 0.0f64..100.0, dt in 0.0f64..10.0, j0 in 0.1f64..10.0, hot in any::<bool>()) {
        let params = if hot { warm(j0) } else { cold(j0) };
        let a = bath_functions(&params, t1).unwrap().gamma;
        let b = bath_functions(&params, t1 + dt).unwrap().gamma;
        prop_assert!(b >= a);
    }

    #[test]
    fn evolution_preserves_density_invariants(seed in any::<u64>(), t in 0.0f64..20.0, rank in 1usize..=6, fermion in any::<bool>()) {
        let k = kind(fermion);
        let rho = random_density(&mut rng(seed), k, rank.min(k.dim()));
        let later = evolve(&rho, &warm(4.8), t).unwrap();
        let m = later.matrix();
        prop_assert!((m.trace() - C64::new(1.0, 0.0)).norm() <= 1e-12);
        prop_assert!(m.hermiticity_deviation() == 0.0);
        prop_assert!(hermitian_eigenvalues(m).unwrap().iter().all(|&x| x >= -1e-9));
        let diag_before: Vec<C64> = (0..k.dim()).map(|i| rho.matrix()[(i, i)]).collect();
        let diag_after: Vec<C64> = (0..k.dim()).map(|i| m[(i, i)]).collect();
        prop_assert_eq!(diag_before, diag_after);
    }
}

#[test]
fn identity_factors_at_time_zero() {
    for k in [SystemKind::Fermionic, SystemKind::Qubit] {
        let system = LevelSystem::new(k, 2.0).unwrap();
        let f = dephasing_factors(&system, &warm(1.0), 0.0).unwrap().factors;
        let ones = ComplexMatrix::from_rows(&vec![vec![C64::new(1.0, 0.0); k.dim()]; k.dim()]).unwrap();
        assert_eq!(f, ones);
    }
}
