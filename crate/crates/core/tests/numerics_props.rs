mod common;

use common::*;
use dephasing_core::numerics::{hermitian_eigen, hermitian_eigenvalues, product_spectrum_sqrt, psd_sqrt, ComplexMatrix};
use nalgebra::{DMatrix, Schur};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<C64> {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| m[(i, j)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eigen_decomposition_reconstructs(seed in any::<u64>(), n in 2usize..=8) {
        let a = random_hermitian(&mut rng(seed), n);
        let e = hermitian_eigen(&a).unwrap();
        prop_assert!(max_diff(&e.reconstruct(), &a) < 1e-12);
        let gram = &e.vectors.adjoint() * &e.vectors;
        prop_assert!(max_diff(&gram, &ComplexMatrix::identity(n)) < 1e-12);
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn eigenvalues_match_nalgebra(seed in any::<u64>(), n in 2usize..=8) {
        let a = random_hermitian(&mut rng(seed), n);
        let ours = hermitian_eigenvalues(&a).unwrap();
        let mut theirs: Vec<f64> = to_nalgebra(&a).symmetric_eigenvalues().iter().copied().collect();
        theirs.sort_by(|x, y| y.total_cmp(x));
        for (x, y) in ours.iter().zip(&theirs) {
            prop_assert!((x - y).abs() < 1e-12, "{ours:?} vs {theirs:?}");
        }
    }

    #[test]
    fn psd_sqrt_squares_and_commutes(seed in any::<u64>(), n in 2usize..=8, rank in 1usize..=8) {
        let a = random_psd(&mut rng(seed), n, rank.min(n));
        let s = psd_sqrt(&a).unwrap();
        prop_assert!(max_diff(&(&s * &s), &a) < 1e-9);
        let commutator = &(&s * &a) - &(&a * &s);
        prop_assert!(commutator.frobenius_norm() <= 1e-9);
    }

    #[test]
    fn product_spectrum_unitarily_invariant(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = rng(seed);
        let rho = random_psd(&mut r, n, n);
        let sigma = random_psd(&mut r, n, n);
        let u = random_unitary(&mut r, n);
        let a = product_spectrum_sqrt(&rho, &sigma).unwrap();
        let b = product_spectrum_sqrt(&rho.conjugate_by(&u), &sigma.conjugate_by(&u)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn product_spectrum_squares_sum_to_trace(seed in any::<u64>(), n in 2usize..=8, rank in 1usize..=8) {
        let mut r = rng(seed);
        let rho = random_psd(&mut r, n, rank.min(n));
        let sigma = random_psd(&mut r, n, n);
        let lambda = product_spectrum_sqrt(&rho, &sigma).unwrap();
        let sum: f64 = lambda.iter().map(|l| l * l).sum();
        let trace = (&rho * &sigma).trace();
        prop_assert!((sum - trace.re).abs() <= 1e-9);
        prop_assert!(trace.im.abs() <= 1e-12);
    }

    // Independent oracle: eigenvalues of the non-Hermitian product from a
    // general complex Schur decomposition.
    #[test]
    fn product_spectrum_matches_schur_of_plain_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_psd(&mut r, 4, 4);
        let sigma = random_psd(&mut r, 4, 4);
        let ours = product_spectrum_sqrt(&rho, &sigma).unwrap();
        let eig = Schur::new(to_nalgebra(&(&rho * &sigma))).eigenvalues().unwrap();
        let mut theirs: Vec<f64> = eig.iter().map(|z| z.re.max(0.0).sqrt()).collect();
        theirs.sort_by(|x, y| y.total_cmp(x));
        for (x, y) in ours.iter().zip(&theirs) {
            prop_assert!((x - y).abs() <= 1e-8, "{ours:?} vs {theirs:?}");
        }
        prop_assert!(eig.iter().all(|z| z.im.abs() < 1e-10));
    }
}
