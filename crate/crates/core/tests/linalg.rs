mod common;

use aluthge::experiments::{gaussian_matrix, sample_rng};
use aluthge::linalg::{
    char_poly, hermitian_eig, is_diagonalizable, poly_from_roots, polar_decompose, psd_power, spectrum, CMatrix,
};
use rand::Rng;

#[test]
fn polar_factors_reconstruct() {
    for index in 0..1000u64 {
        let mut rng = sample_rng(404, index);
        let r = rng.random_range(2..=6);
        let t = gaussian_matrix(&mut rng, r);
        let f = polar_decompose(&t).unwrap();
        assert!((&f.u * &f.p).dist(&t) <= 1e-11 * t.frobenius_norm().max(1.0), "sample {index}");
    }
}

#[test]
fn polar_of_the_triangular_example() {
    let t = common::section44();
    let f = polar_decompose(&t).unwrap();
    assert!((&f.p * &f.p).dist(&CMatrix::from_real_rows(&[[13.0, -2.0], [-2.0, 1.0]])) <= 1e-12);
    assert!((&f.u * &f.p).dist(&t) <= 1e-12);
}

#[test]
fn psd_powers_compose() {
    for index in 0..50u64 {
        let mut rng = sample_rng(405, index);
        let r = rng.random_range(2..=5);
        let g = gaussian_matrix(&mut rng, r);
        let p = &(&g.adjoint() * &g) + &CMatrix::identity(r).scale_real(0.1);
        let a: f64 = rng.random_range(-1.0..1.0);
        let b: f64 = rng.random_range(-1.0..1.0);
        let lhs = &psd_power(&p, a).unwrap() * &psd_power(&p, b).unwrap();
        let rhs = psd_power(&p, a + b).unwrap();
        assert!(lhs.dist(&rhs) <= 1e-10 * p.frobenius_norm().powf(a + b).max(1.0), "sample {index}");
    }
}

#[test]
fn characteristic_polynomial_matches_eigenvalues() {
    for seed in 0..50u64 {
        let r = 2 + (seed as usize) % 4;
        let (t, _) = common::diagonalizable(seed, r);
        let from_roots = poly_from_roots(&spectrum(&t, 1e-8).unwrap().expanded());
        let direct = char_poly(&t);
        for (k, (x, y)) in direct.iter().zip(&from_roots).enumerate() {
            assert!((x - y).norm() <= 1e-7 * x.norm().max(1.0), "seed {seed}, coefficient {k}");
        }
    }
}

#[test]
fn hermitian_eigendecomposition_residuals() {
    for index in 0..100u64 {
        let mut rng = sample_rng(406, index);
        let r = rng.random_range(2..=6);
        let a = gaussian_matrix(&mut rng, r).hermitian_part();
        let (vals, v) = hermitian_eig(&a).unwrap();
        let rec = &(&v * &CMatrix::diag_real(&vals)) * &v.adjoint();
        assert!(rec.dist(&a) <= 1e-10 * a.frobenius_norm());
        assert!((&v.adjoint() * &v).dist(&CMatrix::identity(r)) <= 1e-10);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn diagonalizability_of_samples() {
    for seed in 0..20u64 {
        let (t, _) = common::diagonalizable(seed, 3);
        assert!(is_diagonalizable(&t, 1e-8).unwrap());
    }
}
