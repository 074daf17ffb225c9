use aluthge::experiments::{gaussian_matrix, sample_rng};
use aluthge::linalg::{expm, psd_power, CMatrix};
use aluthge::tangent::{
    build_model, derivative_apply, derivative_fd, divided_differences, gamma_prime, hadamard_operator_norm,
    k_constant, operator_matrix, operator_norm, p_im, p_re, q_projection, stable_projection_block, support,
    tangent_from_direction, DiagonalPoint, TangentVector, DEFAULT_FD_STEP,
};
use aluthge::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

fn random_tangent(rng: &mut ChaCha8Rng, d: &DiagonalPoint) -> TangentVector {
    TangentVector::project(d, gaussian_matrix(rng, d.dim()))
}

/// Three families in turn: generic, mixed moduli with a repeated modulus,
/// and a single modulus with distinct phases.
fn random_point(rng: &mut ChaCha8Rng, index: usize) -> DiagonalPoint {
    let r = 2 + index % 3;
    let phases: Vec<f64> = (0..r).map(|_| rng.random_range(0.0..TAU)).collect();
    let moduli: Vec<f64> = match index % 3 {
        0 => (0..r).map(|_| rng.random_range(0.5..3.0)).collect(),
        1 => {
            let m = rng.random_range(0.5..3.0);
            (0..r).map(|k| if k == 0 { m * 1.7 } else { m }).collect()
        }
        _ => vec![rng.random_range(0.5..3.0); r],
    };
    DiagonalPoint::from_polar(&moduli, &phases).unwrap()
}

fn rel(a: &CMatrix, b: &CMatrix) -> f64 {
    a.dist(b) / b.frobenius_norm().max(1e-300)
}

#[test]
fn closed_form_derivative_matches_finite_differences() {
    let mut worst: f64 = 0.0;
    for index in 0..50 {
        let mut rng = sample_rng(2024, index as u64);
        let d = random_point(&mut rng, index);
        let lambda = rng.random_range(0.05..0.95);
        let x = random_tangent(&mut rng, &d);
        let model = derivative_apply(&d, lambda, &x).unwrap();
        let fd = derivative_fd(&d, lambda, &x, DEFAULT_FD_STEP).unwrap();
        let e = rel(fd.matrix(), model.matrix());
        worst = worst.max(e);
        assert!(e <= 1e-6, "case {index}: r={} lambda={lambda} rel={e:e}", d.dim());
    }
    println!("worst relative error {worst:e}");
}

#[test]
fn published_derivative_examples() {
    let d = DiagonalPoint::from_real(&[1.0, 2.0]).unwrap();
    let x = random_tangent(&mut sample_rng(1, 0), &d);
    let e = rel(derivative_fd(&d, 0.5, &x, 1e-5).unwrap().matrix(), derivative_apply(&d, 0.5, &x).unwrap().matrix());
    assert!(e <= 1e-6);

    let w = Complex64::from_polar(1.0, TAU / 3.0);
    let d = DiagonalPoint::new(vec![Complex64::new(1.0, 0.0), w, Complex64::new(2.0, 0.0)]).unwrap();
    let x = random_tangent(&mut sample_rng(1, 1), &d);
    let e = rel(derivative_fd(&d, 0.3, &x, 1e-5).unwrap().matrix(), derivative_apply(&d, 0.3, &x).unwrap().matrix());
    assert!(e <= 1e-6);

    let zero = TangentVector::zero(&d);
    assert_eq!(derivative_fd(&d, 0.3, &zero, 1e-5).unwrap().norm(), 0.0);
}

#[test]
fn daleckii_krein_for_fractional_powers() {
    for index in 0..10 {
        let mut rng = sample_rng(77, index);
        let r = 2 + (index as usize) % 3;
        let a: Vec<f64> = (0..r).map(|_| rng.random_range(0.5..4.0)).collect();
        let lambda: f64 = rng.random_range(0.1..0.9);
        let p = lambda / 2.0;
        let b = gaussian_matrix(&mut rng, r).hermitian_part();
        let base = CMatrix::diag_real(&a);
        let h = 1e-5;
        let plus = psd_power(&(&base + &b.scale_real(h)), p).unwrap();
        let minus = psd_power(&(&base - &b.scale_real(h)), p).unwrap();
        let fd = (&plus - &minus).scale_real(0.5 / h);
        let m = divided_differences(&a, |t| t.powf(p), |t| p * t.powf(p - 1.0));
        assert!(rel(&fd, &m.hadamard(&b)) <= 1e-6);
    }
}

#[test]
fn curve_derivative_matches_finite_differences() {
    for index in 0..10 {
        let mut rng = sample_rng(78, index);
        let d = random_point(&mut rng, index as usize);
        let a = gaussian_matrix(&mut rng, d.dim());
        let dm = d.matrix();
        let gamma = |t: f64| {
            let c = &(&expm(&a.scale_real(t)).unwrap() * &dm) * &expm(&a.scale_real(-t)).unwrap();
            &c.adjoint() * &c
        };
        let h = 1e-5;
        let fd = (&gamma(h) - &gamma(-h)).scale_real(0.5 / h);
        assert!(rel(&fd, &gamma_prime(&d, &a)) <= 1e-6);
    }
}

#[test]
fn hadamard_norm_is_the_largest_free_entry() {
    for index in 0..6 {
        let mut rng = sample_rng(79, index);
        let d = random_point(&mut rng, index as usize);
        let a = gaussian_matrix(&mut rng, d.dim());
        let op = operator_matrix(&d, |x| a.hadamard(x));
        let exact = operator_norm(&op).unwrap();
        let on_basis = support(&d).iter().map(|&(i, j)| a[(i, j)].norm()).fold(0.0, f64::max);
        assert!((exact - hadamard_operator_norm(&d, &a)).abs() <= 1e-12 * exact.max(1.0));
        assert!((exact - on_basis).abs() <= 1e-12 * exact.max(1.0));
    }
}

#[test]
fn commutation_relations_for_anti_hermitian_k() {
    let mut rng = sample_rng(80, 0);
    let d = random_point(&mut rng, 0);
    let k = build_model(&d, 0.4).unwrap().kmat;
    assert!(k.dist(&k.adjoint().scale_real(-1.0)) == 0.0);
    let b = gaussian_matrix(&mut rng, d.dim());
    assert!(k.hadamard(&p_re(&b)).dist(&p_im(&k.hadamard(&b))) <= 1e-14);
    assert!(k.hadamard(&p_im(&b)).dist(&p_re(&k.hadamard(&b))) <= 1e-14);
}

#[test]
fn tangent_directions() {
    let d = DiagonalPoint::from_real(&[3.0, 1.0]).unwrap();
    let a = CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
    let x = tangent_from_direction(&d, &a).unwrap();
    assert_eq!(x.matrix(), &CMatrix::from_real_rows(&[[0.0, -2.0], [0.0, 0.0]]));
    assert_eq!(tangent_from_direction(&d, &CMatrix::identity(2)).unwrap().norm(), 0.0);

    let mut rng = sample_rng(81, 0);
    let d = random_point(&mut rng, 0);
    let a = gaussian_matrix(&mut rng, d.dim());
    let m = build_model(&d, 0.5).unwrap();
    let x = tangent_from_direction(&d, &a).unwrap();
    let jka = TangentVector::project(&d, m.j.hadamard(&m.kmat).hadamard(&a));
    assert!(x.matrix().dist(jka.matrix()) <= 1e-12 * a.frobenius_norm() * d.moduli().iter().cloned().fold(1.0, f64::max));

    let scalar = DiagonalPoint::from_real(&vec![2.0; a.dim()]).unwrap();
    assert_eq!(tangent_from_direction(&scalar, &a).unwrap().norm(), 0.0);
}

#[test]
fn q_is_an_orthogonal_projection() {
    for index in 0..9 {
        let mut rng = sample_rng(82, index);
        let d = random_point(&mut rng, index as usize);
        let x = random_tangent(&mut rng, &d);
        let y = random_tangent(&mut rng, &d);
        let qx = q_projection(&d, &x).unwrap();
        let qqx = q_projection(&d, &qx).unwrap();
        assert!(qqx.matrix().dist(qx.matrix()) <= 1e-12 * x.norm());
        let qy = q_projection(&d, &y).unwrap();
        let lhs = qx.matrix().frobenius_inner(y.matrix()).unwrap();
        let rhs = x.matrix().frobenius_inner(qy.matrix()).unwrap();
        assert!((lhs - rhs).abs() <= 1e-12 * x.norm() * y.norm());
    }
}

#[test]
fn compressed_derivative_is_bounded_by_k() {
    for index in 0..30 {
        let mut rng = sample_rng(83, index);
        let d = random_point(&mut rng, index as usize);
        let lambda = rng.random_range(0.05..0.95);
        let m = build_model(&d, lambda).unwrap();
        let a1 = m.a1_norm().unwrap();
        assert!(m.k < 1.0);
        assert!(a1 <= m.k + 1e-10, "case {index}: ‖A1‖={a1} k={}", m.k);
    }
}

#[test]
fn derivative_block_structure() {
    let mut rng = sample_rng(84, 0);
    let d = random_point(&mut rng, 0);
    let m = build_model(&d, 0.35).unwrap();
    let x = random_tangent(&mut rng, &d);
    let qx = TangentVector::project(&d, m.q(x.matrix()));
    let out = m.apply(&qx).unwrap();
    let upper = TangentVector::project(&d, m.q(out.matrix()));
    let lower = out.matrix() - upper.matrix();
    assert!(upper.matrix().dist(&TangentVector::project(&d, m.h1.hadamard(qx.matrix())).into_matrix()) <= 1e-12);
    assert!(lower.dist(&TangentVector::project(&d, m.h2.hadamard(qx.matrix())).into_matrix()) <= 1e-12);
    assert!(upper.norm() <= m.k * qx.norm() + 1e-12);
}

#[test]
fn stable_projection_algebra() {
    for index in 0..30 {
        let mut rng = sample_rng(85, index);
        let d = random_point(&mut rng, index as usize);
        let lambda = rng.random_range(0.05..0.95);
        let m = build_model(&d, lambda).unwrap();
        let p = m.stable_projection_operator();
        let dd = m.derivative_operator();
        let scale = p.frobenius_norm().max(1.0);
        assert!((&p * &p).dist(&p) <= 1e-10 * scale, "P² ≠ P in case {index}");
        assert!((&p * &dd).dist(&(&dd * &p)) <= 1e-9 * scale * dd.frobenius_norm().max(1.0), "case {index}");
        if d.equal_moduli() {
            assert!(m.g.max_abs() <= 1e-12);
            assert!(p.dist(&m.q_operator()) <= 1e-12);
        }
    }
}

#[test]
fn k_is_invariant_under_permutation_and_rotation() {
    for index in 0..12 {
        let mut rng = sample_rng(86, index);
        let d = random_point(&mut rng, index as usize);
        let lambda = rng.random_range(0.05..0.95);
        let k = k_constant(&d, lambda).unwrap();
        let mut rev: Vec<Complex64> = d.entries().to_vec();
        rev.reverse();
        let rot = Complex64::from_polar(1.0, rng.random_range(0.0..TAU));
        let spun: Vec<Complex64> = d.entries().iter().map(|z| z * rot).collect();
        assert!((k_constant(&DiagonalPoint::new(rev).unwrap(), lambda).unwrap() - k).abs() <= 1e-12);
        assert!((k_constant(&DiagonalPoint::new(spun).unwrap(), lambda).unwrap() - k).abs() <= 1e-9);
    }
}

#[test]
fn reflection_point_kills_the_transverse_part() {
    let d = DiagonalPoint::from_polar(&[1.0, 1.0], &[0.0, PI]).unwrap();
    let m = build_model(&d, 0.5).unwrap();
    let x = random_tangent(&mut sample_rng(87, 0), &d);
    let qx = TangentVector::project(&d, m.q(x.matrix()));
    let out = m.apply(&qx).unwrap();
    assert!(m.q(out.matrix()).frobenius_norm() <= 1e-14);
    assert_eq!(stable_projection_block(&d, 0.5).unwrap().max_abs(), 0.0);
}
