//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints one line, then exits non-zero if any line failed.

use std::f64::consts::TAU;
use std::process::{Command, ExitCode};
use std::time::Instant;

use aluthge::experiments::{
    gaussian_matrix, nonconstancy_witness, orbit_element, permutation_example, random_unitary, rates_suite,
    reflection_oracle, sample_rng, triangular_example, two_eigenvalue_constancy, Settings, WitnessStatus,
    DEFAULT_COND_BOUND,
};
use aluthge::linalg::{char_poly_close, eigenvalues, multiset_distance, normality_defect, CMatrix};
use aluthge::tangent::{build_model, derivative_apply, derivative_fd, DiagonalPoint, TangentVector};
use aluthge::transform::{aluthge, default_grid, iterate, limit};
use aluthge::{Complex64, StopPolicy};
use rand::Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_spectrum(seed: u64, r: usize) -> Vec<Complex64> {
    let mut rng = sample_rng(seed, u64::MAX);
    (0..r).map(|_| Complex64::from_polar(rng.random_range(0.5..3.0), rng.random_range(0.0..TAU))).collect()
}

fn diagonalizable(seed: u64, r: usize) -> CMatrix {
    orbit_element(seed, 0, &random_spectrum(seed, r), DEFAULT_COND_BOUND).unwrap().0
}

fn section44() -> Outcome {
    let settings = Settings::default();
    let start = Instant::now();
    let report = triangular_example(&settings).map_err(|e| e.to_string())?;
    let total = start.elapsed().as_secs_f64();
    // time each λ on its own as well
    let t = CMatrix::from_real_rows(&[[3.0, 0.0], [-2.0, 1.0]]);
    let mut slowest: f64 = 0.0;
    for lambda in [0.3, 0.7] {
        let s = Instant::now();
        limit(&t, lambda, &StopPolicy::for_matrix(&t)).map_err(|e| e.to_string())?;
        slowest = slowest.max(s.elapsed().as_secs_f64());
    }
    let devs: Vec<String> = report.entries.iter().map(|e| format!("{:.1e}", e.max_abs_deviation)).collect();
    let ok = report.entries.iter().all(|e| e.max_abs_deviation <= 1e-3) && slowest < 1.0;
    check(ok, format!("deviations [{}] (atol 1e-3), slowest λ {slowest:.3}s, both {total:.3}s", devs.join(", ")))
}

fn invariance() -> Outcome {
    let lambdas = [0.1, 0.3, 0.5, 0.7, 0.9];
    let (mut poly, mut norm, mut equi, mut sums) = (0, 0, 0.0_f64, 0.0_f64);
    for seed in 0..200u64 {
        let r = 2 + (seed % 4) as usize;
        let t = diagonalizable(seed, r);
        let v = random_unitary(&mut sample_rng(seed, 1), r).unwrap();
        let other = diagonalizable(seed + 10_000, 2 + (seed % 2) as usize);
        let scale = t.frobenius_norm().max(1.0);
        for lambda in lambdas {
            let a = aluthge(&t, lambda).map_err(|e| e.to_string())?;
            poly += usize::from(!char_poly_close(&t, &a, 1e-8));
            norm += usize::from(a.frobenius_norm() > t.frobenius_norm() * (1.0 + 1e-12));
            let rotated = aluthge(&t.conjugate_by(&v), lambda).unwrap();
            equi = equi.max(rotated.dist(&a.conjugate_by(&v)) / scale);
            let joint = aluthge(&t.direct_sum(&other), lambda).unwrap();
            let split = a.direct_sum(&aluthge(&other, lambda).unwrap());
            sums = sums.max(joint.dist(&split) / (t.frobenius_norm() + other.frobenius_norm()).max(1.0));
        }
    }
    check(
        poly == 0 && norm == 0 && equi <= 1e-11 && sums <= 1e-11,
        format!(
            "1000 cases: char-poly failures {poly}, norm failures {norm}, equivariance {equi:.1e}, direct sums {sums:.1e}"
        ),
    )
}

fn limit_contract() -> Outcome {
    let (mut converged, mut total) = (0, 0);
    let (mut worst_defect, mut worst_spec) = (0.0_f64, 0.0_f64);
    for seed in 0..40u64 {
        let r = 2 + (seed % 4) as usize;
        let t = diagonalizable(seed + 500, r);
        let policy = StopPolicy::for_matrix(&t);
        let eig = eigenvalues(&t).unwrap();
        for lambda in [0.1, 0.5, 0.9] {
            total += 1;
            let trace = iterate(&t, lambda, &policy).map_err(|e| e.to_string())?;
            if !trace.converged() {
                continue;
            }
            converged += 1;
            let l = trace.last();
            worst_defect = worst_defect.max(normality_defect(l) / t.frobenius_norm());
            worst_spec = worst_spec.max(multiset_distance(&eig, &eigenvalues(l).unwrap()));
        }
    }
    check(
        converged > 0 && worst_defect <= 1e-9 && worst_spec <= 1e-6,
        format!("{converged}/{total} converged, max defect/‖T‖ {worst_defect:.1e}, max eigenvalue drift {worst_spec:.1e}"),
    )
}

/// Generic, mixed moduli with a repeated modulus, and equal moduli with
/// distinct phases, in turn.
fn random_point(rng: &mut impl Rng, index: usize) -> DiagonalPoint {
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

fn derivative_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    for index in 0..50 {
        let mut rng = sample_rng(31, index as u64);
        let d = random_point(&mut rng, index);
        let lambda = rng.random_range(0.05..0.95);
        let x = TangentVector::project(&d, gaussian_matrix(&mut rng, d.dim()));
        let model = derivative_apply(&d, lambda, &x).map_err(|e| e.to_string())?;
        let fd = derivative_fd(&d, lambda, &x, 1e-5).map_err(|e| e.to_string())?;
        worst = worst.max(fd.matrix().dist(model.matrix()) / model.norm().max(1e-300));
    }
    check(worst <= 1e-6, format!("50 triples, max relative error {worst:.1e}"))
}

fn contraction() -> Outcome {
    let mut excess = f64::NEG_INFINITY;
    for index in 0..50 {
        let mut rng = sample_rng(32, index as u64);
        let d = random_point(&mut rng, index);
        let m = build_model(&d, rng.random_range(0.05..0.95)).map_err(|e| e.to_string())?;
        excess = excess.max(m.a1_norm().map_err(|e| e.to_string())? - m.k);
    }
    let rates = rates_suite(0, 30, 1e-3, &Settings::default()).map_err(|e| e.to_string())?;
    let fitted = rates.cases.iter().filter(|c| c.fit.is_some()).count();
    check(
        excess <= 1e-10 && rates.pass,
        format!("max(‖A1‖ − k) {excess:.1e} over 50 points; rho_hat − k max {:.4} over {fitted}/30 fits", rates.max_excess),
    )
}

fn reflections() -> Outcome {
    let settings = Settings::default();
    let (mut worst, mut one_step) = (0.0_f64, 0.0_f64);
    let mut fails = 0;
    for seed in 0..10u64 {
        for lambda in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let r = reflection_oracle(seed, 2 + (seed % 3) as usize, lambda, 50, &settings).map_err(|e| e.to_string())?;
            worst = worst.max(r.max_relative_error);
            if lambda == 0.5 {
                one_step = one_step.max(r.one_step_error / r.e.frobenius_norm());
            }
            fails += usize::from(r.max_relative_error > 1e-9);
        }
    }
    check(
        fails == 0 && one_step <= 1e-9,
        format!("50 runs, max closed-form error/‖E‖ {worst:.1e}, λ=0.5 one-step error/‖E‖ {one_step:.1e}"),
    )
}

fn constancy() -> Outcome {
    let settings = Settings::default();
    let grid = default_grid();
    let mut worst: f64 = 0.0;
    // Phase gaps stay in [π/3, 5π/3]. Nearly coincident eigenvalues make the
    // start almost non-diagonalizable and convergence slow.
    for i in 0..20u64 {
        let theta = TAU / 6.0 + (2.0 * TAU / 3.0) * i as f64 / 19.0;
        let modulus = 0.5 + 0.25 * (i % 5) as f64;
        let d1 = Complex64::from_polar(modulus, 0.1 * i as f64);
        let d2 = Complex64::from_polar(modulus, 0.1 * i as f64 + theta);
        let (n, k) = [(1, 1), (1, 2), (2, 1), (2, 2)][(i % 4) as usize];
        let rep = two_eigenvalue_constancy(d1, d2, n, k, i, &grid, &settings).map_err(|e| e.to_string())?;
        worst = worst.max(rep.scan.dispersion);
    }
    let d = [Complex64::new(3.0, 0.0), Complex64::new(1.0, 0.0)];
    let w = nonconstancy_witness(&d, 0, 0.1, 10, &settings).map_err(|e| e.to_string())?;
    let p = permutation_example(2.0, 3.0, 1.0 / 6.0, &[0.1, 0.3, 0.5, 0.7, 0.9], &settings).map_err(|e| e.to_string())?;
    check(
        worst <= 1e-6 && w.status == WitnessStatus::Found && p.max_limit_error <= 1e-8 && p.dispersion <= 1e-7,
        format!(
            "two-eigenvalue dispersion {worst:.1e}; witness {:?} after {} samples (dispersion {:.3}); permutation error {:.1e}, dispersion {:.1e}",
            w.status, w.samples_tried, w.max_dispersion, p.max_limit_error, p.dispersion
        ),
    )
}

fn projection_algebra() -> Outcome {
    let mut idem: f64 = 0.0;
    let mut comm: f64 = 0.0;
    let mut q_gap: f64 = 0.0;
    for index in 0..30 {
        let mut rng = sample_rng(33, index as u64);
        let d = random_point(&mut rng, index);
        let m = build_model(&d, rng.random_range(0.05..0.95)).map_err(|e| e.to_string())?;
        let p = m.stable_projection_operator();
        let dd = m.derivative_operator();
        idem = idem.max((&p * &p).dist(&p) / p.frobenius_norm().max(1.0));
        comm = comm.max((&p * &dd).dist(&(&dd * &p)) / (p.frobenius_norm() * dd.frobenius_norm()).max(1.0));
        if d.equal_moduli() {
            q_gap = q_gap.max(p.dist(&m.q_operator()));
        }
    }
    let d = DiagonalPoint::from_real(&[1.0, 2.0]).unwrap();
    let grid = [0.5, 0.3, 0.2, 0.1, 0.05];
    let norms: Vec<f64> = grid.iter().map(|&l| build_model(&d, l).unwrap().g.frobenius_norm()).collect();
    let increasing = norms.windows(2).all(|w| w[1] > w[0]);
    let shown: Vec<String> = grid.iter().zip(&norms).map(|(l, g)| format!("{l}:{g:.3}")).collect();
    check(
        idem <= 1e-10 && comm <= 1e-9 && q_gap <= 1e-10 && increasing,
        format!(
            "P²−P {idem:.1e}, [P, dΔ] {comm:.1e}, P−Q at equal moduli {q_gap:.1e}; ‖G‖ for d=(1,2) as λ decreases [{}] {}",
            shown.join(", "),
            if increasing { "increasing" } else { "not increasing" }
        ),
    )
}

fn run_cli(args: &[&str], threads: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_aluthge"))
        .args(args)
        .env("ALUTHGE_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}", out.status));
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 7] = [
        &["experiment", "section44", "--seed", "3"],
        &["experiment", "reflection", "--seed", "3"],
        &["experiment", "permutation", "--seed", "3"],
        &["experiment", "con-dos", "--seed", "3"],
        &["experiment", "witness", "--seed", "3"],
        &["experiment", "conjecture", "--d", "cube-roots", "--samples", "20", "--seed", "3"],
        &["experiment", "rates", "--seed", "3"],
    ];
    let mut differing = Vec::new();
    for args in runs {
        let a = run_cli(args, "1")?;
        let b = run_cli(args, "1")?;
        let c = run_cli(args, "4")?;
        if a.is_empty() || a != b || a != c {
            differing.push(args[1]);
        }
    }
    check(
        differing.is_empty(),
        if differing.is_empty() {
            "7 experiments, byte-identical across reruns and thread counts 1 and 4".into()
        } else {
            format!("reports differ for {differing:?}")
        },
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 triangular example", section44),
        ("2 invariance suite", invariance),
        ("3 limit contract", limit_contract),
        ("4 derivative oracle", derivative_oracle),
        ("5 contraction", contraction),
        ("6 reflection closed form", reflections),
        ("7 constancy dichotomy", constancy),
        ("8 projection algebra", projection_algebra),
        ("9 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
