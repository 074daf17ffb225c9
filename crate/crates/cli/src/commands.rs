use std::path::Path;

use aluthge::experiments::{
    self, nonconstancy_witness, permutation_example, probe_sample, rate_case, rate_fit,
    reflection_oracle, refine_limit, triangular_example, two_eigenvalue_constancy, ConjectureReport, RatesReport,
    Settings, TwoEigenvalueReport,
};
use aluthge::linalg::{char_poly, is_diagonalizable, normality_defect, DEFAULT_CLUSTER_TOL};
use aluthge::tangent::{build_model, DerivativeModel, DiagonalPoint};
use aluthge::transform::{check_limit, LimitFlags};
use aluthge::{aluthge, iterate, CMatrix, Complex64, IterationTrace, LambdaScan, StopPolicy, StopReason};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::diag_spec::parse_diag;
use crate::error::{CliError, Result};
use crate::matrix_file::MatrixFile;
use crate::report::{sibling, summary, to_json, traces_csv, write_output};

pub const EXPERIMENTS: [&str; 7] = ["section44", "reflection", "permutation", "con-dos", "witness", "conjecture", "rates"];

fn json_only(cfg: &RunConfig, what: &str) -> Result<()> {
    if cfg.format == Format::Csv {
        return Err(CliError::Parse(format!("{what} only writes JSON; CSV is for limit traces")));
    }
    Ok(())
}

#[derive(Serialize)]
struct TransformSidecar {
    lambda: f64,
    char_poly_before: Vec<Complex64>,
    char_poly_after: Vec<Complex64>,
    /// `max_k |c_k(after) − c_k(before)| / max(1, ‖T‖₂^k)`.
    char_poly_max_deviation: f64,
    frobenius_norm_before: f64,
    frobenius_norm_after: f64,
    normality_defect_before: f64,
    normality_defect_after: f64,
}

pub fn transform(input: &Path, cfg: &RunConfig) -> Result<()> {
    json_only(cfg, "transform")?;
    let file = MatrixFile::read(input)?;
    let lambda = cfg.lambda_or(0.5)?;
    let t = &file.matrix;
    let out = aluthge(t, lambda)?;
    let (before, after) = (char_poly(t), char_poly(&out));
    let scale = t.frobenius_norm();
    let sidecar = TransformSidecar {
        lambda,
        char_poly_max_deviation: before
            .iter()
            .zip(&after)
            .enumerate()
            .map(|(k, (a, b))| (a - b).norm() / scale.powi(k as i32).max(1.0))
            .fold(0.0, f64::max),
        char_poly_before: before,
        char_poly_after: after,
        frobenius_norm_before: scale,
        frobenius_norm_after: out.frobenius_norm(),
        normality_defect_before: normality_defect(t),
        normality_defect_after: normality_defect(&out),
    };
    let result = MatrixFile { matrix: out, label: file.label.clone(), seed: file.seed };
    match &cfg.out {
        Some(path) => {
            result.write(path)?;
            let side = sibling(path, "sidecar.json");
            write_output(Some(&side), &to_json(&sidecar)?)?;
            println!("wrote {} and {}", path.display(), side.display());
        }
        None => {
            let matrix: serde_json::Value = serde_json::from_str(&result.to_json()?)?;
            write_output(None, &to_json(&serde_json::json!({ "matrix": matrix, "sidecar": sidecar }))?)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct LimitEntry {
    lambda: f64,
    status: StopReason,
    n_steps: usize,
    limit: CMatrix,
    final_step_norm: Option<f64>,
    normality_defect: f64,
    flags: Option<LimitFlags>,
    rho_hat: Option<f64>,
    r_squared: Option<f64>,
}

#[derive(Serialize)]
struct LimitReport<'a> {
    label: Option<&'a str>,
    dim: usize,
    policy: StopPolicy,
    diagonalizable: bool,
    lambdas: &'a [f64],
    dispersion: f64,
    all_converged: bool,
    entries: Vec<LimitEntry>,
}

fn limit_entry(t: &CMatrix, trace: &IterationTrace, policy: &StopPolicy) -> Result<LimitEntry> {
    let last = trace.last();
    let (flags, fit) = if trace.converged() {
        let refined = refine_limit(trace, policy.max_iters)?;
        (Some(check_limit(t, last, policy)?), rate_fit(trace, &refined).ok())
    } else {
        (None, None)
    };
    Ok(LimitEntry {
        lambda: trace.lambda,
        status: trace.stop_reason,
        n_steps: trace.n_steps,
        limit: last.clone(),
        final_step_norm: trace.step_norms.last().copied(),
        normality_defect: normality_defect(last),
        flags,
        rho_hat: fit.map(|f| f.rho_hat),
        r_squared: fit.map(|f| f.r_squared),
    })
}

pub fn limit(input: &Path, cfg: &RunConfig) -> Result<()> {
    let file = MatrixFile::read(input)?;
    let t = &file.matrix;
    let lambdas = cfg.lambdas_or(&aluthge::transform::default_grid());
    let policy = cfg.policy_for(t);
    let traces: Vec<IterationTrace> = lambdas.par_iter().map(|&l| iterate(t, l, &policy)).collect::<aluthge::Result<_>>()?;
    let entries: Vec<LimitEntry> = traces.par_iter().map(|tr| limit_entry(t, tr, &policy)).collect::<Result<_>>()?;
    let csv = match cfg.format {
        Format::Csv => Some(traces_csv(&traces)?),
        Format::Json => None,
    };
    let scan = LambdaScan::from_traces(traces, is_diagonalizable(t, DEFAULT_CLUSTER_TOL)?);
    let report = LimitReport {
        label: file.label.as_deref(),
        dim: t.dim(),
        policy,
        diagonalizable: scan.diagonalizable,
        lambdas: &lambdas,
        dispersion: scan.dispersion,
        all_converged: scan.all_converged(),
        entries,
    };
    let json = to_json(&report)?;
    let out = cfg.out.as_deref();
    match csv {
        Some(text) => {
            write_output(out, &text)?;
            if let Some(p) = out {
                write_output(Some(&sibling(p, "report.json")), &json)?;
            }
        }
        None => write_output(out, &json)?,
    }
    let mut lines: Vec<String> = report
        .entries
        .iter()
        .map(|e| format!("lambda={:<6} {:?} after {} steps, defect {:.2e}", e.lambda, e.status, e.n_steps, e.normality_defect))
        .collect();
    lines.push(format!("dispersion {:.6e}", report.dispersion));
    summary(out, &lines);
    if !report.all_converged {
        let failed: Vec<String> =
            report.entries.iter().filter(|e| e.status != StopReason::Converged).map(|e| e.lambda.to_string()).collect();
        return Err(CliError::NotConverged(format!(
            "no convergence at lambda = {} (partial results written)",
            failed.join(", ")
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct ModelDump<'a> {
    #[serde(flatten)]
    model: &'a DerivativeModel,
    /// Norm of the compressed derivative `Q_D dΔ Q_D`.
    a1_norm: f64,
}

pub fn model(d: &str, cfg: &RunConfig) -> Result<()> {
    json_only(cfg, "model")?;
    let d = DiagonalPoint::new(parse_diag(d)?)?;
    let lambda = cfg.lambda_or(0.5)?;
    let model = build_model(&d, lambda)?;
    let dump = ModelDump { a1_norm: model.a1_norm()?, model: &model };
    write_output(cfg.out.as_deref(), &to_json(&dump)?)?;
    summary(cfg.out.as_deref(), &[format!("k = {:.6}, |A1| = {:.6}", model.k, dump.a1_norm)]);
    Ok(())
}

/// Experiment-specific options.
#[derive(Clone, Debug, Default)]
pub struct ExperimentArgs {
    pub d: Option<String>,
    pub dim: Option<usize>,
    pub abc: Option<Vec<f64>>,
    pub blocks: Option<Vec<usize>>,
    pub threshold: Option<f64>,
    pub eps: Option<f64>,
}

#[derive(Serialize)]
struct Envelope<'a, R: Serialize> {
    experiment: &'a str,
    seed: u64,
    settings: Settings,
    #[serde(skip_serializing_if = "Option::is_none")]
    pass: Option<bool>,
    report: R,
}

/// Output of one experiment: the JSON report, the summary and the verdict
/// (`None` for evidence-only runs).
pub struct ExperimentOutput {
    pub json: String,
    pub summary: Vec<String>,
    pub pass: Option<bool>,
}

fn envelope<R: Serialize>(name: &str, cfg: &RunConfig, pass: Option<bool>, report: R, summary: Vec<String>) -> Result<ExperimentOutput> {
    let json = to_json(&Envelope { experiment: name, seed: cfg.seed, settings: cfg.settings(), pass, report })?;
    Ok(ExperimentOutput { json, summary, pass })
}

fn two_values(d: &[Complex64]) -> Result<(Complex64, Complex64)> {
    match d {
        [a, b] => Ok((*a, *b)),
        _ => Err(CliError::Parse(format!("con-dos takes exactly two eigenvalues, got {}", d.len()))),
    }
}

#[derive(Serialize)]
struct ReflectionSuite {
    dim: usize,
    lambdas: Vec<f64>,
    cases: Vec<experiments::ReflectionReport>,
    max_relative_error: f64,
}

#[derive(Serialize)]
struct ConstancySuite {
    d1: Complex64,
    d2: Complex64,
    blocks: [usize; 2],
    lambdas: Vec<f64>,
    samples: Vec<TwoEigenvalueReport>,
    max_dispersion: f64,
}

/// Runs experiment `name` and returns its report without writing anything.
pub fn run_experiment(name: &str, extra: &ExperimentArgs, cfg: &RunConfig) -> Result<ExperimentOutput> {
    json_only(cfg, "experiment")?;
    let settings = cfg.settings();
    let grid9 = aluthge::transform::default_grid();
    match name {
        "section44" | "triangular" => {
            let rep = triangular_example(&settings)?;
            let mut lines: Vec<String> = rep
                .entries
                .iter()
                .map(|e| {
                    format!("lambda={} max |L - published| = {:.3e} ({} steps) {}", e.lambda, e.max_abs_deviation, e.n_steps, verdict(e.pass))
                })
                .collect();
            lines.push(format!("dispersion {:.5} {}", rep.dispersion, verdict(rep.pass)));
            envelope("section44", cfg, Some(rep.pass), &rep, lines)
        }
        "reflection" => {
            let dim = extra.dim.unwrap_or(3);
            let lambdas = cfg.lambdas_or(&[0.1, 0.25, 0.5, 0.75, 0.9]);
            let samples = cfg.samples.unwrap_or(10);
            let jobs: Vec<(u64, f64)> =
                (0..samples as u64).flat_map(|i| lambdas.iter().map(move |&l| (cfg.seed.wrapping_add(i), l))).collect();
            let cases = jobs
                .par_iter()
                .map(|&(seed, l)| reflection_oracle(seed, dim, l, 50, &settings))
                .collect::<aluthge::Result<Vec<_>>>()?;
            let pass = cases.iter().all(|c| c.pass);
            let max_rel = cases.iter().map(|c| c.max_relative_error).fold(0.0, f64::max);
            let mut lines = vec![format!("{} cases, max relative closed-form error {:.3e}", cases.len(), max_rel)];
            for c in cases.iter().filter(|c| (c.lambda - 0.5).abs() < 1e-15) {
                lines.push(format!("seed {} lambda=0.5 one-step error {:.3e}", c.seed, c.one_step_error));
            }
            lines.push(verdict(pass).to_string());
            envelope("reflection", cfg, Some(pass), ReflectionSuite { dim, lambdas, cases, max_relative_error: max_rel }, lines)
        }
        "permutation" => {
            let abc = extra.abc.clone().unwrap_or_else(|| vec![2.0, 3.0, 1.0 / 6.0]);
            let [a, b, c] = abc[..] else {
                return Err(CliError::Parse("--abc takes three values".into()));
            };
            let lambdas = cfg.lambdas_or(&[0.1, 0.3, 0.5, 0.7, 0.9]);
            let rep = permutation_example(a, b, c, &lambdas, &settings)?;
            let lines = vec![
                format!("max |limit - P| = {:.3e}, dispersion {:.3e}", rep.max_limit_error, rep.dispersion),
                format!("form error {:.3e}, det error {:.3e} {}", rep.max_form_error, rep.max_det_error, verdict(rep.pass)),
            ];
            envelope("permutation", cfg, Some(rep.pass), &rep, lines)
        }
        "con-dos" => {
            let (d1, d2) = two_values(&parse_diag(extra.d.as_deref().unwrap_or("2,-2"))?)?;
            let blocks = extra.blocks.clone().unwrap_or_else(|| vec![1, 1]);
            let [n, k] = blocks[..] else {
                return Err(CliError::Parse("--blocks takes two multiplicities".into()));
            };
            let lambdas = cfg.lambdas_or(&grid9);
            let count = cfg.samples.unwrap_or(20);
            let samples = (0..count as u64)
                .into_par_iter()
                .map(|i| two_eigenvalue_constancy(d1, d2, n, k, cfg.seed.wrapping_add(i), &lambdas, &settings))
                .collect::<aluthge::Result<Vec<_>>>()?;
            let pass = samples.iter().all(|s| s.pass);
            let max_dispersion = samples.iter().map(|s| s.scan.dispersion).fold(0.0, f64::max);
            let lines = vec![format!("{count} samples, max dispersion {max_dispersion:.3e} {}", verdict(pass))];
            let suite = ConstancySuite { d1, d2, blocks: [n, k], lambdas, samples, max_dispersion };
            envelope("con-dos", cfg, Some(pass), suite, lines)
        }
        "witness" => {
            let d = parse_diag(extra.d.as_deref().unwrap_or("3,1"))?;
            let threshold = extra.threshold.unwrap_or(0.1);
            let rep = nonconstancy_witness(&d, cfg.seed, threshold, cfg.samples.unwrap_or(10), &settings)?;
            let lines = vec![format!(
                "{:?} after {} samples, max dispersion {:.4}",
                rep.status, rep.samples_tried, rep.max_dispersion
            )];
            envelope("witness", cfg, None, &rep, lines)
        }
        "conjecture" => {
            let d = parse_diag(extra.d.as_deref().unwrap_or("cube-roots"))?;
            let lambdas = cfg.lambdas_or(&grid9);
            let rep = conjecture_report(&d, cfg.samples.unwrap_or(50), cfg.seed, &lambdas, &settings)?;
            let mut lines = vec!["sample  dispersion  steps  converged".to_string()];
            lines.extend(
                rep.samples.iter().map(|s| format!("{:>6}  {:>10.3e}  {:>5}  {}", s.index, s.dispersion, s.max_steps, s.converged)),
            );
            match rep.argmax_index {
                Some(i) => lines.push(format!("max dispersion {:.4e} at sample {i}", rep.max_dispersion)),
                None => lines.push("no converged samples".into()),
            }
            envelope("conjecture", cfg, None, &rep, lines)
        }
        "rates" => {
            let eps = extra.eps.unwrap_or(1e-3);
            let count = cfg.samples.unwrap_or(30);
            let cases = (0..count)
                .into_par_iter()
                .map(|i| rate_case(cfg.seed, i, eps, &settings))
                .collect::<aluthge::Result<Vec<_>>>()?;
            let rep = RatesReport::assemble(cfg.seed, eps, cases);
            let lines = vec![format!("{count} cases, max(rho_hat - k) = {:.4} {}", rep.max_excess, verdict(rep.pass))];
            envelope("rates", cfg, Some(rep.pass), &rep, lines)
        }
        other => Err(CliError::UnknownExperiment(other.to_string())),
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn experiment(name: &str, extra: &ExperimentArgs, cfg: &RunConfig) -> Result<()> {
    let res = run_experiment(name, extra, cfg)?;
    write_output(cfg.out.as_deref(), &res.json)?;
    summary(cfg.out.as_deref(), &res.summary);
    Ok(())
}

/// [`ConjectureReport`] with samples evaluated in parallel.
fn conjecture_report(d: &[Complex64], samples: usize, seed: u64, lambdas: &[f64], settings: &Settings) -> Result<ConjectureReport> {
    let results = (0..samples)
        .into_par_iter()
        .map(|i| probe_sample(d, seed, i, lambdas, settings))
        .collect::<aluthge::Result<Vec<_>>>()?;
    Ok(ConjectureReport::assemble(d, seed, lambdas, results))
}
