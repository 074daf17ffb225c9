//! Report output: JSON documents, CSV traces and the human summary.

use std::io::Write;
use std::path::{Path, PathBuf};

use aluthge::linalg::normality_defect;
use aluthge::IterationTrace;
use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, Result};

/// Pretty JSON with object fields one per line. Arrays holding only numbers,
/// strings or arrays of those stay on one line, so a matrix prints one row
/// per line.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut out = String::new();
    render(&serde_json::to_value(value)?, 0, &mut out)?;
    out.push('\n');
    Ok(out)
}

fn flat(v: &Value, depth: usize) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(items) => depth < 2 && items.iter().all(|x| flat(x, depth + 1)),
        _ => true,
    }
}

fn render(v: &Value, indent: usize, out: &mut String) -> Result<()> {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (k, (key, val)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(key)?);
                out.push_str(": ");
                render(val, indent + 1, out)?;
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if !items.is_empty() && !flat(v, 0) => {
            out.push_str("[\n");
            for (k, val) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                render(val, indent + 1, out)?;
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(items) => {
            out.push('[');
            for (k, val) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                render(val, indent, out)?;
            }
            out.push(']');
        }
        other => out.push_str(&serde_json::to_string(other)?),
    }
    Ok(())
}

/// Writes `text` to `out`, or to stdout when `out` is `None`.
pub fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

/// Summary lines go to stdout when the report went to a file, otherwise to
/// stderr so stdout stays machine-readable.
pub fn summary(out: Option<&Path>, lines: &[String]) {
    for l in lines {
        if out.is_some() {
            println!("{l}");
        } else {
            eprintln!("{l}");
        }
    }
}

/// `a/b.json` → `a/b.<suffix>`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

#[derive(Serialize)]
struct TraceRow {
    n: usize,
    step_norm: Option<f64>,
    normality_defect: f64,
    dist_to_limit: f64,
}

/// One block per trace, each headed by `# lambda=<λ>` and a column header.
/// Row `n` describes iterate `n`; `step_norm` is `‖Δⁿ − Δⁿ⁻¹‖₂` and empty at
/// `n = 0`. `dist_to_limit` is measured against the final iterate.
pub fn traces_csv(traces: &[IterationTrace]) -> Result<String> {
    let mut buf: Vec<u8> = Vec::new();
    for trace in traces {
        writeln!(buf, "# lambda={}", trace.lambda).expect("write to Vec");
        let mut w = csv::Writer::from_writer(&mut buf);
        let last = trace.last();
        for (n, it) in trace.iterates.iter().enumerate() {
            w.serialize(TraceRow {
                n,
                step_norm: n.checked_sub(1).map(|k| trace.step_norms[k]),
                normality_defect: normality_defect(it),
                dist_to_limit: it.dist(last),
            })
            .map_err(|e| CliError::Serialize(e.to_string()))?;
        }
        w.flush().map_err(|e| CliError::io("<csv>", e))?;
    }
    String::from_utf8(buf).map_err(|e| CliError::Serialize(e.to_string()))
}
