//! JSON matrix files.
//!
//! ```json
//! { "dim": 2, "entries": [[[3.0, 0.0], [0.0, 0.0]], [[-2.0, 0.0], [1.0, 0.0]]], "label": "example" }
//! ```
//!
//! `entries` is either dense (rows of `[re, im]` pairs) or a list of
//! `[row, col, re, im]` records with unlisted entries zero. `label` and
//! `seed` are optional. Files are always written dense, and doubles use the
//! shortest representation that parses back to the same bits.

use std::path::Path;

use aluthge::{CMatrix, Complex64};
use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFile {
    pub matrix: CMatrix,
    pub label: Option<String>,
    pub seed: Option<u64>,
}

#[derive(Serialize)]
struct DenseFile<'a> {
    dim: usize,
    entries: Vec<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

fn number(v: &Value, at: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| bad(format!("{at}: expected a number, found {v}")))
}

fn pair(v: &Value, at: &str) -> Result<Complex64> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(Complex64::new(number(re, at)?, number(im, at)?)),
        _ => Err(bad(format!("{at}: expected [re, im], found {v}"))),
    }
}

fn index(v: &Value, dim: usize, at: &str) -> Result<usize> {
    let i = v.as_u64().ok_or_else(|| bad(format!("{at}: expected a non-negative integer index, found {v}")))?;
    if i as usize >= dim {
        return Err(bad(format!("{at}: index {i} out of range for dimension {dim}")));
    }
    Ok(i as usize)
}

fn dense(rows: &[Value], dim: usize) -> Result<Vec<Complex64>> {
    if rows.len() != dim {
        return Err(bad(format!("entries: expected {dim} rows, found {}", rows.len())));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| bad(format!("entries[{i}]: expected a row array, found {row}")))?;
        if row.len() != dim {
            return Err(bad(format!("entries[{i}]: expected {dim} entries, found {}", row.len())));
        }
        for (j, z) in row.iter().enumerate() {
            data.push(pair(z, &format!("entries[{i}][{j}]"))?);
        }
    }
    Ok(data)
}

fn records(recs: &[Value], dim: usize) -> Result<Vec<Complex64>> {
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut seen = vec![false; dim * dim];
    for (k, rec) in recs.iter().enumerate() {
        let at = format!("entries[{k}]");
        let fields = match rec.as_array().map(Vec::as_slice) {
            Some(f @ [_, _, _, _]) => f,
            _ => return Err(bad(format!("{at}: expected [row, col, re, im], found {rec}"))),
        };
        let i = index(&fields[0], dim, &at)?;
        let j = index(&fields[1], dim, &at)?;
        if std::mem::replace(&mut seen[i * dim + j], true) {
            return Err(bad(format!("{at}: duplicate record for ({i}, {j})")));
        }
        data[i * dim + j] = Complex64::new(number(&fields[2], &at)?, number(&fields[3], &at)?);
    }
    Ok(data)
}

impl MatrixFile {
    pub fn new(matrix: CMatrix) -> Self {
        Self { matrix, label: None, seed: None }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let root: Value = serde_json::from_str(text)
            .map_err(|e| bad(format!("invalid JSON at line {} column {}: {e}", e.line(), e.column())))?;
        let obj = root.as_object().ok_or_else(|| bad("matrix file must be a JSON object"))?;
        let dim = obj
            .get("dim")
            .and_then(Value::as_u64)
            .filter(|&d| d > 0)
            .ok_or_else(|| bad("`dim` must be a positive integer"))? as usize;
        let entries = obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("`entries` must be an array"))?;
        let is_dense = entries.first().and_then(Value::as_array).and_then(|r| r.first()).is_some_and(Value::is_array);
        let data = if is_dense { dense(entries, dim)? } else { records(entries, dim)? };
        let label = match obj.get("label") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(v) => return Err(bad(format!("`label` must be a string, found {v}"))),
        };
        let seed = match obj.get("seed") {
            None | Some(Value::Null) => None,
            Some(v) => Some(v.as_u64().ok_or_else(|| bad(format!("`seed` must be a non-negative integer, found {v}")))?),
        };
        let matrix = CMatrix::new(dim, data).map_err(|e| bad(e.to_string()))?;
        Ok(Self { matrix, label, seed })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Fails on non-finite entries, which JSON cannot carry.
    pub fn to_json(&self) -> Result<String> {
        if !self.matrix.is_finite() {
            return Err(CliError::Serialize("matrix has non-finite entries".into()));
        }
        let n = self.matrix.dim();
        let file = DenseFile {
            dim: n,
            entries: (0..n).map(|i| self.matrix.row(i).iter().map(|z| [z.re, z.im]).collect()).collect(),
            label: self.label.as_deref(),
            seed: self.seed,
        };
        crate::report::to_json(&file)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| CliError::io(path, e))
    }
}
