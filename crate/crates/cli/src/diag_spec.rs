//! Diagonal specifications `d = (d_1, …, d_r)`.
//!
//! Accepted forms:
//! - a comma-separated list of tokens, each a real (`3`), a complex number
//!   (`1+2i`, `-0.5i`) or polar `modulus@phase` with the phase in radians;
//! - a JSON array whose items are numbers, `[re, im]` pairs or
//!   `{"modulus": m, "phase": θ}` objects;
//! - the presets `cube-roots` and `roots-of-unity:N`.

use std::f64::consts::TAU;

use aluthge::Complex64;
use serde_json::Value;

use crate::error::{CliError, Result};

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

fn roots_of_unity(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64)).collect()
}

fn token(t: &str, k: usize) -> Result<Complex64> {
    let t = t.trim();
    if let Some((m, th)) = t.split_once('@') {
        let m: f64 = m.trim().parse().map_err(|_| bad(format!("d[{k}]: bad modulus in `{t}`")))?;
        let th: f64 = th.trim().parse().map_err(|_| bad(format!("d[{k}]: bad phase in `{t}`")))?;
        return Ok(Complex64::from_polar(m, th));
    }
    t.parse::<Complex64>().map_err(|_| bad(format!("d[{k}]: cannot read `{t}` as a number")))
}

fn json_item(v: &Value, k: usize) -> Result<Complex64> {
    let num = |x: &Value| x.as_f64().ok_or_else(|| bad(format!("d[{k}]: expected a number, found {x}")));
    match v {
        Value::Number(_) => Ok(Complex64::new(num(v)?, 0.0)),
        Value::Array(p) if p.len() == 2 => Ok(Complex64::new(num(&p[0])?, num(&p[1])?)),
        Value::Object(o) => match (o.get("modulus"), o.get("phase")) {
            (Some(m), Some(th)) => Ok(Complex64::from_polar(num(m)?, num(th)?)),
            _ => Err(bad(format!("d[{k}]: polar entries need `modulus` and `phase`"))),
        },
        _ => Err(bad(format!("d[{k}]: expected a number, [re, im] or {{modulus, phase}}, found {v}"))),
    }
}

pub fn parse_diag(spec: &str) -> Result<Vec<Complex64>> {
    let s = spec.trim();
    let d = if s == "cube-roots" {
        roots_of_unity(3)
    } else if let Some(n) = s.strip_prefix("roots-of-unity:") {
        let n: usize = n.trim().parse().ok().filter(|&n| n >= 1).ok_or_else(|| bad(format!("bad root count in `{s}`")))?;
        roots_of_unity(n)
    } else if s.starts_with('[') {
        let v: Value = serde_json::from_str(s).map_err(|e| bad(format!("diagonal JSON: {e}")))?;
        let items = v.as_array().ok_or_else(|| bad("diagonal JSON must be an array"))?;
        items.iter().enumerate().map(|(k, x)| json_item(x, k)).collect::<Result<_>>()?
    } else {
        s.split(',').enumerate().map(|(k, t)| token(t, k)).collect::<Result<_>>()?
    };
    if d.is_empty() {
        return Err(bad("empty diagonal"));
    }
    if let Some(k) = d.iter().position(|z| !z.is_finite()) {
        return Err(bad(format!("d[{k}] is not finite")));
    }
    Ok(d)
}
