//! File formats: the whitespace matrix text format and the JSON encoding of
//! exterior points.
//!
//! Matrix text: a header line `m n`, then `m` lines of `n` whitespace
//! separated rationals written as `p/q` or plain integers.
//!
//! Exterior point JSON: `{"m": .., "n": .., "t": .., "entries": [[I, J,
//! "p/q"], ...]}` listing only nonzero coordinates, `I` and `J` as 1-based
//! index arrays in lexicographic position order.

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use exteria_core::comb::combinations;
use exteria_core::{DenseMatrix, ExactScalar, ExteriorPoint};

pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| anyhow!("empty matrix file"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|w| w.parse::<usize>().context("matrix header must be `m n`"))
        .collect::<Result<_>>()?;
    if dims.len() != 2 {
        bail!("matrix header must be `m n`, got {header:?}");
    }
    let (m, n) = (dims[0], dims[1]);
    let mut entries = Vec::with_capacity(m * n);
    for i in 0..m {
        let line = lines.next().ok_or_else(|| anyhow!("missing matrix row {}", i + 1))?;
        let row: Vec<ExactScalar> = line
            .split_whitespace()
            .map(|w| w.parse::<ExactScalar>().map_err(|e| anyhow!(e)))
            .collect::<Result<_>>()?;
        if row.len() != n {
            bail!("row {} has {} entries, expected {n}", i + 1, row.len());
        }
        entries.extend(row);
    }
    if lines.next().is_some() {
        bail!("trailing content after {m} matrix rows");
    }
    let mut k = entries.into_iter();
    Ok(DenseMatrix::from_fn(m, n, |_, _| k.next().expect("counted")))
}

pub fn read_matrix(path: &str) -> Result<DenseMatrix> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading matrix file {path}"))?;
    parse_matrix(&text).with_context(|| format!("parsing matrix file {path}"))
}

pub fn format_matrix(m: &DenseMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn point_to_json(x: &ExteriorPoint) -> Result<Value> {
    let rows = combinations(x.m(), x.t()).map_err(|e| anyhow!(e))?;
    let cols = combinations(x.n(), x.t()).map_err(|e| anyhow!(e))?;
    let mut entries = Vec::new();
    for (ri, i) in rows.iter().enumerate() {
        for (ci, j) in cols.iter().enumerate() {
            let v = x.coords().get(ri, ci);
            if !v.is_zero() {
                entries.push(json!([i.indices(), j.indices(), v.to_string()]));
            }
        }
    }
    Ok(json!({
        "m": x.m(),
        "n": x.n(),
        "t": x.t(),
        "entries": entries,
    }))
}

pub fn point_from_json(v: &Value) -> Result<ExteriorPoint> {
    let get_dim = |key: &str| -> Result<usize> {
        v.get(key)
            .and_then(Value::as_u64)
            .map(|x| x as usize)
            .ok_or_else(|| anyhow!("missing numeric field {key:?}"))
    };
    let (m, n, t) = (get_dim("m")?, get_dim("n")?, get_dim("t")?);
    let mut x = ExteriorPoint::zero(m, n, t).map_err(|e| anyhow!(e))?;
    let entries = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("missing entries array"))?;
    for e in entries {
        let triple = e.as_array().filter(|a| a.len() == 3).ok_or_else(|| {
            anyhow!("entries must be [I, J, value] triples")
        })?;
        let tuple = |v: &Value| -> Result<Vec<usize>> {
            v.as_array()
                .ok_or_else(|| anyhow!("index tuple must be an array"))?
                .iter()
                .map(|x| {
                    x.as_u64().map(|u| u as usize).ok_or_else(|| anyhow!("bad index"))
                })
                .collect()
        };
        let i = exteria_core::Combination::new(tuple(&triple[0])?, m).map_err(|e| anyhow!(e))?;
        let j = exteria_core::Combination::new(tuple(&triple[1])?, n).map_err(|e| anyhow!(e))?;
        if i.len() != t || j.len() != t {
            bail!("index tuples must have length t = {t}");
        }
        let raw = triple[2].as_str().ok_or_else(|| anyhow!("value must be a string"))?;
        let value: ExactScalar = raw.parse().map_err(|e: String| anyhow!(e))?;
        x.set_coord_at(i.position(), j.position(), value);
    }
    Ok(x)
}

pub fn read_point(path: &str) -> Result<ExteriorPoint> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading point file {path}"))?;
    let v: Value = serde_json::from_str(&text).context("point file is not JSON")?;
    point_from_json(&v)
}
