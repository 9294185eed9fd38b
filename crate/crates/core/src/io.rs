//! Tensor files.
//!
//! Structured form:
//!
//! ```json
//! { "order": 3, "dim": 2, "entries": [ { "idx": [1, 2, 2], "val": -0.5 } ] }
//! ```
//!
//! Plain form, one entry per line, `#` starting a comment:
//!
//! ```text
//! # dim 3
//! 1 2 2 -0.5
//! ```
//!
//! In the plain form the order is the number of index columns and the
//! dimension is the largest index unless a `# dim N` line says otherwise.
//! Indices are 1-based in both forms and writers sort entries by index.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::FormatError;
use crate::tensor::Tensor;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryRecord {
    pub idx: Vec<usize>,
    pub val: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorRecord {
    pub order: usize,
    pub dim: usize,
    pub entries: Vec<EntryRecord>,
}

impl TensorRecord {
    pub fn from_tensor(t: &Tensor<f64>) -> Self {
        Self {
            order: t.order(),
            dim: t.dim(),
            entries: t
                .entries()
                .map(|(idx, v)| EntryRecord {
                    idx: idx.to_one_based(),
                    val: *v,
                })
                .collect(),
        }
    }

    pub fn into_tensor(self) -> Result<Tensor<f64>, FormatError> {
        Ok(Tensor::new(self.order, self.dim, self.entries.into_iter().map(|e| (e.idx, e.val)))?)
    }
}

pub fn to_json(t: &Tensor<f64>) -> String {
    serde_json::to_string_pretty(&TensorRecord::from_tensor(t)).expect("tensor records always serialize")
}

pub fn from_json(text: &str) -> Result<Tensor<f64>, FormatError> {
    serde_json::from_str::<TensorRecord>(text)?.into_tensor()
}

pub fn to_plain(t: &Tensor<f64>) -> String {
    let mut out = format!("# order {} dim {}\n", t.order(), t.dim());
    for (idx, v) in t.entries() {
        let cols: Vec<String> = idx.to_one_based().iter().map(ToString::to_string).collect();
        out.push_str(&format!("{} {}\n", cols.join(" "), v));
    }
    out
}

pub fn from_plain(text: &str) -> Result<Tensor<f64>, FormatError> {
    let mut dim_hint: Option<usize> = None;
    let mut order: Option<usize> = None;
    let mut rows: Vec<(Vec<usize>, f64)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let parse_err = |msg: String| FormatError::Parse { line, msg };
        let (content, comment) = match raw.find('#') {
            Some(pos) => (&raw[..pos], Some(&raw[pos + 1..])),
            None => (raw, None),
        };
        if let Some(c) = comment {
            let words: Vec<&str> = c.split_whitespace().collect();
            if let Some(pos) = words.iter().position(|w| *w == "dim") {
                if let Some(n) = words.get(pos + 1).and_then(|w| w.parse().ok()) {
                    dim_hint = Some(n);
                }
            }
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() < 2 {
            return Err(parse_err("expected at least one index and a value".into()));
        }
        let m = tokens.len() - 1;
        match order {
            None => order = Some(m),
            Some(o) if o != m => return Err(parse_err(format!("expected {o} indices, found {m}"))),
            _ => {}
        }
        let idx = tokens[..m]
            .iter()
            .map(|tok| tok.parse::<usize>().map_err(|e| parse_err(format!("bad index {tok:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let val = tokens[m]
            .parse::<f64>()
            .map_err(|e| parse_err(format!("bad value {:?}: {e}", tokens[m])))?;
        rows.push((idx, val));
    }
    let order = order.ok_or(FormatError::Parse {
        line: 0,
        msg: "no entries; cannot infer the order".into(),
    })?;
    let max_index = rows.iter().flat_map(|(i, _)| i.iter().copied()).max().unwrap_or(0);
    let dim = dim_hint.unwrap_or(max_index);
    Ok(Tensor::new(order, dim, rows)?)
}

/// Parses either form: text whose first non-blank character is `{` is
/// structured, anything else plain.
pub fn parse_tensor(text: &str) -> Result<Tensor<f64>, FormatError> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        from_plain(text)
    }
}

pub fn read_tensor(path: &Path) -> Result<Tensor<f64>, FormatError> {
    parse_tensor(&fs::read_to_string(path)?)
}

/// Writes the structured form.
pub fn write_tensor(path: &Path, t: &Tensor<f64>) -> Result<(), FormatError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, to_json(t) + "\n")?;
    Ok(())
}
