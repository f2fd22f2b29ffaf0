//! JSON set descriptors.
//!
//! A descriptor is a tree of objects tagged by `"type"`:
//!
//! ```json
//! {"schema_version": 1, "type": "sum", "children": [
//!     {"type": "product", "children": [{"type": "iru", "row_sets": [...]},
//!                                      {"type": "iru", "row_sets": [...]}]},
//!     {"type": "scale", "factor": "0.5", "children": [{"type": "identity", "n": 2}]}
//! ]}
//! ```
//!
//! Leaves are `matrix` (`entries`), `explicit` and `chain` (`matrices`),
//! `iru` (`row_sets`), `zero` (`n`, optional `m` columns) and `identity`
//! (`n`). Numbers may be JSON numbers or decimal strings; the writer emits
//! strings with 17 significant digits so doubles round-trip exactly.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::linalg::Matrix;
use crate::sets::{ExplicitSet, IruSet, OrderedChain, RowSet, SetExpr, SetLeaf};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum DescriptorError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed JSON: {0}")]
    Malformed(String),
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("dimension mismatch at {path}: {message}")]
    Dimension { path: String, message: String },
}

impl DescriptorError {
    /// Process exit code for this class of failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            DescriptorError::Io { .. } | DescriptorError::Malformed(_) => 1,
            DescriptorError::Schema { .. } => 3,
            DescriptorError::Dimension { .. } => 4,
        }
    }
}

type Parsed<T> = std::result::Result<T, DescriptorError>;

fn schema(path: &str, message: impl Into<String>) -> DescriptorError {
    DescriptorError::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

fn dimension(path: &str, message: impl Into<String>) -> DescriptorError {
    DescriptorError::Dimension {
        path: path.to_string(),
        message: message.into(),
    }
}

/// Maps a construction error from the set types onto the descriptor classes.
fn from_set_error(path: &str, e: Error) -> DescriptorError {
    match e {
        Error::DimensionMismatch(m) => dimension(path, m),
        Error::NotSquare { rows, cols } => dimension(path, format!("{rows}x{cols} is not square")),
        other => schema(path, other.to_string()),
    }
}

pub fn parse_descriptor(path: impl AsRef<Path>) -> Parsed<SetExpr> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| DescriptorError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_descriptor_str(&text)
}

pub fn parse_descriptor_str(text: &str) -> Parsed<SetExpr> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| DescriptorError::Malformed(e.to_string()))?;
    parse_value(&value)
}

pub fn parse_value(value: &Value) -> Parsed<SetExpr> {
    let obj = value
        .as_object()
        .ok_or_else(|| schema("$", "expected an object"))?;
    match obj.get("schema_version") {
        None => return Err(schema("$", "missing \"schema_version\"")),
        Some(v) if v.as_u64() == Some(SCHEMA_VERSION) => {}
        Some(v) => {
            return Err(schema(
                "$.schema_version",
                format!("unsupported version {v}, expected {SCHEMA_VERSION}"),
            ))
        }
    }
    node(value, "$")
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Parsed<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema(path, format!("missing \"{key}\"")))
}

fn array<'a>(v: &'a Value, path: &str) -> Parsed<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| schema(path, "expected an array"))
}

fn number(v: &Value, path: &str) -> Parsed<f64> {
    let x = match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => s.trim().parse::<f64>().ok(),
        _ => None,
    }
    .ok_or_else(|| schema(path, format!("expected a number, got {v}")))?;
    if !x.is_finite() {
        return Err(schema(path, "number must be finite"));
    }
    Ok(x)
}

fn size(v: &Value, path: &str) -> Parsed<usize> {
    match v.as_u64() {
        Some(n) if n >= 1 => Ok(n as usize),
        _ => Err(schema(
            path,
            format!("expected a positive integer, got {v}"),
        )),
    }
}

fn row(v: &Value, path: &str) -> Parsed<Vec<f64>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(j, x)| number(x, &format!("{path}[{j}]")))
        .collect()
}

fn rows(v: &Value, path: &str) -> Parsed<Vec<Vec<f64>>> {
    let items = array(v, path)?;
    if items.is_empty() {
        return Err(schema(path, "expected at least one row"));
    }
    let out = items
        .iter()
        .enumerate()
        .map(|(i, r)| row(r, &format!("{path}[{i}]")))
        .collect::<Parsed<Vec<_>>>()?;
    for (i, r) in out.iter().enumerate() {
        if r.len() != out[0].len() {
            return Err(dimension(
                &format!("{path}[{i}]"),
                format!("row has {} entries, expected {}", r.len(), out[0].len()),
            ));
        }
    }
    if out[0].is_empty() {
        return Err(schema(&format!("{path}[0]"), "rows must not be empty"));
    }
    Ok(out)
}

fn matrix(v: &Value, path: &str) -> Parsed<Matrix> {
    let r = rows(v, path)?;
    Matrix::from_rows(&r).map_err(|e| from_set_error(path, e))
}

fn matrices(v: &Value, path: &str) -> Parsed<Vec<Matrix>> {
    let items = array(v, path)?;
    if items.is_empty() {
        return Err(schema(path, "expected at least one matrix"));
    }
    let out = items
        .iter()
        .enumerate()
        .map(|(k, m)| matrix(m, &format!("{path}[{k}]")))
        .collect::<Parsed<Vec<_>>>()?;
    for (k, m) in out.iter().enumerate() {
        if m.shape() != out[0].shape() {
            let (r, c) = m.shape();
            let (r0, c0) = out[0].shape();
            return Err(dimension(
                &format!("{path}[{k}]"),
                format!("matrix is {r}x{c}, expected {r0}x{c0}"),
            ));
        }
    }
    Ok(out)
}

fn children(obj: &Map<String, Value>, path: &str, min: usize) -> Parsed<Vec<SetExpr>> {
    let cpath = format!("{path}.children");
    let items = array(field(obj, "children", path)?, &cpath)?;
    if items.len() < min {
        return Err(schema(&cpath, format!("expected at least {min} children")));
    }
    items
        .iter()
        .enumerate()
        .map(|(k, c)| node(c, &format!("{cpath}[{k}]")))
        .collect()
}

fn child_shape(e: &SetExpr, path: &str) -> Parsed<(usize, usize)> {
    e.shape().map_err(|err| from_set_error(path, err))
}

fn node(value: &Value, path: &str) -> Parsed<SetExpr> {
    let obj = value
        .as_object()
        .ok_or_else(|| schema(path, "expected an object"))?;
    let ty = field(obj, "type", path)?
        .as_str()
        .ok_or_else(|| schema(&format!("{path}.type"), "expected a string"))?;
    let sub = |key: &str| format!("{path}.{key}");
    match ty {
        "matrix" => {
            let m = matrix(field(obj, "entries", path)?, &sub("entries"))?;
            Ok(ExplicitSet::singleton(m).into())
        }
        "explicit" => {
            let ms = matrices(field(obj, "matrices", path)?, &sub("matrices"))?;
            ExplicitSet::new(ms)
                .map(Into::into)
                .map_err(|e| from_set_error(&sub("matrices"), e))
        }
        "chain" => {
            let ms = matrices(field(obj, "matrices", path)?, &sub("matrices"))?;
            OrderedChain::new(ms)
                .map(Into::into)
                .map_err(|e| from_set_error(&sub("matrices"), e))
        }
        "iru" => {
            let rpath = sub("row_sets");
            let items = array(field(obj, "row_sets", path)?, &rpath)?;
            if items.is_empty() {
                return Err(schema(&rpath, "expected at least one row set"));
            }
            let mut sets: Vec<RowSet> = Vec::with_capacity(items.len());
            for (i, rs) in items.iter().enumerate() {
                let p = format!("{rpath}[{i}]");
                let r = rows(rs, &p)?;
                if i > 0 && r[0].len() != sets[0].dim() {
                    return Err(dimension(
                        &p,
                        format!(
                            "rows have {} entries, row set 0 has {}",
                            r[0].len(),
                            sets[0].dim()
                        ),
                    ));
                }
                sets.push(RowSet::new(r).map_err(|e| from_set_error(&p, e))?);
            }
            IruSet::new(sets)
                .map(Into::into)
                .map_err(|e| from_set_error(&rpath, e))
        }
        "zero" => {
            let rows = size(field(obj, "n", path)?, &sub("n"))?;
            let cols = match obj.get("m") {
                Some(m) => size(m, &sub("m"))?,
                None => rows,
            };
            Ok(SetExpr::Zero { rows, cols })
        }
        "identity" => Ok(SetExpr::Identity(size(field(obj, "n", path)?, &sub("n"))?)),
        "scale" => {
            let t = number(field(obj, "factor", path)?, &sub("factor"))?;
            if t <= 0.0 {
                return Err(schema(&sub("factor"), "factor must be positive"));
            }
            let mut kids = children(obj, path, 1)?;
            if kids.len() != 1 {
                return Err(schema(&sub("children"), "scale takes exactly one child"));
            }
            Ok(SetExpr::scale(t, kids.remove(0)))
        }
        "sum" | "product" => {
            let kids = children(obj, path, 2)?;
            let shapes = kids
                .iter()
                .enumerate()
                .map(|(k, c)| child_shape(c, &format!("{path}.children[{k}]")))
                .collect::<Parsed<Vec<_>>>()?;
            for k in 1..shapes.len() {
                let p = format!("{path}.children[{k}]");
                let (prev, cur) = (shapes[k - 1], shapes[k]);
                if ty == "sum" && cur != shapes[0] {
                    return Err(dimension(
                        &p,
                        format!(
                            "term is {}x{}, expected {}x{}",
                            cur.0, cur.1, shapes[0].0, shapes[0].1
                        ),
                    ));
                }
                if ty == "product" && cur.0 != prev.1 {
                    return Err(dimension(
                        &p,
                        format!(
                            "factor has {} rows, previous factor has {} columns",
                            cur.0, prev.1
                        ),
                    ));
                }
            }
            Ok(if ty == "sum" {
                SetExpr::Sum(kids)
            } else {
                SetExpr::Product(kids)
            })
        }
        other => Err(schema(
            &format!("{path}.type"),
            format!("unknown type \"{other}\""),
        )),
    }
}

/// Decimal string with 17 significant digits.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn row_json(r: &[f64]) -> Value {
    Value::Array(r.iter().map(|&x| Value::String(format_number(x))).collect())
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| row_json(m.row(i))).collect())
}

fn node_json(e: &SetExpr) -> Value {
    match e {
        SetExpr::Leaf(SetLeaf::Explicit(s)) => json!({
            "type": "explicit",
            "matrices": s.iter().map(matrix_json).collect::<Vec<_>>(),
        }),
        SetExpr::Leaf(SetLeaf::Chain(c)) => json!({
            "type": "chain",
            "matrices": c.matrices().iter().map(matrix_json).collect::<Vec<_>>(),
        }),
        SetExpr::Leaf(SetLeaf::Iru(s)) => json!({
            "type": "iru",
            "row_sets": s.row_sets().iter()
                .map(|rs| Value::Array(rs.rows().iter().map(|r| row_json(r)).collect()))
                .collect::<Vec<_>>(),
        }),
        SetExpr::Sum(kids) => {
            json!({"type": "sum", "children": kids.iter().map(node_json).collect::<Vec<_>>()})
        }
        SetExpr::Product(kids) => {
            json!({"type": "product", "children": kids.iter().map(node_json).collect::<Vec<_>>()})
        }
        SetExpr::Scale(t, kid) => json!({
            "type": "scale",
            "factor": format_number(*t),
            "children": [node_json(kid)],
        }),
        SetExpr::Zero { rows, cols } => json!({"type": "zero", "n": rows, "m": cols}),
        SetExpr::Identity(n) => json!({"type": "identity", "n": n}),
    }
}

/// Descriptor tree for `e`, tagged with the schema version.
pub fn to_value(e: &SetExpr) -> Value {
    let mut v = node_json(e);
    v.as_object_mut()
        .expect("nodes are objects")
        .insert("schema_version".into(), json!(SCHEMA_VERSION));
    v
}

/// Pretty-printed descriptor with a trailing newline.
pub fn to_string(e: &SetExpr) -> String {
    let mut s = serde_json::to_string_pretty(&to_value(e)).expect("descriptor serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_descriptor() {
        let e = parse_descriptor_str(r#"{"schema_version":1,"type":"identity","n":2}"#).unwrap();
        assert_eq!(e, SetExpr::Identity(2));
    }

    #[test]
    fn example_pair() {
        let text = r#"{"schema_version": 1, "type": "explicit",
            "matrices": [[[0, 2], [0, 0]], [["0", "0"], ["2", "0"]]]}"#;
        match parse_descriptor_str(text).unwrap() {
            SetExpr::Leaf(SetLeaf::Explicit(s)) => assert_eq!(s.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nested_round_trip() {
        let a = IruSet::from_rows(vec![
            vec![vec![0.1, 1.0 / 3.0], vec![2.0, 0.7]],
            vec![vec![1e-300, 5.0]],
        ])
        .unwrap();
        let e = SetExpr::sum(vec![
            SetExpr::product(vec![a.clone().into(), a.clone().into()]),
            SetExpr::scale(0.1, a.into()),
            SetExpr::Identity(2),
        ]);
        let back = parse_descriptor_str(&to_string(&e)).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn error_classes_and_paths() {
        let err = parse_descriptor_str("{").unwrap_err();
        assert_eq!(err.exit_code(), 1);
        let err = parse_descriptor_str(r#"{"schema_version":1,"type":"blob"}"#).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let err = parse_descriptor_str(
            r#"{"schema_version":1,"type":"sum","children":[
                {"type":"identity","n":2},
                {"type":"iru","row_sets":[[[1,2]],[[1,2,3]]]}]}"#,
        )
        .unwrap_err();
        assert_eq!(
            err,
            DescriptorError::Dimension {
                path: "$.children[1].row_sets[1]".into(),
                message: "rows have 3 entries, row set 0 has 2".into()
            }
        );
        assert_eq!(err.exit_code(), 4);
        let err = parse_descriptor_str(
            r#"{"schema_version":1,"type":"product","children":[
                {"type":"zero","n":2,"m":3},{"type":"identity","n":2}]}"#,
        )
        .unwrap_err();
        assert!(
            matches!(err, DescriptorError::Dimension { ref path, .. } if path == "$.children[1]")
        );
        let err = parse_descriptor_str(r#"{"type":"identity","n":2}"#).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
