//! JSON channel-spec files.
//!
//! ```json
//! {"alphabets": {"Q":1,"S":2,"U1":2,"X1":2,"X2":2,"Y":2},
//!  "q_dist": [...], "s_dist": [...],
//!  "u1_given_sq":   [S][Q][U1],
//!  "x1_given_u1sq": [U1][S][Q][X1],
//!  "x2_given_q":    [Q][X2],
//!  "y_given_x1x2s": [X1][X2][S][Y]}
//! ```

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::dm::{Alphabets, CondTable, DmChannelSpec};
use crate::error::{Error, Result};
use crate::info::PROB_SLACK;

const ALPHABET_KEYS: [&str; 6] = ["Q", "S", "U1", "X1", "X2", "Y"];

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        pointer: pointer.into(),
        message: message.into(),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, base: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema(format!("{base}/{key}"), "missing key"))
}

/// Nesting depths seen along the first element of every level.
fn nested_shape(v: &Value) -> Vec<usize> {
    let mut shape = Vec::new();
    let mut cur = v;
    while let Value::Array(items) = cur {
        shape.push(items.len());
        match items.first() {
            Some(first) => cur = first,
            None => break,
        }
    }
    shape
}

struct Table<'a> {
    name: &'a str,
    dims: Vec<(&'static str, usize)>,
    expected: Vec<usize>,
    actual: Vec<usize>,
}

impl Table<'_> {
    fn mismatch(&self, pointer: String, level: usize, found: usize) -> Error {
        let names: Vec<&str> = self.dims.iter().map(|d| d.0).collect();
        schema(
            pointer,
            format!(
                "{} has shape {:?} but alphabets {:?} require {:?} (level {} has {} entries, expected |{}| = {})",
                self.name,
                self.actual,
                names,
                self.expected,
                level,
                found,
                self.dims[level].0,
                self.dims[level].1
            ),
        )
    }
}

fn flatten(t: &Table, v: &Value, level: usize, pointer: String, out: &mut Vec<f64>) -> Result<()> {
    let items = v
        .as_array()
        .ok_or_else(|| schema(pointer.clone(), "expected an array"))?;
    if items.len() != t.dims[level].1 {
        return Err(t.mismatch(pointer, level, items.len()));
    }
    if level + 1 == t.dims.len() {
        let start = out.len();
        for (i, x) in items.iter().enumerate() {
            let p = x
                .as_f64()
                .ok_or_else(|| schema(format!("{pointer}/{i}"), "expected a number"))?;
            if !p.is_finite() || p < -PROB_SLACK {
                return Err(schema(
                    format!("{pointer}/{i}"),
                    format!("probability {p} is negative"),
                ));
            }
            out.push(p.max(0.0));
        }
        let total: f64 = out[start..].iter().sum();
        if (total - 1.0).abs() > PROB_SLACK {
            return Err(schema(
                pointer,
                format!("{} row sums to {total}, expected 1", t.name),
            ));
        }
        return Ok(());
    }
    for (i, item) in items.iter().enumerate() {
        flatten(t, item, level + 1, format!("{pointer}/{i}"), out)?;
    }
    Ok(())
}

fn read_table(
    root: &Map<String, Value>,
    name: &str,
    dims: Vec<(&'static str, usize)>,
) -> Result<Vec<f64>> {
    let v = field(root, name, "")?;
    let t = Table {
        name,
        expected: dims.iter().map(|d| d.1).collect(),
        actual: nested_shape(v),
        dims,
    };
    let mut out = Vec::new();
    flatten(&t, v, 0, format!("/{name}"), &mut out)?;
    Ok(out)
}

/// Parses and validates a spec from JSON text.
pub fn parse_dm_spec(text: &str) -> Result<DmChannelSpec> {
    let root: Value = serde_json::from_str(text)?;
    let root = root
        .as_object()
        .ok_or_else(|| schema("", "expected a JSON object"))?;
    let alph = field(root, "alphabets", "")?
        .as_object()
        .ok_or_else(|| schema("/alphabets", "expected an object"))?;
    let mut sizes = [0usize; 6];
    for (slot, key) in sizes.iter_mut().zip(ALPHABET_KEYS) {
        let v = field(alph, key, "/alphabets")?;
        *slot = v
            .as_u64()
            .filter(|n| *n > 0)
            .ok_or_else(|| schema(format!("/alphabets/{key}"), "expected a positive integer"))?
            as usize;
    }
    let [q, s, u1, x1, x2, y] = sizes;
    let alphabets = Alphabets {
        q,
        s,
        u1,
        x1,
        x2,
        y,
    };
    let q_dist = read_table(root, "q_dist", vec![("Q", q)])?;
    let s_dist = read_table(root, "s_dist", vec![("S", s)])?;
    let u1_given_sq = read_table(root, "u1_given_sq", vec![("S", s), ("Q", q), ("U1", u1)])?;
    let x1_given_u1sq = read_table(
        root,
        "x1_given_u1sq",
        vec![("U1", u1), ("S", s), ("Q", q), ("X1", x1)],
    )?;
    let x2_given_q = read_table(root, "x2_given_q", vec![("Q", q), ("X2", x2)])?;
    let y_given_x1x2s = read_table(
        root,
        "y_given_x1x2s",
        vec![("X1", x1), ("X2", x2), ("S", s), ("Y", y)],
    )?;
    if let Some(extra) = root.keys().find(|k| !TOP_KEYS.contains(&k.as_str())) {
        return Err(schema(format!("/{extra}"), "unknown key"));
    }
    Ok(DmChannelSpec {
        alphabets,
        q_dist,
        s_dist,
        u1_given_sq: CondTable::new(vec![s, q], u1, u1_given_sq)?,
        x1_given_u1sq: CondTable::new(vec![u1, s, q], x1, x1_given_u1sq)?,
        x2_given_q: CondTable::new(vec![q], x2, x2_given_q)?,
        y_given_x1x2s: CondTable::new(vec![x1, x2, s], y, y_given_x1x2s)?,
    })
}

const TOP_KEYS: [&str; 7] = [
    "alphabets",
    "q_dist",
    "s_dist",
    "u1_given_sq",
    "x1_given_u1sq",
    "x2_given_q",
    "y_given_x1x2s",
];

pub fn load_dm_spec(path: &Path) -> Result<DmChannelSpec> {
    parse_dm_spec(&std::fs::read_to_string(path)?)
}

fn nest(table: &CondTable) -> Value {
    fn build(table: &CondTable, prefix: &mut Vec<usize>) -> Value {
        let depth = prefix.len();
        if depth == table.parents().len() {
            return json!(table.row(prefix));
        }
        let items = (0..table.parents()[depth])
            .map(|i| {
                prefix.push(i);
                let v = build(table, prefix);
                prefix.pop();
                v
            })
            .collect();
        Value::Array(items)
    }
    build(table, &mut Vec::new())
}

/// Inverse of [`parse_dm_spec`].
pub fn dm_spec_to_json(spec: &DmChannelSpec) -> Value {
    let a = spec.alphabets;
    json!({
        "alphabets": {"Q": a.q, "S": a.s, "U1": a.u1, "X1": a.x1, "X2": a.x2, "Y": a.y},
        "q_dist": spec.q_dist,
        "s_dist": spec.s_dist,
        "u1_given_sq": nest(&spec.u1_given_sq),
        "x1_given_u1sq": nest(&spec.x1_given_u1sq),
        "x2_given_q": nest(&spec.x2_given_q),
        "y_given_x1x2s": nest(&spec.y_given_x1x2s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::{induced_spec, BinaryDpcParams, BinaryMacParams};

    fn sample() -> DmChannelSpec {
        let m = BinaryMacParams::new(0.1, 0.4, 0.2).unwrap();
        induced_spec(&m, &BinaryDpcParams::new(0.05, 0.9).unwrap())
    }

    #[test]
    fn round_trip() {
        let spec = sample();
        let text = dm_spec_to_json(&spec).to_string();
        assert_eq!(parse_dm_spec(&text).unwrap(), spec);
    }

    #[test]
    fn bad_row_sum_is_located() {
        let mut v = dm_spec_to_json(&sample());
        v["x2_given_q"][0] = json!([0.58, 0.4]);
        let err = parse_dm_spec(&v.to_string()).unwrap_err();
        match err {
            Error::Schema { pointer, message } => {
                assert_eq!(pointer, "/x2_given_q/0");
                assert!(message.contains("0.98"), "{message}");
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn shape_mismatch_names_both_shapes() {
        let mut v = dm_spec_to_json(&sample());
        v["y_given_x1x2s"] = json!([[[[1.0, 0.0, 0.0]]]]);
        let msg = parse_dm_spec(&v.to_string()).unwrap_err().to_string();
        assert!(msg.starts_with("/y_given_x1x2s"), "{msg}");
        assert!(
            msg.contains("[1, 1, 1, 3]") && msg.contains("[2, 2, 2, 2]"),
            "{msg}"
        );
    }

    #[test]
    fn missing_and_unknown_keys() {
        let mut v = dm_spec_to_json(&sample());
        v.as_object_mut().unwrap().remove("s_dist");
        let msg = parse_dm_spec(&v.to_string()).unwrap_err().to_string();
        assert!(msg.starts_with("/s_dist: missing key"), "{msg}");
        let mut v = dm_spec_to_json(&sample());
        v["alphabets"]["U1"] = json!(0);
        let msg = parse_dm_spec(&v.to_string()).unwrap_err().to_string();
        assert!(msg.starts_with("/alphabets/U1"), "{msg}");
        let mut v = dm_spec_to_json(&sample());
        v["extra"] = json!(1);
        assert!(parse_dm_spec(&v.to_string()).is_err());
        let mut v = dm_spec_to_json(&sample());
        v["q_dist"] = json!(["a"]);
        let msg = parse_dm_spec(&v.to_string()).unwrap_err().to_string();
        assert!(msg.starts_with("/q_dist/0"), "{msg}");
    }
}
