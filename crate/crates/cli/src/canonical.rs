//! Canonical JSON: object keys sorted, compact separators, integers only.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// `serde_json::Value` keeps object keys in a `BTreeMap`, so converting
/// through it sorts them at every depth.
pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable output")
}

pub fn to_string<T: Serialize>(x: &T) -> String {
    to_value(x).to_string()
}

pub fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Tab-separated rows; nested values are written as compact JSON.
pub fn tsv(rows: &[Vec<Value>]) -> String {
    let cell = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    let mut out = String::new();
    for r in rows {
        out.push_str(&r.iter().map(cell).collect::<Vec<_>>().join("\t"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_are_sorted_at_every_depth() {
        #[derive(Serialize)]
        struct S {
            zeta: u8,
            alpha: Inner,
        }
        #[derive(Serialize)]
        struct Inner {
            y: u8,
            b: u8,
        }
        let s = S { zeta: 1, alpha: Inner { y: 2, b: 3 } };
        assert_eq!(to_string(&s), r#"{"alpha":{"b":3,"y":2},"zeta":1}"#);
    }

    #[test]
    fn tsv_cells() {
        let rows = vec![vec![json!("D4"), json!(2), json!([1, 2])]];
        assert_eq!(tsv(&rows), "D4\t2\t[1,2]\n");
        assert_eq!(digest("").len(), 64);
    }
}
