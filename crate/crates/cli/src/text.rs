//! Indented plain-text rendering of report JSON.

use serde_json::Value;

/// Algebraic literals collapse to `≈approx` with their enclosure width.
fn leaf(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Object(o) if o.contains_key("minpoly") && o.contains_key("enclosure") => {
            let e = &o["enclosure"];
            Some(format!(
                "≈{} (width {}, root of {})",
                e["approx"].as_str().unwrap_or("?"),
                e["width"].as_str().unwrap_or("?"),
                Value::Array(o["minpoly"].as_array().cloned().unwrap_or_default())
            ))
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().map(|x| leaf(x).unwrap_or_default()).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(a) if a.iter().all(|x| x.is_array() && leaf(x).is_some()) => {
            Some(format!("[{}]", a.iter().map(|x| leaf(x).unwrap_or_default()).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn walk(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                match leaf(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        walk(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                match leaf(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        walk(x, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", leaf(other).unwrap_or_default())),
    }
}

pub fn render(v: &Value) -> String {
    let mut out = String::new();
    walk(v, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn algebraic_values_get_markers() {
        let v = json!({"s": {"minpoly": [-2, 0, 1], "interval": ["1", "2"], "value": ["0", "1"],
            "enclosure": {"lo": "a", "hi": "b", "width": "1/2^64", "approx": "1.414213562373"}}});
        let t = render(&v);
        assert!(t.starts_with("s: ≈1.414213562373"));
    }

    #[test]
    fn nested_layout() {
        let t = render(&json!({"a": {"b": [1, 2]}, "c": [[0, 1], [1, 0]]}));
        assert_eq!(t, "a:\n  b: [1, 2]\nc: [[0, 1], [1, 0]]\n");
    }
}
