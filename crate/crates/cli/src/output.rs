//! Rendering reports as JSON or CSV.

use serde_json::Value;

use crate::args::Format;

/// Rows for CSV output when the report has a natural tabular shape.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub body: Value,
    pub table: Option<Table>,
    /// Non-zero when the command ran but its verdict is negative.
    pub exit_code: i32,
}

impl Report {
    pub fn new(body: Value) -> Self {
        Self {
            body,
            table: None,
            exit_code: 0,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.body).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => match &self.table {
                Some(t) => render_table(t),
                None => {
                    let mut t = Table::new(&["key", "value"]);
                    flatten("", &self.body, &mut t.rows);
                    render_table(&t)
                }
            },
        }
    }
}

/// 12 significant digits.
pub fn num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = 11 - x.abs().log10().floor() as i32;
    if (0..=17).contains(&digits) {
        let s = format!("{:.*}", digits as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.to_string(),
            (_, Some(u)) => u.to_string(),
            _ => num(n.as_f64().unwrap_or(f64::NAN)),
        },
        Value::String(s) => s.clone(),
        _ => unreachable!("containers are flattened"),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<Vec<String>>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(&key(k), child, out);
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), child, out);
            }
        }
        _ => out.push(vec![prefix.to_string(), scalar(v)]),
    }
}

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_table(t: &Table) -> String {
    let mut s = String::new();
    for row in std::iter::once(&t.header).chain(&t.rows) {
        let line: Vec<String> = row.iter().map(|f| field(f)).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn twelve_digits() {
        assert_eq!(num(std::f64::consts::PI), "3.14159265359");
        assert_eq!(num(0.5), "0.5");
        assert_eq!(num(-1.0), "-1");
        assert_eq!(num(1e-20), "1.00000000000e-20");
    }

    #[test]
    fn nested_reports_flatten_to_dotted_keys() {
        let r = Report::new(json!({"a": {"b": [1, 2.5]}, "c": "x,y"}));
        assert_eq!(r.render(Format::Csv), "key,value\na.b.0,1\na.b.1,2.5\nc,\"x,y\"\n");
    }
}
