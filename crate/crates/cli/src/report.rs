use hyperschwarz::checks::Check;
use hyperschwarz::numeric::ComplexValue;
use hyperschwarz::series::Rational;
use serde_json::{json, Map, Value};

/// Exact rationals travel as `"p/q"` strings (`"p"` when the denominator is 1).
pub fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn rationals<'a>(rs: impl IntoIterator<Item = &'a Rational>) -> Value {
    Value::Array(rs.into_iter().map(rational).collect())
}

/// Shortest decimal string that parses back to the same double.
pub fn float(x: f64) -> Value {
    Value::String(format!("{x:?}"))
}

pub fn complex(z: ComplexValue) -> Value {
    json!({ "re": float(z.re), "im": float(z.im) })
}

pub struct Report {
    pub command: &'static str,
    pub params: Value,
    pub results: Map<String, Value>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &'static str, m: Option<u64>, n: Option<u64>, terms: usize) -> Self {
        Report { command, params: json!({ "m": m, "n": n, "terms": terms }), results: Map::new(), checks: Vec::new() }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_string(), value);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_value(&self) -> Value {
        let checks: Vec<Value> =
            self.checks.iter().map(|c| json!({ "name": c.name, "pass": c.pass, "detail": c.detail })).collect();
        json!({
            "command": self.command,
            "params": self.params,
            "results": Value::Object(self.results.clone()),
            "checks": checks,
        })
    }
}

pub fn to_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Object(o) if o.len() == 2 && o.contains_key("re") && o.contains_key("im") => {
            let re = scalar(&o["re"])?;
            let im = scalar(&o["im"])?;
            Some(match im.strip_prefix('-') {
                Some(abs) => format!("{re} - {abs}i"),
                None => format!("{re} + {im}i"),
            })
        }
        _ => None,
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                match (scalar(x), x) {
                    (Some(s), _) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    (None, Value::Array(items)) if items.iter().all(|i| scalar(i).is_some()) => {
                        let parts: Vec<String> = items.iter().filter_map(scalar).collect();
                        out.push_str(&format!("{pad}{k}: [{}]\n", parts.join(", ")));
                    }
                    _ => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, indent + 2, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        render(x, indent + 2, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

/// Human-readable rendering of the same tree as the JSON output.
pub fn to_text(report: &Report) -> String {
    let mut out = format!("command: {}\n", report.command);
    out.push_str("params:\n");
    render(&report.params, 2, &mut out);
    out.push_str("results:\n");
    render(&Value::Object(report.results.clone()), 2, &mut out);
    out.push_str("checks:\n");
    for c in &report.checks {
        let mark = if c.pass { "PASS" } else { "FAIL" };
        out.push_str(&format!("  [{mark}] {}: {}\n", c.name, c.detail));
    }
    let passed = report.checks.iter().filter(|c| c.pass).count();
    out.push_str(&format!("{passed}/{} checks passed\n", report.checks.len()));
    out
}
