//! Machine-readable reports: named check items with residuals and thresholds, rendered as sorted-key JSON.

use serde_json::{json, Map, Value};

/// One check of a suite.
#[derive(Clone, Debug, PartialEq)]
pub struct Item {
    pub name: String,
    pub pass: bool,
    pub residual: Value,
    pub threshold: Value,
    pub detail: Value,
}

impl Item {
    /// Passes when `residual <= threshold`.
    pub fn le(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Item {
            name: name.into(),
            pass: residual <= threshold,
            residual: json!(residual),
            threshold: json!(threshold),
            detail: Value::Null,
        }
    }

    /// Passes when `residual >= threshold`.
    pub fn ge(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Item {
            name: name.into(),
            pass: residual >= threshold,
            residual: json!(residual),
            threshold: json!(threshold),
            detail: Value::Null,
        }
    }

    /// Exact check; the residual is the number of failures.
    pub fn exact(name: impl Into<String>, failures: usize, total: usize) -> Self {
        Item {
            name: name.into(),
            pass: failures == 0,
            residual: json!(failures),
            threshold: json!(0),
            detail: json!({ "total": total }),
        }
    }

    pub fn flag(name: impl Into<String>, pass: bool) -> Self {
        Item { name: name.into(), pass, residual: json!(pass), threshold: json!(true), detail: Value::Null }
    }

    pub fn with(mut self, detail: Value) -> Self {
        self.detail = detail;
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "pass": self.pass,
            "residual": self.residual,
            "threshold": self.threshold,
            "detail": self.detail,
        })
    }
}

/// A suite run.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub suite: String,
    pub params: Map<String, Value>,
    pub items: Vec<Item>,
    pub data: Map<String, Value>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report { suite: suite.into(), params: Map::new(), items: Vec::new(), data: Map::new() }
    }

    pub fn param(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.params.insert(key.into(), v.into());
        self
    }

    pub fn push(&mut self, item: Item) -> &mut Self {
        self.items.push(item);
        self
    }

    pub fn data(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.data.insert(key.into(), v.into());
        self
    }

    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.items.iter().filter(|i| !i.pass).map(|i| i.name.as_str()).collect()
    }

    pub fn item(&self, name: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "pass": self.pass(),
            "params": self.params,
            "items": self.items.iter().map(Item::to_json).collect::<Vec<_>>(),
            "data": self.data,
        })
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }
}
