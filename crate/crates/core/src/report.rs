//! Machine-readable result records.
//!
//! Records serialize with keys in alphabetical order and floats rounded to 12
//! significant digits, so identical runs produce byte-identical output.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{Number, Value};

use crate::dirichlet::SeriesValue;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// A float rounded to [`SIGNIFICANT_DIGITS`]; non-finite values become `null`.
pub fn number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x);
    Number::from_f64(rounded)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    fields: BTreeMap<String, Value>,
    params: BTreeMap<String, Value>,
}

/// Conversion of plain values into record entries.
pub trait IntoField {
    fn into_field(self) -> Value;
}

impl IntoField for f64 {
    fn into_field(self) -> Value {
        number(self)
    }
}

impl IntoField for u64 {
    fn into_field(self) -> Value {
        Value::from(self)
    }
}

impl IntoField for i64 {
    fn into_field(self) -> Value {
        Value::from(self)
    }
}

impl IntoField for usize {
    fn into_field(self) -> Value {
        Value::from(self as u64)
    }
}

impl IntoField for bool {
    fn into_field(self) -> Value {
        Value::Bool(self)
    }
}

impl IntoField for &str {
    fn into_field(self) -> Value {
        Value::String(self.to_string())
    }
}

impl IntoField for String {
    fn into_field(self) -> Value {
        Value::String(self)
    }
}

impl IntoField for Vec<f64> {
    fn into_field(self) -> Value {
        Value::Array(self.into_iter().map(number).collect())
    }
}

impl IntoField for Vec<i64> {
    fn into_field(self) -> Value {
        Value::Array(self.into_iter().map(Value::from).collect())
    }
}

impl IntoField for Value {
    fn into_field(self) -> Value {
        self
    }
}

impl Record {
    pub fn new(op: &str) -> Self {
        let mut r = Record::default();
        r.fields.insert("op".into(), Value::String(op.into()));
        r
    }

    pub fn param(mut self, key: &str, value: impl IntoField) -> Self {
        self.params.insert(key.into(), value.into_field());
        self
    }

    pub fn field(mut self, key: &str, value: impl IntoField) -> Self {
        self.fields.insert(key.into(), value.into_field());
        self
    }

    pub fn complex(self, z: Complex64) -> Self {
        self.field("re", z.re).field("im", z.im)
    }

    /// `re`, `im`, `error_bound`, `rigorous` and `terms_used` of a computed value.
    pub fn series(self, v: &SeriesValue) -> Self {
        self.complex(v.value)
            .field("error_bound", v.error_bound)
            .field("rigorous", v.rigorous)
            .field("terms_used", v.terms_used)
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    pub fn to_value(&self) -> Value {
        let mut map: serde_json::Map<String, Value> = self
            .fields
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        if !self.params.is_empty() {
            map.insert(
                "params".into(),
                Value::Object(
                    self.params
                        .iter()
                        .map(|(k, v)| (k.clone(), v.clone()))
                        .collect(),
                ),
            );
        }
        Value::Object(map)
    }

    pub fn to_json(&self) -> String {
        self.to_value().to_string()
    }

    fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = self.fields.keys().cloned().collect();
        if !self.params.is_empty() {
            cols.push("params".into());
        }
        cols.sort();
        cols
    }

    fn cell(&self, column: &str) -> String {
        let raw = if column == "params" {
            self.params
                .iter()
                .map(|(k, v)| format!("{k}={}", plain(v)))
                .collect::<Vec<_>>()
                .join(";")
        } else {
            self.fields.get(column).map(plain).unwrap_or_default()
        };
        if raw.contains([',', '"', '\n']) {
            format!("\"{}\"", raw.replace('"', "\"\""))
        } else {
            raw
        }
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// One JSON object per line.
pub fn to_json_lines(records: &[Record]) -> String {
    records.iter().map(|r| r.to_json() + "\n").collect()
}

/// A header over the union of all columns followed by one row per record.
pub fn to_csv(records: &[Record]) -> String {
    let mut columns: Vec<String> = records.iter().flat_map(Record::columns).collect();
    columns.sort();
    columns.dedup();
    let mut out = columns.join(",") + "\n";
    for r in records {
        let row: Vec<String> = columns.iter().map(|c| r.cell(c)).collect();
        out += &row.join(",");
        out.push('\n');
    }
    out
}
