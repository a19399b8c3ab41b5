//! Rendering of command results.
//!
//! JSON is compact with keys in sorted order (serde_json's default map), so
//! identical inputs give byte-identical output. The table form is for
//! terminals: scalars on `key  value` lines, arrays of objects as aligned
//! columns, p-adic numbers as `p^v * u + O(p^k)`.

use clap::ValueEnum;
use num_bigint::BigUint;
use serde_json::{Map, Value};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

pub fn emit(value: &Value, format: Format) -> String {
    match format {
        Format::Json => format!("{value}\n"),
        Format::Table => table(value),
    }
}

fn table(value: &Value) -> String {
    let Value::Object(map) = value else {
        return format!("{}\n", inline(value));
    };
    let mut out = String::new();
    let width = map.keys().map(|k| k.chars().count()).max().unwrap_or(0);
    let mut sections = Vec::new();
    for (k, v) in map {
        match v {
            Value::Array(rows) if !rows.is_empty() && rows.iter().all(Value::is_object) && !is_special(&rows[0]) => {
                sections.push((k, rows));
            }
            _ => out.push_str(&format!("{k:<width$}  {}\n", inline(v))),
        }
    }
    for (k, rows) in sections {
        out.push_str(&format!("\n{k}:\n"));
        out.push_str(&columns(rows));
    }
    out
}

fn columns(rows: &[Value]) -> String {
    let mut headers: Vec<&String> = Vec::new();
    for row in rows {
        for k in row.as_object().into_iter().flat_map(Map::keys) {
            if !headers.contains(&k) {
                headers.push(k);
            }
        }
    }
    headers.sort();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| headers.iter().map(|h| r.get(h.as_str()).map(inline).unwrap_or_default()).collect())
        .collect();
    let widths: Vec<usize> = headers
        .iter()
        .enumerate()
        .map(|(i, h)| cells.iter().map(|r| r[i].chars().count()).chain([h.chars().count()]).max().unwrap_or(0))
        .collect();
    let line = |items: Vec<&str>| {
        let parts: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        format!("  {}\n", parts.join("  ").trim_end())
    };
    let mut out = line(headers.iter().map(|h| h.as_str()).collect());
    for row in &cells {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

/// Objects that render as a single value rather than a sub-table.
fn is_special(v: &Value) -> bool {
    is_padic(v) || is_cyclotomic(v)
}

fn is_padic(v: &Value) -> bool {
    ["digits", "p", "precision", "valuation"].iter().all(|k| v.get(k).is_some()) && v.as_object().is_some_and(|m| m.len() == 4)
}

fn is_cyclotomic(v: &Value) -> bool {
    v.get("coeffs").is_some() && v.get("order").is_some() && v.as_object().is_some_and(|m| m.len() == 2)
}

fn inline(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::Object(m) if is_padic(v) => padic(m),
        Value::Object(m) if is_cyclotomic(v) => cyclotomic(m),
        Value::Object(m) => {
            let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}={}", inline(v))).collect();
            format!("{{{}}}", parts.join(", "))
        }
    }
}

fn padic(m: &Map<String, Value>) -> String {
    let p = m["p"].as_u64().unwrap_or(0);
    let prec = m["precision"].as_i64().unwrap_or(0);
    let val = match &m["valuation"] {
        Value::Number(n) => n.as_i64().unwrap_or(0),
        _ => return "0".into(),
    };
    let digits: Vec<u64> = m["digits"].as_array().map(|d| d.iter().filter_map(Value::as_u64).collect()).unwrap_or_default();
    if digits.is_empty() {
        return format!("O({p}^{val})");
    }
    let unit = digits.iter().rev().fold(BigUint::from(0u32), |acc, d| acc * p + d);
    let head = if val == 0 { unit.to_string() } else { format!("{p}^{val} * {unit}") };
    format!("{head} + O({p}^{})", val + prec)
}

fn cyclotomic(m: &Map<String, Value>) -> String {
    let d = m["order"].as_u64().unwrap_or(1);
    let coeffs: Vec<String> = m["coeffs"].as_array().map(|c| c.iter().map(inline).collect()).unwrap_or_default();
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.as_str() != "0")
        .map(|(i, c)| match i {
            0 => c.clone(),
            1 => format!("({c})*z{d}"),
            _ => format!("({c})*z{d}^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}
