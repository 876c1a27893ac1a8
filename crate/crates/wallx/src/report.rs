//! JSON, CSV and plain-text rendering of results.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use wallx_core::ratfun::{Backend, SzBound, Verdict, Witness};
use wallx_core::series::{CheckReport, Value as Side};

pub fn backend_name(b: Backend) -> &'static str {
    match b {
        Backend::Symbolic => "symbolic",
        Backend::Eval { .. } => "eval",
    }
}

fn side(v: &Side) -> Value {
    match v {
        Side::Exact(r) => Value::String(r.to_string()),
        Side::Residues(xs) => Value::Array(xs.iter().map(|x| json!(x.value())).collect()),
    }
}

pub fn sz_bound(b: &SzBound) -> Value {
    json!({
        "degree": b.degree,
        "prime": b.prime,
        "points": b.points,
        "text": format!("({}/{})^{}", b.degree, b.prime, b.points),
    })
}

fn witness(w: &Witness) -> Value {
    match w {
        Witness::Difference(r) => json!({ "difference": r.to_string() }),
        Witness::Point { point, lhs, rhs } => json!({
            "seed": point.seed,
            "point": point.values.iter().map(|v| v.value()).collect::<Vec<_>>(),
            "lhs": lhs.value(),
            "rhs": rhs.value(),
        }),
    }
}

pub fn check_report(rep: &CheckReport, params: Value, seed: u64) -> Value {
    let degrees: Vec<Value> = rep
        .degrees
        .iter()
        .map(|r| {
            let mut m = Map::new();
            m.insert("d".into(), json!(r.d));
            m.insert("check".into(), json!(r.check));
            m.insert("lhs".into(), side(&r.lhs));
            m.insert("rhs".into(), side(&r.rhs));
            m.insert(
                "verdict".into(),
                json!(if r.verdict.is_equal() { "equal" } else { "unequal" }),
            );
            m.insert("backend".into(), json!(backend_name(r.backend)));
            m.insert(
                "points".into(),
                match r.backend {
                    Backend::Symbolic => Value::Null,
                    Backend::Eval { points, .. } => json!(points),
                },
            );
            if let Verdict::Unequal(w) = &r.verdict {
                m.insert("witness".into(), witness(w));
            }
            Value::Object(m)
        })
        .collect();
    json!({
        "command": rep.command,
        "params": params,
        "seed": seed,
        "degrees": degrees,
        "pass": rep.pass(),
        "elapsed_ms": Value::Null,
        "sz_bound": rep.sz_bound.as_ref().map(sz_bound).unwrap_or(Value::Null),
        "notes": rep.notes,
    })
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        Value::Array(xs) => xs.iter().map(scalar).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

/// Plain-text rendering of a report document.
pub fn human(doc: &Value) -> String {
    let mut out = String::new();
    let get = |k: &str| doc.get(k).cloned().unwrap_or(Value::Null);
    let _ = writeln!(out, "command: {}", scalar(&get("command")));
    if let Value::Object(p) = get("params") {
        for (k, v) in p {
            let _ = writeln!(out, "  {} = {}", k, scalar(&v));
        }
    }
    if !get("seed").is_null() {
        let _ = writeln!(out, "seed: {}", scalar(&get("seed")));
    }
    if let Value::Array(rows) = get("degrees") {
        for r in rows {
            let _ = writeln!(
                out,
                "d={} [{}] {} ({}, points {})\n  lhs: {}\n  rhs: {}",
                scalar(&r["d"]),
                scalar(&r["check"]),
                scalar(&r["verdict"]),
                scalar(&r["backend"]),
                scalar(&r["points"]),
                scalar(&r["lhs"]),
                scalar(&r["rhs"]),
            );
            if let Some(w) = r.get("witness") {
                let _ = writeln!(out, "  witness: {}", w);
            }
        }
    }
    for key in ["walls", "coefficients", "points"] {
        if let Some(Value::Array(rows)) = doc.get(key) {
            for r in rows {
                if let Value::Object(m) = r {
                    let line: Vec<String> = m.iter().map(|(k, v)| format!("{}={}", k, scalar(v))).collect();
                    let _ = writeln!(out, "  {}", line.join("  "));
                }
            }
        }
    }
    for key in ["classification", "target", "signs", "count"] {
        if let Some(v) = doc.get(key) {
            let _ = writeln!(out, "{}: {}", key, scalar(v));
        }
    }
    if let Some(Value::Object(b)) = doc.get("sz_bound") {
        let _ = writeln!(out, "failure bound: {}", scalar(&b["text"]));
    }
    if let Some(Value::Array(notes)) = doc.get("notes") {
        for n in notes {
            let _ = writeln!(out, "note: {}", scalar(n));
        }
    }
    if let Some(ms) = doc.get("elapsed_ms").filter(|v| !v.is_null()) {
        let _ = writeln!(out, "elapsed_ms: {}", ms);
    }
    if let Some(p) = doc.get("pass") {
        let _ = writeln!(out, "{}", if p.as_bool() == Some(true) { "PASS" } else { "FAIL" });
    }
    out
}

/// `(degree, expression)` rows for `--csv`.
pub fn csv_rows(doc: &Value) -> Vec<(String, String)> {
    let mut rows = Vec::new();
    if let Some(Value::Array(ds)) = doc.get("degrees") {
        for r in ds {
            rows.push((scalar(&r["d"]), scalar(&r["lhs"])));
        }
    }
    if let Some(Value::Array(cs)) = doc.get("coefficients") {
        for r in cs {
            rows.push((scalar(&r["degree"]), scalar(&r["expr"])));
        }
    }
    if let Some(Value::Array(ps)) = doc.get("points") {
        for r in ps {
            rows.push((scalar(&r["label"]), scalar(&r["contribution"])));
        }
    }
    rows
}
