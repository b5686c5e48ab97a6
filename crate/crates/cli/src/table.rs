//! Plain-text tables for `--pretty`.

use std::fmt::Write as _;

use periodica::UntanglingResult;
use serde_json::Value;

fn grid(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cells.zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&mut out, &mut header.iter().copied());
    let rule: Vec<String> = width.iter().map(|w| "-".repeat(*w)).collect();
    let _ = writeln!(out, "{}", rule.join("  "));
    for r in rows {
        line(&mut out, &mut r.iter().map(String::as_str));
    }
    out
}

pub fn untangling(results: &[&UntanglingResult]) -> String {
    let rows: Vec<Vec<String>> = results
        .iter()
        .enumerate()
        .map(|(i, r)| {
            vec![
                (i + 1).to_string(),
                r.min_crossings.to_string(),
                r.u_upper.to_string(),
                r.layers.to_string(),
                r.exhaustive.to_string(),
                r.states.to_string(),
            ]
        })
        .collect();
    grid(
        &[
            "#",
            "min crossings",
            "u_upper",
            "layers",
            "exhaustive",
            "states",
        ],
        &rows,
    )
}

pub fn validation(v: &Value) -> String {
    let mut rows = Vec::new();
    for (i, d) in v["diagrams"].as_array().into_iter().flatten().enumerate() {
        for s in d["structural"].as_array().into_iter().flatten() {
            rows.push(vec![
                (i + 1).to_string(),
                "-".into(),
                "fail".into(),
                text(s),
            ]);
        }
        for r in d["rules"].as_array().into_iter().flatten() {
            let ok = r["passed"].as_bool().unwrap_or(false);
            rows.push(vec![
                (i + 1).to_string(),
                text(&r["rule"]),
                if ok { "ok" } else { "fail" }.into(),
                r["detail"]
                    .as_str()
                    .map_or_else(|| text(&r["name"]), str::to_string),
            ]);
        }
    }
    let mut out = grid(&["diagram", "rule", "status", "detail"], &rows);
    let _ = writeln!(out, "valid: {}", v["valid"]);
    out
}

pub fn batch(rows: &[Value]) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let err = r["error"].as_str().unwrap_or("");
            vec![
                text(&r["path"]),
                triplet(&r["triplet"]),
                triplet(&r["simplified"]),
                if r["u_upper"].is_null() {
                    String::new()
                } else {
                    r["u_upper"].to_string()
                },
                if r["ground"].is_null() {
                    String::new()
                } else {
                    text(&r["ground"])
                },
                err.to_string(),
            ]
        })
        .collect();
    grid(
        &[
            "path",
            "triplet",
            "simplified",
            "u_upper",
            "ground",
            "error",
        ],
        &cells,
    )
}

fn text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        v => v.to_string(),
    }
}

fn triplet(v: &Value) -> String {
    if v.is_null() {
        return String::new();
    }
    format!("({}, {}, {})", v["a"], v["b"], v["c"])
}
