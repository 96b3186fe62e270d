//! CSV and JSON rendering of a sweep.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::config::{Format, SweepSpec};
use crate::sweep::{units, Table};

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with `#` comment lines holding the resolved settings (in config syntax) and
/// the unit convention, then a header row and one row per grid point.
pub fn render_csv(spec: &SweepSpec, table: &Table) -> String {
    let mut out = String::new();
    for (k, v) in spec.entries() {
        let _ = writeln!(out, "# {k} = {v}");
    }
    let _ = writeln!(out, "# units: {}", units(&spec.params));
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&x| format_float(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// `{"meta": {...}, "rows": [{column: value, ...}, ...]}`.
pub fn render_json(spec: &SweepSpec, table: &Table) -> String {
    let mut meta = Map::new();
    for (k, v) in spec.entries() {
        meta.insert(k.to_string(), Value::String(v));
    }
    meta.insert("units".into(), Value::String(units(&spec.params).into()));
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = table
                .columns
                .iter()
                .cloned()
                .zip(row.iter().map(|&x| json!(x)))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let doc = json!({ "meta": meta, "rows": rows });
    let mut text = serde_json::to_string_pretty(&doc).expect("finite values serialize");
    text.push('\n');
    text
}

pub fn render(spec: &SweepSpec, table: &Table) -> String {
    match spec.format {
        Format::Csv => render_csv(spec, table),
        Format::Json => render_json(spec, table),
    }
}

/// Writes `text` to `path` through a sibling temporary file, so the target only
/// appears once it is complete.
pub fn write_atomic(path: &Path, text: &str) -> io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = std::path::PathBuf::from(tmp);
    let result = fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(text.as_bytes())?;
            f.sync_all()
        })
        .and_then(|_| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}
