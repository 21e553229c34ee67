//! Report writers. Every report starts with a provenance header: `#` comment
//! lines in CSV, a `provenance` object in JSON.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::Format;
use crate::error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: Option<u64>,
    pub parameters: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl Provenance {
    pub fn new(command: &str, seed: Option<u64>, parameters: Value, with_timestamp: bool) -> Self {
        let timestamp = with_timestamp.then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        Provenance {
            tool: "quasiortho",
            version: VERSION,
            command: command.to_string(),
            seed,
            parameters,
            timestamp,
        }
    }
}

/// Numbers in CSV cells: shortest round-trip form, scientific outside
/// `[1e-4, 1e16)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// A table with summary lines, rendered as CSV or JSON.
#[derive(Debug, Default)]
pub struct Report {
    summary: Vec<(String, Value)>,
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
    table_name: &'static str,
    table_in_json: bool,
    extra: Map<String, Value>,
}

impl Report {
    pub fn new(table_name: &'static str, columns: &[&str]) -> Self {
        Report {
            table_name,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            table_in_json: true,
            ..Default::default()
        }
    }

    pub fn summary(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.summary.push((key.to_string(), to_value(value)));
        self
    }

    pub fn row(&mut self, cells: Vec<Value>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    /// Leave the flat table out of JSON output, for reports whose JSON form
    /// carries the full record through [`Report::extra`] instead.
    pub fn csv_table_only(&mut self) -> &mut Self {
        self.table_in_json = false;
        self
    }

    /// JSON-only payload, for nested records that have no flat CSV form.
    pub fn extra(&mut self, key: &str, value: impl Serialize) {
        self.extra.insert(key.to_string(), to_value(value));
    }

    pub fn render(&self, prov: &Provenance, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(prov),
            Format::Json => self.render_json(prov),
        }
    }

    fn render_csv(&self, prov: &Provenance) -> String {
        let mut out = header_lines(prov);
        for (k, v) in &self.summary {
            let _ = writeln!(out, "# {k}: {}", cell(v));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r.iter().map(cell)).expect("in-memory write");
        }
        let bytes = w.into_inner().expect("in-memory flush");
        out.push_str(std::str::from_utf8(&bytes).expect("cells are UTF-8"));
        out
    }

    fn render_json(&self, prov: &Provenance) -> String {
        let mut top = Map::new();
        top.insert("provenance".into(), to_value(prov));
        let summary: Map<String, Value> = self.summary.iter().cloned().collect();
        top.insert("summary".into(), Value::Object(summary));
        for (k, v) in &self.extra {
            top.insert(k.clone(), v.clone());
        }
        if !self.table_in_json {
            return pretty(Value::Object(top));
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().cloned()).collect()))
            .collect();
        top.insert(self.table_name.into(), Value::Array(rows));
        pretty(Value::Object(top))
    }
}

pub fn header_lines(prov: &Provenance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {} {}", prov.tool, prov.version);
    let _ = writeln!(out, "# command: {}", prov.command);
    match prov.seed {
        Some(s) => {
            let _ = writeln!(out, "# seed: {s}");
        }
        None => out.push_str("# seed: none\n"),
    }
    let _ = writeln!(out, "# parameters: {}", prov.parameters);
    if let Some(t) = prov.timestamp {
        let _ = writeln!(out, "# timestamp: {t}");
    }
    out
}

pub fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => match (n.as_u64(), n.as_i64(), n.as_f64()) {
            (Some(u), _, _) => u.to_string(),
            (_, Some(i), _) => i.to_string(),
            (_, _, Some(f)) => num(f),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Write to `path`, or to stdout when `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
