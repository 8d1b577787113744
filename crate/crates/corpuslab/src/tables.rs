//! Report tables and their TSV and JSON renderings.
//!
//! TSV files open with `#key<TAB>value` metadata lines (`artifact`,
//! `config_sha256`, `modules`), then one header row and the data rows.
//! Text cells escape `\`, TAB and newline as `\\`, `\t` and `\n`; missing
//! or non-finite numbers render as `NA`.
//!
//! JSON files hold one object with `schema_version`, `artifact`,
//! `config_sha256`, `modules`, `columns` and `rows`; missing or non-finite
//! numbers are `null`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Number, Value};

use crate::config::TableFormat;
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u64 = 1;
pub const MISSING: &str = "NA";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Count(u64),
    /// Four decimals.
    Ratio(f64),
    /// Two decimals, already scaled to 0..100.
    Percent(f64),
    /// Four decimals.
    Real(f64),
    Missing,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn count(n: usize) -> Self {
        Cell::Count(n as u64)
    }

    fn decimals(&self) -> Option<(f64, usize)> {
        match *self {
            Cell::Ratio(x) | Cell::Real(x) => Some((x, 4)),
            Cell::Percent(x) => Some((x, 2)),
            _ => None,
        }
    }

    /// Rendering shared by both formats for numbers.
    fn fixed(&self) -> Option<String> {
        let (x, d) = self.decimals()?;
        if !x.is_finite() {
            return None;
        }
        let s = format!("{x:.d$}");
        // -0.0000 and 0.0000 are the same value
        if s.trim_start_matches('-').bytes().all(|b| b == b'0' || b == b'.') {
            Some(s.trim_start_matches('-').to_string())
        } else {
            Some(s)
        }
    }

    pub fn to_tsv(&self) -> String {
        match self {
            Cell::Text(s) => escape(s),
            Cell::Count(n) => n.to_string(),
            Cell::Missing => MISSING.to_string(),
            _ => self.fixed().unwrap_or_else(|| MISSING.to_string()),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Count(n) => Value::from(*n),
            Cell::Missing => Value::Null,
            _ => self
                .fixed()
                .and_then(|s| s.parse::<f64>().ok())
                .and_then(Number::from_f64)
                .map_or(Value::Null, Value::Number),
        }
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            _ => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> Option<String> {
    let mut out = String::with_capacity(s.len());
    let mut it = s.chars();
    while let Some(c) = it.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        out.push(match it.next()? {
            '\\' => '\\',
            't' => '\t',
            'n' => '\n',
            'r' => '\r',
            _ => return None,
        });
    }
    Some(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    /// Core modules whose output the table holds.
    pub modules: Vec<&'static str>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, modules: &[&'static str], columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            modules: modules.to_vec(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_columns(name: &str, modules: &[&'static str], columns: Vec<String>) -> Self {
        Table {
            name: name.to_string(),
            modules: modules.to_vec(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width in {}", self.name);
        self.rows.push(row);
    }

    /// Square matrix with a language header row and column.
    pub fn matrix(name: &str, modules: &[&'static str], languages: &[String], values: &[Vec<f64>]) -> Self {
        let mut columns = vec!["Language".to_string()];
        columns.extend(languages.iter().cloned());
        let mut t = Table::with_columns(name, modules, columns);
        for (lang, row) in languages.iter().zip(values) {
            let mut cells = vec![Cell::text(lang.clone())];
            cells.extend(row.iter().map(|&x| Cell::Real(x)));
            t.push(cells);
        }
        t
    }

    /// Module name to version, as recorded in both formats.
    pub fn module_versions(&self) -> BTreeMap<String, String> {
        let mut m: BTreeMap<String, String> = self
            .modules
            .iter()
            .map(|m| (m.to_string(), corpuslab_core::VERSION.to_string()))
            .collect();
        m.insert("corpuslab".into(), env!("CARGO_PKG_VERSION").into());
        m
    }

    pub fn render(&self, format: TableFormat, config_hash: &str) -> String {
        match format {
            TableFormat::Tsv => self.to_tsv(config_hash),
            TableFormat::Json => self.to_json(config_hash),
        }
    }

    pub fn to_tsv(&self, config_hash: &str) -> String {
        let mut out = format!("#artifact\t{}\n#config_sha256\t{config_hash}\n#modules", self.name);
        for (m, v) in self.module_versions() {
            out.push_str(&format!("\t{m}={v}"));
        }
        out.push('\n');
        out.push_str(&self.columns.iter().map(|c| escape(c)).collect::<Vec<_>>().join("\t"));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Cell::to_tsv).collect::<Vec<_>>().join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, config_hash: &str) -> String {
        let modules: Map<String, Value> = self
            .module_versions()
            .into_iter()
            .map(|(k, v)| (k, Value::String(v)))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::to_json).collect()))
            .collect();
        let v = json!({
            "schema_version": SCHEMA_VERSION,
            "artifact": self.name,
            "config_sha256": config_hash,
            "modules": modules,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("json value serializes");
        s.push('\n');
        s
    }

    /// The cells as `parse_tsv` returns them.
    pub fn tsv_cells(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| match c {
                        Cell::Text(s) => s.clone(),
                        c => c.to_tsv(),
                    })
                    .collect()
            })
            .collect()
    }

    /// The cells as `parse_json` returns them.
    pub fn json_cells(&self) -> Vec<Vec<Value>> {
        self.rows.iter().map(|r| r.iter().map(Cell::to_json).collect()).collect()
    }
}

/// A table read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed<C> {
    pub artifact: String,
    pub config_sha256: String,
    pub modules: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<C>>,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Config(format!("table schema: {}", msg.into()))
}

pub fn parse_tsv(text: &str) -> Result<Parsed<String>> {
    let mut lines = text.lines();
    let mut meta = |key: &str| -> Result<String> {
        let l = lines.next().ok_or_else(|| schema("truncated metadata"))?;
        let rest = l
            .strip_prefix('#')
            .and_then(|l| l.strip_prefix(key))
            .and_then(|l| l.strip_prefix('\t'))
            .ok_or_else(|| schema(format!("expected #{key}")))?;
        Ok(rest.to_string())
    };
    let artifact = meta("artifact")?;
    let config_sha256 = meta("config_sha256")?;
    let modules = meta("modules")?
        .split('\t')
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| schema(format!("bad module entry {kv:?}")))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let split = |l: &str| -> Result<Vec<String>> {
        l.split('\t')
            .map(|c| unescape(c).ok_or_else(|| schema(format!("bad escape in {c:?}"))))
            .collect()
    };
    let columns = split(lines.next().ok_or_else(|| schema("missing header row"))?)?;
    let mut rows = Vec::new();
    for l in lines {
        let row = split(l)?;
        if row.len() != columns.len() {
            return Err(schema(format!("row has {} cells, header has {}", row.len(), columns.len())));
        }
        rows.push(row);
    }
    Ok(Parsed {
        artifact,
        config_sha256,
        modules,
        columns,
        rows,
    })
}

pub fn parse_json(text: &str) -> Result<Parsed<Value>> {
    let v: Value = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    if v["schema_version"].as_u64() != Some(SCHEMA_VERSION) {
        return Err(schema("unsupported schema_version"));
    }
    let string = |key: &str| v[key].as_str().map(String::from).ok_or_else(|| schema(format!("{key} must be a string")));
    let modules = v["modules"]
        .as_object()
        .ok_or_else(|| schema("modules must be an object"))?
        .iter()
        .map(|(k, v)| v.as_str().map(|s| (k.clone(), s.to_string())))
        .collect::<Option<BTreeMap<_, _>>>()
        .ok_or_else(|| schema("module versions must be strings"))?;
    let columns = v["columns"]
        .as_array()
        .and_then(|a| a.iter().map(|c| c.as_str().map(String::from)).collect::<Option<Vec<_>>>())
        .ok_or_else(|| schema("columns must be strings"))?;
    let mut rows = Vec::new();
    for r in v["rows"].as_array().ok_or_else(|| schema("rows must be an array"))? {
        let r = r.as_array().ok_or_else(|| schema("row must be an array"))?;
        if r.len() != columns.len() {
            return Err(schema("row width differs from columns"));
        }
        if r.iter().any(|c| c.is_array() || c.is_object() || c.is_boolean()) {
            return Err(schema("cells must be strings, numbers or null"));
        }
        rows.push(r.clone());
    }
    Ok(Parsed {
        artifact: string("artifact")?,
        config_sha256: string("config_sha256")?,
        modules,
        columns,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new("demo", &["stats"], &["Language", "Tokens", "TTR", "Share", "PP"]);
        t.push(vec![Cell::text("bho"), Cell::Count(12), Cell::Ratio(2.0 / 3.0), Cell::Percent(12.345), Cell::Real(f64::INFINITY)]);
        t.push(vec![Cell::text("a\tb\\c"), Cell::Count(0), Cell::Ratio(-1e-9), Cell::Percent(100.0), Cell::Missing]);
        t
    }

    #[test]
    fn numeric_rendering() {
        assert_eq!(Cell::Ratio(2.0 / 3.0).to_tsv(), "0.6667");
        assert_eq!(Cell::Percent(12.345).to_tsv(), "12.35");
        assert_eq!(Cell::Percent(12.344).to_tsv(), "12.34");
        assert_eq!(Cell::Count(1_000_000).to_tsv(), "1000000");
        assert_eq!(Cell::Real(f64::NAN).to_tsv(), "NA");
        assert_eq!(Cell::Ratio(-1e-9).to_tsv(), "0.0000");
        assert_eq!(Cell::Real(f64::NAN).to_json(), Value::Null);
    }

    #[test]
    fn tsv_reparses() {
        let t = sample();
        let text = t.to_tsv("abc");
        assert!(text.starts_with("#artifact\tdemo\n#config_sha256\tabc\n#modules\tcorpuslab="));
        let p = parse_tsv(&text).unwrap();
        assert_eq!(p.artifact, "demo");
        assert_eq!(p.columns, t.columns);
        assert_eq!(p.rows, t.tsv_cells());
        assert_eq!(p.modules, t.module_versions());
    }

    #[test]
    fn json_reparses() {
        let t = sample();
        let p = parse_json(&t.to_json("abc")).unwrap();
        assert_eq!(p.config_sha256, "abc");
        assert_eq!(p.rows, t.json_cells());
        assert_eq!(p.rows[0][2], json!(0.6667));
        assert!(parse_json("{\"schema_version\": 2}").is_err());
    }

    #[test]
    fn matrix_layout() {
        let t = Table::matrix("m", &[], &["a".into(), "b".into()], &[vec![1.0, 0.0], vec![0.5, 1.0]]);
        assert_eq!(t.to_tsv("h").lines().skip(3).collect::<Vec<_>>(), ["Language\ta\tb", "a\t1.0000\t0.0000", "b\t0.5000\t1.0000"]);
    }
}
