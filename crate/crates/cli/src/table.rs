//! Coefficient tables and their CSV and JSON encodings.
//!
//! A table is a header (schema version, command, echoed config, summary)
//! plus rows keyed by `(partition, ghost_k)`. CSV carries the header as
//! `# key=value` comment lines above the column row.

use std::collections::BTreeMap;
use std::fs;

use lambda_euler::{Partition, Scalar, Tower};
use serde_json::{json, Map, Value};

use crate::config::Format;
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

const BASE_COLUMNS: [&str; 4] = ["partition", "ghost_k", "value_exact", "value_decimal"];
const COMPARE_COLUMNS: [&str; 3] = ["theory", "empirical", "abs_dev"];

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub partition: Partition,
    pub ghost_k: u32,
    pub value: Scalar,
    /// Theory value, empirical value and absolute deviation in compare mode.
    pub compare: Option<(Scalar, Scalar, f64)>,
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub command: String,
    pub config: Vec<(String, String)>,
    pub summary: Vec<(String, String)>,
    pub rows: Vec<Row>,
}

/// Tower shared by the row values; the rationals when every value is rational.
pub fn tower_of<'a>(values: impl IntoIterator<Item = &'a Scalar>) -> Tower {
    values.into_iter().map(Scalar::tower).find(|t| *t != Tower::RATIONAL).unwrap_or(Tower::RATIONAL)
}

impl Table {
    pub fn new(command: &str, config: Vec<(&'static str, String)>) -> Table {
        Table {
            command: command.to_string(),
            config: config.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            ..Table::default()
        }
    }

    pub fn summarize(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    /// Record the value tower so the table can be read back exactly.
    pub fn record_tower(&mut self) {
        let tower = tower_of(self.rows.iter().map(|r| &r.value));
        self.summarize("zeta_order", tower.zeta_order());
        self.summarize("sqrt_radicand", tower.sqrt_radicand().map(|q| q.to_string()).unwrap_or_default());
    }

    fn is_compare(&self) -> bool {
        self.rows.iter().any(|r| r.compare.is_some())
    }

    fn columns(&self) -> Vec<&'static str> {
        let mut cols = BASE_COLUMNS.to_vec();
        if self.is_compare() {
            cols.extend(COMPARE_COLUMNS);
        }
        cols
    }

    fn cells(row: &Row) -> Vec<String> {
        let mut out = vec![
            row.partition.to_string(),
            row.ghost_k.to_string(),
            row.value.to_string(),
            row.value.decimal(),
        ];
        if let Some((th, emp, dev)) = &row.compare {
            out.extend([th.to_string(), emp.to_string(), dev.to_string()]);
        }
        out
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> Result<String, CliError> {
        let mut out = format!("# schema_version={SCHEMA_VERSION}\n# command={}\n", self.command);
        for (k, v) in &self.config {
            out.push_str(&format!("# config.{k}={v}\n"));
        }
        for (k, v) in &self.summary {
            out.push_str(&format!("# summary.{k}={v}\n"));
        }
        let mut w = csv::WriterBuilder::new().quote_style(csv::QuoteStyle::Always).from_writer(Vec::new());
        w.write_record(self.columns())?;
        for row in &self.rows {
            w.write_record(Table::cells(row))?;
        }
        let body = w.into_inner().map_err(|e| CliError::Table(e.to_string()))?;
        out.push_str(&String::from_utf8(body).map_err(|e| CliError::Table(e.to_string()))?);
        Ok(out)
    }

    fn to_json(&self) -> Result<String, CliError> {
        let pairs = |v: &[(String, String)]| -> Map<String, Value> {
            v.iter().map(|(k, x)| (k.clone(), Value::String(x.clone()))).collect()
        };
        let cols = self.columns();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut obj: Map<String, Value> =
                    cols.iter().zip(Table::cells(r)).map(|(c, v)| (c.to_string(), Value::String(v))).collect();
                obj.insert("ghost_k".into(), json!(r.ghost_k));
                Value::Object(obj)
            })
            .collect();
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": pairs(&self.config),
            "summary": pairs(&self.summary),
            "rows": rows,
        });
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        Ok(text)
    }

    /// Read a table written by [`Table::render`], detecting the format.
    pub fn read(path: &str) -> Result<Table, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Table(format!("{path}: {e}")))?;
        if text.trim_start().starts_with('{') {
            Table::from_json(&text)
        } else {
            Table::from_csv(&text)
        }
    }

    fn from_csv(text: &str) -> Result<Table, CliError> {
        let mut table = Table::default();
        let mut version = None;
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            let (k, v) = line[1..]
                .trim_start()
                .split_once('=')
                .ok_or_else(|| CliError::Table(format!("malformed header line {line:?}")))?;
            if k == "schema_version" {
                version = Some(v.to_string());
            } else if k == "command" {
                table.command = v.to_string();
            } else if let Some(k) = k.strip_prefix("config.") {
                table.config.push((k.into(), v.into()));
            } else if let Some(k) = k.strip_prefix("summary.") {
                table.summary.push((k.into(), v.into()));
            }
        }
        check_version(version.as_deref())?;
        let tower = table.tower()?;
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let headers = r.headers()?.clone();
        let col = |name: &str| {
            headers.iter().position(|h| h == name).ok_or_else(|| CliError::Table(format!("missing column {name:?}")))
        };
        let (ip, ig, iv) = (col("partition")?, col("ghost_k")?, col("value_exact")?);
        for rec in r.records() {
            let rec = rec?;
            table.rows.push(parse_row(&rec[ip], &rec[ig], &rec[iv], tower)?);
        }
        Ok(table)
    }

    fn from_json(text: &str) -> Result<Table, CliError> {
        let doc: Value = serde_json::from_str(text)?;
        check_version(doc.get("schema_version").map(|v| v.to_string()).as_deref())?;
        let pairs = |key: &str| -> Vec<(String, String)> {
            doc.get(key)
                .and_then(Value::as_object)
                .map(|m| m.iter().map(|(k, v)| (k.clone(), v.as_str().unwrap_or_default().to_string())).collect())
                .unwrap_or_default()
        };
        let mut table = Table {
            command: doc.get("command").and_then(Value::as_str).unwrap_or_default().to_string(),
            config: pairs("config"),
            summary: pairs("summary"),
            rows: Vec::new(),
        };
        let tower = table.tower()?;
        let rows = doc.get("rows").and_then(Value::as_array).ok_or_else(|| CliError::Table("missing rows".into()))?;
        for row in rows {
            let field = |k: &str| -> Result<String, CliError> {
                match row.get(k) {
                    Some(Value::String(s)) => Ok(s.clone()),
                    Some(Value::Number(n)) => Ok(n.to_string()),
                    _ => Err(CliError::Table(format!("row lacks {k:?}"))),
                }
            };
            table.rows.push(parse_row(&field("partition")?, &field("ghost_k")?, &field("value_exact")?, tower)?);
        }
        Ok(table)
    }

    fn summary_value(&self, key: &str) -> Option<&str> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn tower(&self) -> Result<Tower, CliError> {
        let zeta = match self.summary_value("zeta_order") {
            Some(z) => z.parse().map_err(|_| CliError::Table(format!("bad zeta_order {z:?}")))?,
            None => 1,
        };
        let radicand = match self.summary_value("sqrt_radicand") {
            Some("") | None => None,
            Some(q) => Some(q.parse().map_err(|_| CliError::Table(format!("bad sqrt_radicand {q:?}")))?),
        };
        Ok(Tower::new(zeta, radicand)?)
    }

    /// Values keyed by `(partition, ghost_k)`.
    pub fn values(&self) -> BTreeMap<(Partition, u32), &Scalar> {
        self.rows.iter().map(|r| ((r.partition.clone(), r.ghost_k), &r.value)).collect()
    }
}

fn check_version(v: Option<&str>) -> Result<(), CliError> {
    match v {
        Some(v) if v.trim_matches('"') == SCHEMA_VERSION.to_string() => Ok(()),
        Some(v) => Err(CliError::Table(format!("unsupported schema_version {v}"))),
        None => Err(CliError::Table("missing schema_version".into())),
    }
}

fn parse_row(partition: &str, ghost_k: &str, value: &str, tower: Tower) -> Result<Row, CliError> {
    Ok(Row {
        partition: partition.parse()?,
        ghost_k: ghost_k.parse().map_err(|_| CliError::Table(format!("bad ghost_k {ghost_k:?}")))?,
        value: Scalar::parse(value, tower)?,
        compare: None,
    })
}

/// Join `theory` and `empirical` on `(partition, ghost_k)`.
///
/// Rows follow the empirical table; an absent theory coefficient is zero.
/// Each row's value is the exact difference `empirical - theory`.
pub fn join(theory: &Table, empirical: &Table) -> Result<(Vec<Row>, f64), CliError> {
    let th = theory.values();
    let mut rows = Vec::new();
    let mut max = 0.0f64;
    for r in &empirical.rows {
        let t = th.get(&(r.partition.clone(), r.ghost_k)).map(|s| (*s).clone()).unwrap_or_else(Scalar::zero);
        let diff = r.value.checked_sub(&t)?;
        let dev = diff.abs_f64();
        max = max.max(dev);
        rows.push(Row {
            partition: r.partition.clone(),
            ghost_k: r.ghost_k,
            value: diff,
            compare: Some((t, r.value.clone(), dev)),
        });
    }
    Ok((rows, max))
}
