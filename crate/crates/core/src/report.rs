//! Run reports emitted by the command surface.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(crate::Error::InvalidArgument(format!(
                "format must be json, csv or text, got {other}"
            ))),
        }
    }
}

/// Hex SHA-256 of the input bytes.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 of each input file, in flag order.
    pub input_digests: Vec<String>,
    /// Every tolerance, seed and guard that influenced the run.
    pub parameters: Map<String, Value>,
    /// `OK`, `PASS`, `FAIL` or `VIOLATION`.
    pub status: String,
    pub results: Value,
    pub wall_time_s: f64,
    /// Table for `--format csv` when the command has one.
    #[serde(skip)]
    pub table: Option<String>,
}

impl RunReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => match &self.table {
                Some(t) => t.clone(),
                None => self.render_key_value_csv(),
            },
            Format::Text => self.render_text(),
        }
    }

    fn flat_results(&self) -> Vec<(String, String)> {
        match &self.results {
            Value::Object(m) => m.iter().map(|(k, v)| (k.clone(), compact(v))).collect(),
            other => vec![("result".into(), compact(other))],
        }
    }

    fn render_key_value_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["key", "value"]).expect("in-memory write");
        w.write_record(["status", &self.status])
            .expect("in-memory write");
        for (k, v) in self.flat_results() {
            w.write_record([k, v]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }

    fn render_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.command, self.status);
        for (k, v) in &self.parameters {
            out.push_str(&format!("  param {k} = {}\n", compact(v)));
        }
        for (k, v) in self.flat_results() {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        out.push_str(&format!("  wall time {:.3} s\n", self.wall_time_s));
        out
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
