use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use qchardy_core::classify::Classification;
use serde::{Deserialize, Serialize};

use crate::spec::ExperimentSpec;
use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowClass {
    Converged,
    Diverging,
    Undetermined,
    Pass,
    Fail,
}

impl RowClass {
    pub fn as_str(self) -> &'static str {
        match self {
            RowClass::Converged => "converged",
            RowClass::Diverging => "diverging",
            RowClass::Undetermined => "undetermined",
            RowClass::Pass => "pass",
            RowClass::Fail => "fail",
        }
    }

    pub fn verdict(ok: bool) -> Self {
        if ok {
            RowClass::Pass
        } else {
            RowClass::Fail
        }
    }
}

impl From<Classification> for RowClass {
    fn from(c: Classification) -> Self {
        match c {
            Classification::Converged => RowClass::Converged,
            Classification::Diverging => RowClass::Diverging,
            Classification::Undetermined => RowClass::Undetermined,
        }
    }
}

impl fmt::Display for RowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// JSON has no infinities, so non-finite values travel as the strings `inf`, `-inf`, `nan`.
mod float {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(&x.to_string().to_lowercase())
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(x) => Ok(x),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub quantity: String,
    #[serde(with = "float")]
    pub value: f64,
    #[serde(with = "float")]
    pub error: f64,
    pub classification: RowClass,
}

impl Row {
    pub fn new(quantity: impl Into<String>, value: f64, error: f64, classification: impl Into<RowClass>) -> Self {
        Self {
            quantity: quantity.into(),
            value,
            error,
            classification: classification.into(),
        }
    }

    /// An assertion row: `value` is the tested quantity, `error` the tolerance or discrepancy.
    pub fn check(quantity: impl Into<String>, value: f64, error: f64, ok: bool) -> Self {
        Self::new(quantity, value, error, RowClass::verdict(ok))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    /// Only recorded on request, so that reports stay byte-identical across runs by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    #[serde(default)]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub spec: ExperimentSpec,
    /// Sorted by quantity name.
    pub rows: Vec<Row>,
    pub metadata: Metadata,
}

impl ExperimentReport {
    pub fn new(spec: ExperimentSpec, mut rows: Vec<Row>, notes: Vec<String>) -> Self {
        rows.sort_by(|a, b| a.quantity.cmp(&b.quantity));
        Self {
            spec,
            rows,
            metadata: Metadata {
                version: env!("CARGO_PKG_VERSION").to_string(),
                wall_time_s: None,
                notes,
            },
        }
    }

    pub fn row(&self, quantity: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }

    /// No row is classified `fail`.
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.classification != RowClass::Fail)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["quantity", "value", "error", "classification"])?;
        for r in &self.rows {
            w.write_record([
                r.quantity.as_str(),
                &r.value.to_string(),
                &r.error.to_string(),
                r.classification.as_str(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::UnknownFormat(s.to_string())),
        }
    }
}

/// Writes the report to `path`.
pub fn emit(report: &ExperimentReport, format: Format, path: &Path) -> Result<()> {
    let text = report.render(format)?;
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = fs::File::create(path).map_err(io)?;
    file.write_all(text.as_bytes()).map_err(io)?;
    Ok(())
}
