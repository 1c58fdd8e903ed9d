//! Dataset ingestion and result serialization.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::estimators::PairedSample;
use crate::testing::TestResult;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DatasetMetadata {
    pub marker_name: String,
    pub covariate_name: String,
    /// Stored markers are the negation of the raw column.
    pub negated: bool,
    /// Rows dropped because a used column was missing.
    pub dropped_rows: usize,
}

/// Diseased (F) and healthy (G) samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyDataset {
    pub diseased: PairedSample,
    pub healthy: PairedSample,
    #[serde(default)]
    pub metadata: DatasetMetadata,
}

impl StudyDataset {
    pub fn new(diseased: PairedSample, healthy: PairedSample) -> Result<Self> {
        Ok(Self {
            diseased,
            healthy,
            metadata: DatasetMetadata {
                marker_name: "marker".into(),
                covariate_name: "covariate".into(),
                ..Default::default()
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvOptions {
    pub status_col: String,
    pub marker_col: String,
    pub covariate_col: String,
    pub negate_marker: bool,
    /// Status value marking the diseased population.
    pub positive_label: String,
    pub negative_label: String,
    pub delimiter: u8,
}

impl CsvOptions {
    pub fn new(status_col: &str, marker_col: &str, covariate_col: &str) -> Self {
        Self {
            status_col: status_col.into(),
            marker_col: marker_col.into(),
            covariate_col: covariate_col.into(),
            negate_marker: false,
            positive_label: "1".into(),
            negative_label: "0".into(),
            delimiter: b',',
        }
    }
}

const MISSING: &[&str] = &["", "NA", "N/A", "NaN", "nan", "null", "NULL"];

fn label_matches(cell: &str, label: &str) -> bool {
    if cell == label {
        return true;
    }
    matches!((cell.parse::<f64>(), label.parse::<f64>()), (Ok(a), Ok(b)) if a == b)
}

/// Reads a CSV with a header row and splits it by status.
///
/// Rows with a missing value in any of the three used columns are dropped
/// and counted in `metadata.dropped_rows`.
pub fn read_csv(path: impl AsRef<Path>, opts: &CsvOptions) -> Result<StudyDataset> {
    let path = path.as_ref();
    let data_err = |message: String| Error::Data {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(opts.delimiter)
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => Error::Io {
                path: path.to_path_buf(),
                source,
            },
            other => data_err(format!("{other:?}")),
        })?;
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            data_err(format!(
                "missing column '{name}' (available: {})",
                headers.iter().collect::<Vec<_>>().join(", ")
            ))
        })
    };
    let (si, mi, ci) = (column(&opts.status_col)?, column(&opts.marker_col)?, column(&opts.covariate_col)?);

    let mut diseased = (Vec::new(), Vec::new());
    let mut healthy = (Vec::new(), Vec::new());
    let mut dropped = 0;
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let cell = |i: usize| record.get(i).unwrap_or("");
        let (status, marker, cov) = (cell(si), cell(mi), cell(ci));
        if [status, marker, cov].iter().any(|c| MISSING.contains(c)) {
            dropped += 1;
            continue;
        }
        let number = |s: &str, col: &str| -> Result<f64> {
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(data_err(format!("line {line}: column '{col}' value '{s}' is not a finite number"))),
            }
        };
        let marker = number(marker, &opts.marker_col)?;
        let cov = number(cov, &opts.covariate_col)?;
        let marker = if opts.negate_marker { -marker } else { marker };
        let target = if label_matches(status, &opts.positive_label) {
            &mut diseased
        } else if label_matches(status, &opts.negative_label) {
            &mut healthy
        } else {
            return Err(data_err(format!(
                "line {line}: status '{status}' is neither '{}' nor '{}'",
                opts.positive_label, opts.negative_label
            )));
        };
        target.0.push(cov);
        target.1.push(marker);
    }
    if diseased.1.is_empty() {
        return Err(data_err("no diseased rows".into()));
    }
    if healthy.1.is_empty() {
        return Err(data_err("no healthy rows".into()));
    }
    Ok(StudyDataset {
        diseased: PairedSample::new(diseased.0, diseased.1)?,
        healthy: PairedSample::new(healthy.0, healthy.1)?,
        metadata: DatasetMetadata {
            marker_name: opts.marker_col.clone(),
            covariate_name: opts.covariate_col.clone(),
            negated: opts.negate_marker,
            dropped_rows: dropped,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(invalid(format!("unknown format '{other}' (expected json or csv)"))),
        }
    }
}

/// Writes through a sibling temporary file so a failed write never leaves
/// a partial file at `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut tmp = PathBuf::from(path);
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".partial");
    tmp.set_file_name(name);
    fs::write(&tmp, bytes).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

#[derive(Serialize, Deserialize)]
struct ResultDocument {
    schema_version: u32,
    #[serde(flatten)]
    result: TestResult,
}

pub fn result_to_json(result: &TestResult) -> Result<String> {
    let doc = ResultDocument {
        schema_version: SCHEMA_VERSION,
        result: result.clone(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn result_from_json(text: &str) -> Result<TestResult> {
    let doc: ResultDocument = serde_json::from_str(text)?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(invalid(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            doc.schema_version
        )));
    }
    Ok(doc.result)
}

/// Curve block (one row per grid point), then statistics, then run
/// parameters. Numbers use the shortest representation that round-trips.
pub fn result_to_csv(result: &TestResult) -> String {
    use std::fmt::Write;
    let mut out = String::from("p,roc,aroc\n");
    for ((p, r), a) in result
        .roc_curve
        .grid()
        .points()
        .iter()
        .zip(result.roc_curve.values())
        .zip(result.aroc_curve.values())
    {
        let _ = writeln!(out, "{p},{r},{a}");
    }
    out.push_str("\ndistance,statistic,p_value\n");
    for (k, s) in &result.statistics {
        let _ = writeln!(out, "{k},{s},{}", result.p_values[k]);
    }
    out.push_str("\nparameter,value\n");
    let _ = writeln!(out, "schema_version,{SCHEMA_VERSION}");
    let _ = writeln!(out, "bootstrap_iterations,{}", result.bootstrap_iterations);
    let _ = writeln!(out, "seed,{}", result.seed);
    let _ = writeln!(out, "split_seed,{}", result.split.seed);
    let _ = writeln!(out, "rho,{}", result.split.rho);
    let _ = writeln!(out, "auc,{}", result.auc);
    let _ = writeln!(out, "aauc,{}", result.aauc);
    let _ = writeln!(out, "bandwidth_diseased,{}", result.bandwidths.diseased);
    let _ = writeln!(out, "bandwidth_healthy,{}", result.bandwidths.healthy);
    out
}

pub fn write_result(result: &TestResult, path: impl AsRef<Path>, format: OutputFormat) -> Result<()> {
    let text = match format {
        OutputFormat::Json => result_to_json(result)?,
        OutputFormat::Csv => result_to_csv(result),
    };
    write_atomic(path.as_ref(), text.as_bytes())
}

pub fn read_result(path: impl AsRef<Path>) -> Result<TestResult> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    result_from_json(&text)
}

/// Serializes any record list as CSV with a header row.
pub fn records_to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| invalid(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| invalid(e.to_string()))
}

/// JSON document with a top-level `schema_version`.
pub fn versioned_json<T: Serialize>(body: &T) -> Result<String> {
    let mut value = serde_json::to_value(body)?;
    if let serde_json::Value::Object(map) = &mut value {
        map.insert("schema_version".into(), SCHEMA_VERSION.into());
    }
    Ok(serde_json::to_string_pretty(&value)?)
}
