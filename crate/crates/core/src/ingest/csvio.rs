//! CSV input/output: header-matched parsing with row-level diagnostics,
//! byte-stable exports, and the labeled-dataset interchange format.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::clean::CleaningLog;
use super::dataset::{LabeledDataset, MODEL_FEATURES};
use super::record::{AnomalyClass, ClusterId, TelemetryRecord};

/// Maps canonical record fields to the column names found in the file.
/// Defaults are the upstream export headers; override entries to rename.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSchema {
    pub columns: BTreeMap<String, String>,
    /// Primary date pattern (ISO-8601) with one configurable fallback.
    pub date_format: String,
    pub date_format_fallback: String,
}

/// Canonical field keys, paired with the default header text.
const DEFAULT_COLUMNS: [(&str, &str); 20] = [
    ("site_name", "Site Name"),
    ("cluster", "Cluster"),
    ("effective_date_of_visit", "EFFECTIVE_DATE_OF_VISIT"),
    ("previous_date_of_visit", "PREVIOUS_DATE_OF_VISIT"),
    ("number_of_days", "NUMBER_OF_DAYS"),
    ("generator_capacity_kva", "GENERATOR_1_CAPACITY_(KVA)"),
    ("current_hour_meter", "CURRENT HOUR METER GE1"),
    ("previous_hour_meter", "PREVIOUS HOUR METER G1"),
    ("previous_fuel_qte", "PREVIOUS_FUEL_QTE"),
    ("qte_fuel_found", "QTE_FUEL_FOUND"),
    ("qte_fuel_added", "QTE_FUEL_ADDED"),
    ("total_qte_left", "TOTALE_QTE_LEFT"),
    ("consumption_his", "CONSUMPTION HIS"),
    ("running_time", "RUNNING_TIME"),
    ("consumption_rate", "CONSUMPTION_RATE"),
    ("running_time_per_day", "Running_time_per_day"),
    ("consumption_per_day_within_period", "Consumption_per_day_within_a_period"),
    ("fuel_consumed_between_visits", "Fuel_consumed_between_visits"),
    ("fuel_consumed_between_visits_per_day", "Fuel_consumed_between_visits_per_day"),
    ("maximum_consumption_per_day", "Maximum_consumption_per_day"),
];

/// Fields that must be present as columns; the rest are optional derived
/// columns filled by feature engineering when absent.
const REQUIRED_FIELDS: [&str; 14] = [
    "site_name",
    "cluster",
    "effective_date_of_visit",
    "previous_date_of_visit",
    "number_of_days",
    "generator_capacity_kva",
    "current_hour_meter",
    "previous_hour_meter",
    "previous_fuel_qte",
    "qte_fuel_found",
    "qte_fuel_added",
    "total_qte_left",
    "consumption_his",
    "running_time",
];

impl Default for ColumnSchema {
    fn default() -> Self {
        ColumnSchema {
            columns: DEFAULT_COLUMNS
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            date_format: "%Y-%m-%d".into(),
            date_format_fallback: "%m/%d/%Y".into(),
        }
    }
}

impl ColumnSchema {
    fn header_for<'a>(&'a self, field: &'a str) -> &'a str {
        self.columns.get(field).map(|s| s.as_str()).unwrap_or(field)
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("file has no rows")]
    EmptyFile,
    #[error("missing required column `{0}`")]
    MissingColumn(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// One unusable row, kept out of the record list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParseDiagnostic {
    /// 1-based data row (header excluded).
    pub row: usize,
    pub column: String,
    pub raw: String,
    pub reason: String,
}

#[derive(Debug)]
pub struct ParseOutput {
    pub records: Vec<TelemetryRecord>,
    pub diagnostics: Vec<ParseDiagnostic>,
}

pub fn parse_csv(path: impl AsRef<Path>, schema: &ColumnSchema) -> Result<ParseOutput, ParseError> {
    let file = std::fs::File::open(path.as_ref())?;
    parse_csv_reader(file, schema)
}

/// Header-matched parse; column order in the file is irrelevant.
pub fn parse_csv_reader<R: Read>(
    reader: R,
    schema: &ColumnSchema,
) -> Result<ParseOutput, ParseError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(false).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.is_empty() {
        return Err(ParseError::EmptyFile);
    }

    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    for (field, _) in DEFAULT_COLUMNS {
        let header = schema.header_for(field);
        if let Some(pos) = headers.iter().position(|h| h == header) {
            index.insert(field, pos);
        }
    }
    for field in REQUIRED_FIELDS {
        if !index.contains_key(field) {
            return Err(ParseError::MissingColumn(schema.header_for(field).to_string()));
        }
    }

    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    let mut saw_data = false;

    'rows: for (row_idx, row) in rdr.records().enumerate() {
        let row = row?;
        saw_data = true;
        let row_no = row_idx + 1;
        let cell = |field: &str| -> &str { index.get(field).map(|&i| row.get(i).unwrap_or("")).unwrap_or("") };

        macro_rules! bail_cell {
            ($field:expr, $raw:expr, $reason:expr) => {{
                diagnostics.push(ParseDiagnostic {
                    row: row_no,
                    column: schema.header_for($field).to_string(),
                    raw: $raw.to_string(),
                    reason: $reason.to_string(),
                });
                continue 'rows;
            }};
        }

        let mut rec = TelemetryRecord::blank();
        rec.site_name = cell("site_name").trim().to_string();
        rec.cluster = ClusterId::new(cell("cluster").trim());

        for (field, slot) in [
            ("effective_date_of_visit", 0usize),
            ("previous_date_of_visit", 1usize),
        ] {
            let raw = cell(field).trim();
            let parsed = NaiveDate::parse_from_str(raw, &schema.date_format)
                .or_else(|_| NaiveDate::parse_from_str(raw, &schema.date_format_fallback));
            match parsed {
                Ok(d) if slot == 0 => rec.effective_date_of_visit = d,
                Ok(d) => rec.previous_date_of_visit = d,
                Err(_) => bail_cell!(field, raw, "unparsable date"),
            }
        }

        let raw_days = cell("number_of_days").trim();
        rec.number_of_days = if raw_days.is_empty() {
            None
        } else {
            match raw_days.parse::<f64>() {
                Ok(v) if v.is_finite() && v >= 0.0 => Some(v.round() as u32),
                _ => bail_cell!("number_of_days", raw_days, "unparsable integer"),
            }
        };

        macro_rules! req_f64 {
            ($field:expr) => {{
                let raw = cell($field).trim();
                match raw.parse::<f64>() {
                    Ok(v) => v,
                    Err(_) => bail_cell!($field, raw, "unparsable number"),
                }
            }};
        }
        rec.generator_capacity_kva = req_f64!("generator_capacity_kva");
        rec.current_hour_meter = req_f64!("current_hour_meter");
        rec.previous_hour_meter = req_f64!("previous_hour_meter");
        rec.previous_fuel_qte = req_f64!("previous_fuel_qte");
        rec.qte_fuel_found = req_f64!("qte_fuel_found");
        rec.qte_fuel_added = req_f64!("qte_fuel_added");
        rec.total_qte_left = req_f64!("total_qte_left");
        rec.consumption_his = req_f64!("consumption_his");
        rec.running_time = req_f64!("running_time");

        macro_rules! opt_f64 {
            ($field:expr) => {{
                match index.get($field) {
                    None => None,
                    Some(_) => {
                        let raw = cell($field).trim();
                        if raw.is_empty() {
                            None
                        } else {
                            match raw.parse::<f64>() {
                                Ok(v) => Some(v),
                                Err(_) => bail_cell!($field, raw, "unparsable number"),
                            }
                        }
                    }
                }
            }};
        }
        rec.consumption_rate = opt_f64!("consumption_rate");
        rec.running_time_per_day = opt_f64!("running_time_per_day");
        rec.consumption_per_day_within_period = opt_f64!("consumption_per_day_within_period");
        rec.fuel_consumed_between_visits = opt_f64!("fuel_consumed_between_visits");
        rec.fuel_consumed_between_visits_per_day = opt_f64!("fuel_consumed_between_visits_per_day");
        rec.maximum_consumption_per_day = opt_f64!("maximum_consumption_per_day");

        records.push(rec);
    }

    if !saw_data && records.is_empty() {
        return Err(ParseError::EmptyFile);
    }
    Ok(ParseOutput { records, diagnostics })
}

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Write records using the default header names; deterministic bytes for
/// deterministic input.
pub fn export_records_csv<W: Write>(records: &[TelemetryRecord], writer: W) -> csv::Result<()> {
    let schema = ColumnSchema::default();
    let mut wtr = csv::Writer::from_writer(writer);
    let headers: Vec<&str> = DEFAULT_COLUMNS.iter().map(|(f, _)| schema.header_for(f)).collect();
    wtr.write_record(&headers)?;
    for rec in records {
        wtr.write_record(&[
            rec.site_name.clone(),
            rec.cluster.as_str().to_string(),
            rec.effective_date_of_visit.format("%Y-%m-%d").to_string(),
            rec.previous_date_of_visit.format("%Y-%m-%d").to_string(),
            rec.number_of_days.map(|d| d.to_string()).unwrap_or_default(),
            fmt_f64(rec.generator_capacity_kva),
            fmt_f64(rec.current_hour_meter),
            fmt_f64(rec.previous_hour_meter),
            fmt_f64(rec.previous_fuel_qte),
            fmt_f64(rec.qte_fuel_found),
            fmt_f64(rec.qte_fuel_added),
            fmt_f64(rec.total_qte_left),
            fmt_f64(rec.consumption_his),
            fmt_f64(rec.running_time),
            fmt_opt(rec.consumption_rate),
            fmt_opt(rec.running_time_per_day),
            fmt_opt(rec.consumption_per_day_within_period),
            fmt_opt(rec.fuel_consumed_between_visits),
            fmt_opt(rec.fuel_consumed_between_visits_per_day),
            fmt_opt(rec.maximum_consumption_per_day),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Labeled-dataset interchange format: one column per feature plus `label`
/// (0..=3) and `cluster`.
pub fn export_dataset_csv<W: Write>(ds: &LabeledDataset, writer: W) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let mut headers: Vec<String> = ds.feature_names.clone();
    headers.push("label".into());
    headers.push("cluster".into());
    wtr.write_record(&headers)?;
    for i in 0..ds.n() {
        let mut row: Vec<String> = ds.rows[i].iter().map(|&v| fmt_f64(v)).collect();
        row.push(ds.labels[i].index().to_string());
        row.push(ds.clusters[i].as_str().to_string());
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Read back the interchange format written by [`export_dataset_csv`].
pub fn import_dataset_csv<R: Read>(reader: R) -> Result<LabeledDataset, ParseError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    let label_idx = headers
        .iter()
        .position(|h| h == "label")
        .ok_or_else(|| ParseError::MissingColumn("label".into()))?;
    let cluster_idx = headers
        .iter()
        .position(|h| h == "cluster")
        .ok_or_else(|| ParseError::MissingColumn("cluster".into()))?;
    let feature_cols: Vec<(usize, String)> = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != label_idx && *i != cluster_idx)
        .map(|(i, h)| (i, h.to_string()))
        .collect();
    // Feature-matrix exports carry the canonical features; enforce that so
    // relabeling stays well-defined.
    for feat in MODEL_FEATURES {
        if !feature_cols.iter().any(|(_, h)| h == feat) {
            return Err(ParseError::MissingColumn(feat.into()));
        }
    }

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut clusters = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let mut values = Vec::with_capacity(feature_cols.len());
        for (i, _) in &feature_cols {
            let raw = row.get(*i).unwrap_or("");
            values.push(raw.parse::<f64>().map_err(|_| {
                ParseError::MissingColumn(format!("unparsable numeric cell `{raw}`"))
            })?);
        }
        let label_raw = row.get(label_idx).unwrap_or("");
        let label = label_raw
            .parse::<usize>()
            .ok()
            .and_then(AnomalyClass::from_index)
            .ok_or_else(|| ParseError::MissingColumn(format!("bad label `{label_raw}`")))?;
        rows.push(values);
        labels.push(label);
        clusters.push(ClusterId::new(row.get(cluster_idx).unwrap_or("")));
    }
    let names = feature_cols.into_iter().map(|(_, h)| h).collect();
    Ok(LabeledDataset::new(names, rows, labels, clusters))
}

/// Cleaning log as JSON lines, one object per action.
pub fn write_cleaning_log_jsonl<W: Write>(log: &CleaningLog, mut writer: W) -> std::io::Result<()> {
    for entry in log {
        let line = serde_json::to_string(entry).expect("log entry serializes");
        writeln!(writer, "{line}")?;
    }
    Ok(())
}
