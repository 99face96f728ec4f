//! The labeled feature matrix that every downstream module consumes.

use serde::{Deserialize, Serialize};

use super::record::{
    engineer_features, label_record, AnomalyClass, ClusterId, LabelError, QualityFlag,
    TelemetryRecord,
};
use crate::util::{quantile, sha256_hex};

/// The model feature set: the numeric telemetry columns, identifiers and
/// dates excluded. Order is the canonical column order of every matrix.
pub const MODEL_FEATURES: [&str; 14] = [
    "number_of_days",
    "generator_capacity_kva",
    "previous_fuel_qte",
    "qte_fuel_found",
    "qte_fuel_added",
    "total_qte_left",
    "consumption_his",
    "running_time",
    "consumption_rate",
    "running_time_per_day",
    "consumption_per_day_within_period",
    "fuel_consumed_between_visits",
    "fuel_consumed_between_visits_per_day",
    "maximum_consumption_per_day",
];

/// Which side of a split a dataset belongs to. Resampling refuses to touch
/// anything tagged `Test`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SplitTag {
    #[default]
    Unsplit,
    Train,
    Test,
}

/// Row provenance; SMOTE marks interpolated rows `Synthetic`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RowOrigin {
    #[default]
    Original,
    Synthetic,
}

/// Feature matrix + labels + cluster assignments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub feature_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<AnomalyClass>,
    pub clusters: Vec<ClusterId>,
    #[serde(default)]
    pub split_tag: SplitTag,
    #[serde(default)]
    pub origins: Vec<RowOrigin>,
}

impl LabeledDataset {
    pub fn new(
        feature_names: Vec<String>,
        rows: Vec<Vec<f64>>,
        labels: Vec<AnomalyClass>,
        clusters: Vec<ClusterId>,
    ) -> Self {
        let n = rows.len();
        let origins = vec![RowOrigin::Original; n];
        let ds = LabeledDataset { feature_names, rows, labels, clusters, split_tag: SplitTag::Unsplit, origins };
        ds.assert_consistent();
        ds
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn d(&self) -> usize {
        self.feature_names.len()
    }

    pub fn assert_consistent(&self) {
        let n = self.rows.len();
        assert_eq!(self.labels.len(), n, "labels length mismatch");
        assert_eq!(self.clusters.len(), n, "clusters length mismatch");
        assert_eq!(self.origins.len(), n, "origins length mismatch");
        for (i, row) in self.rows.iter().enumerate() {
            assert_eq!(row.len(), self.feature_names.len(), "row {i} width mismatch");
            assert!(row.iter().all(|v| v.is_finite()), "row {i} has non-finite cell");
        }
    }

    /// Per-class row counts indexed by class.
    pub fn class_histogram(&self) -> [usize; 4] {
        let mut hist = [0usize; 4];
        for label in &self.labels {
            hist[label.index()] += 1;
        }
        hist
    }

    /// Classes present, ascending.
    pub fn classes_present(&self) -> Vec<AnomalyClass> {
        let hist = self.class_histogram();
        AnomalyClass::ALL.iter().copied().filter(|c| hist[c.index()] > 0).collect()
    }

    /// Distinct clusters in first-appearance order.
    pub fn cluster_ids(&self) -> Vec<ClusterId> {
        let mut seen = Vec::new();
        for c in &self.clusters {
            if !seen.contains(c) {
                seen.push(c.clone());
            }
        }
        seen
    }

    /// New dataset from a subset of row indices (feature names shared).
    pub fn subset(&self, indices: &[usize]) -> LabeledDataset {
        LabeledDataset {
            feature_names: self.feature_names.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            clusters: indices.iter().map(|&i| self.clusters[i].clone()).collect(),
            split_tag: self.split_tag,
            origins: indices.iter().map(|&i| self.origins[i]).collect(),
        }
    }

    pub fn with_tag(mut self, tag: SplitTag) -> Self {
        self.split_tag = tag;
        self
    }

    /// Column index of a feature name.
    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|f| f == name)
    }
}

/// Content hash over feature names, rows, labels and clusters; used to pin
/// datasets inside reports.
pub fn dataset_hash(ds: &LabeledDataset) -> String {
    let mut buf = Vec::new();
    for name in &ds.feature_names {
        buf.extend_from_slice(name.as_bytes());
        buf.push(b';');
    }
    for (i, row) in ds.rows.iter().enumerate() {
        for v in row {
            buf.extend_from_slice(&v.to_bits().to_le_bytes());
        }
        buf.push(ds.labels[i].index() as u8);
        buf.extend_from_slice(ds.clusters[i].as_str().as_bytes());
        buf.push(b'\n');
    }
    sha256_hex(&buf)
}

/// A row that could not be labeled, with the reason; excluded from the matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelDiagnostic {
    pub row: usize,
    pub reason: String,
}

/// Assemble the feature matrix over [`MODEL_FEATURES`] and label every row.
///
/// Records missing the over-consumption threshold get the cluster-level 95th
/// percentile of consumption per day as a flagged fallback; rows that still
/// cannot be labeled are excluded and reported.
pub fn label_dataset(records: &[TelemetryRecord]) -> (LabeledDataset, Vec<LabelDiagnostic>) {
    let engineered: Vec<TelemetryRecord> = records.iter().map(engineer_features).collect();

    // Cluster-level p95 of consumption per day, the declared threshold fallback.
    let mut cluster_ids: Vec<ClusterId> = Vec::new();
    for rec in &engineered {
        if !cluster_ids.contains(&rec.cluster) {
            cluster_ids.push(rec.cluster.clone());
        }
    }
    let mut fallback: std::collections::BTreeMap<ClusterId, f64> = Default::default();
    for cid in &cluster_ids {
        let mut vals: Vec<f64> = engineered
            .iter()
            .filter(|r| &r.cluster == cid)
            .filter_map(|r| r.consumption_per_day_within_period)
            .collect();
        if !vals.is_empty() {
            vals.sort_by(|a, b| a.total_cmp(b));
            fallback.insert(cid.clone(), quantile(&vals, 0.95));
        }
    }

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut clusters = Vec::new();
    let mut diagnostics = Vec::new();

    for (i, rec) in engineered.iter().enumerate() {
        let mut rec = rec.clone();
        if rec.maximum_consumption_per_day.is_none() {
            if let Some(&p95) = fallback.get(&rec.cluster) {
                rec.maximum_consumption_per_day = Some(p95);
                rec.flags.push(QualityFlag::ThresholdFromClusterPercentile);
            }
        }
        match label_record(&rec) {
            Ok(label) => {
                rows.push(feature_row(&rec));
                labels.push(label);
                clusters.push(rec.cluster.clone());
            }
            Err(LabelError::MissingThreshold) => diagnostics.push(LabelDiagnostic {
                row: i,
                reason: "missing over-consumption threshold".into(),
            }),
            Err(LabelError::NotEngineered) => diagnostics.push(LabelDiagnostic {
                row: i,
                reason: "derived features missing".into(),
            }),
        }
    }

    let names = MODEL_FEATURES.iter().map(|s| s.to_string()).collect();
    (LabeledDataset::new(names, rows, labels, clusters), diagnostics)
}

/// Extract the feature vector of an engineered record in canonical order.
pub fn feature_row(rec: &TelemetryRecord) -> Vec<f64> {
    vec![
        rec.days_between_visits() as f64,
        rec.generator_capacity_kva,
        rec.previous_fuel_qte,
        rec.qte_fuel_found,
        rec.qte_fuel_added,
        rec.total_qte_left,
        rec.consumption_his,
        rec.running_time,
        rec.consumption_rate.unwrap_or(0.0),
        rec.running_time_per_day.unwrap_or(0.0),
        rec.consumption_per_day_within_period.unwrap_or(0.0),
        rec.fuel_consumed_between_visits.unwrap_or(0.0),
        rec.fuel_consumed_between_visits_per_day.unwrap_or(0.0),
        rec.maximum_consumption_per_day.unwrap_or(0.0),
    ]
}
