//! Telemetry ingestion: parsing, cleaning, feature engineering, rule-based
//! labeling, splitting, standardization, and the synthetic fleet generator.

mod clean;
mod csvio;
mod dataset;
mod record;
mod split;
mod standardize;
mod synth;

pub use clean::{clean, CleanAction, CleaningLog, CleaningLogEntry};
pub use csvio::{
    export_dataset_csv, export_records_csv, import_dataset_csv, parse_csv, parse_csv_reader,
    write_cleaning_log_jsonl, ColumnSchema, ParseDiagnostic, ParseError, ParseOutput,
};
pub use dataset::{
    dataset_hash, feature_row, label_dataset, LabelDiagnostic, LabeledDataset, RowOrigin,
    SplitTag, MODEL_FEATURES,
};
pub use record::{
    engineer_features, label_record, record_from_features, AnomalyClass, ClusterId, LabelError,
    QualityFlag, TelemetryRecord, RATE_EPSILON_HOURS,
};
pub use split::{
    split_stratified, stratified_fold_assignment, SplitError, SplitSpec, SplitWarning, StratifyBy,
};
pub use standardize::Standardizer;
pub use synth::{generate_synthetic_fleet, AnomalyRates, FleetConfig, FleetConfigError};
