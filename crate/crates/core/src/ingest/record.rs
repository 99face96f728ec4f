//! The raw visit record, derived-feature engineering, and the labeling rules.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Divisor floor for the consumption-rate guard: records with zero runtime
/// still get a finite (huge) rate and a quality flag.
pub const RATE_EPSILON_HOURS: f64 = 1e-6;

/// Geographic site group (city); the fairness and shift grouping unit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClusterId(pub String);

impl ClusterId {
    pub fn new(name: impl Into<String>) -> Self {
        ClusterId(name.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl std::fmt::Display for ClusterId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// The four record classes. `Normal` is the majority class in any valid
/// fleet export.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[repr(u8)]
pub enum AnomalyClass {
    #[default]
    Normal = 0,
    /// Fuel consumed while the generator never ran.
    ZeroRuntimeConsumption = 1,
    /// Runtime above 24 hours per day.
    ExcessRuntime = 2,
    /// Daily consumption above the generator's daily maximum.
    OverConsumption = 3,
}

impl AnomalyClass {
    pub const ALL: [AnomalyClass; 4] = [
        AnomalyClass::Normal,
        AnomalyClass::ZeroRuntimeConsumption,
        AnomalyClass::ExcessRuntime,
        AnomalyClass::OverConsumption,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn is_anomaly(self) -> bool {
        self != AnomalyClass::Normal
    }
}

impl std::fmt::Display for AnomalyClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Data-quality annotations attached while cleaning / engineering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QualityFlag {
    /// consumption_rate divided by the epsilon floor instead of runtime.
    RateDivisorClamped,
    /// Per-day features used divisor 1 because number_of_days was 0.
    ZeroDaysClamped,
    /// number_of_days was missing or inconsistent and was recomputed from dates.
    DaysImputed,
    /// maximum_consumption_per_day came from the cluster-level 95th percentile.
    ThresholdFromClusterPercentile,
}

/// One generator visit row: raw meter/fuel readings plus the derived
/// per-day features filled in by [`engineer_features`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TelemetryRecord {
    pub site_name: String,
    pub cluster: ClusterId,
    pub effective_date_of_visit: NaiveDate,
    pub previous_date_of_visit: NaiveDate,
    /// Whole days between the two visit dates. `None` until cleaned/repaired.
    pub number_of_days: Option<u32>,
    pub generator_capacity_kva: f64,
    pub current_hour_meter: f64,
    pub previous_hour_meter: f64,
    pub previous_fuel_qte: f64,
    pub qte_fuel_found: f64,
    pub qte_fuel_added: f64,
    pub total_qte_left: f64,
    pub consumption_his: f64,
    pub running_time: f64,
    // Derived features (populated by `engineer_features` when absent).
    pub consumption_rate: Option<f64>,
    pub running_time_per_day: Option<f64>,
    pub consumption_per_day_within_period: Option<f64>,
    pub fuel_consumed_between_visits: Option<f64>,
    pub fuel_consumed_between_visits_per_day: Option<f64>,
    pub maximum_consumption_per_day: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<QualityFlag>,
}

impl TelemetryRecord {
    /// A record with neutral identifiers and zeroed readings; tests and the
    /// feature-row reconstruction path fill in what they need.
    pub fn blank() -> Self {
        let date = NaiveDate::from_ymd_opt(2020, 1, 1).expect("valid date");
        TelemetryRecord {
            site_name: String::new(),
            cluster: ClusterId::new(""),
            effective_date_of_visit: date,
            previous_date_of_visit: date,
            number_of_days: Some(1),
            generator_capacity_kva: 1.0,
            current_hour_meter: 0.0,
            previous_hour_meter: 0.0,
            previous_fuel_qte: 0.0,
            qte_fuel_found: 0.0,
            qte_fuel_added: 0.0,
            total_qte_left: 0.0,
            consumption_his: 0.0,
            running_time: 0.0,
            consumption_rate: None,
            running_time_per_day: None,
            consumption_per_day_within_period: None,
            fuel_consumed_between_visits: None,
            fuel_consumed_between_visits_per_day: None,
            maximum_consumption_per_day: None,
            flags: Vec::new(),
        }
    }

    /// Days between visits as recorded, falling back to the date difference.
    pub fn days_between_visits(&self) -> u32 {
        self.number_of_days.unwrap_or_else(|| {
            (self.effective_date_of_visit - self.previous_date_of_visit).num_days().max(0) as u32
        })
    }

    fn push_flag(&mut self, flag: QualityFlag) {
        if !self.flags.contains(&flag) {
            self.flags.push(flag);
        }
    }
}

/// Populate the derived per-day features on a cleaned record.
///
/// Quantities already present (e.g. a supplied fuel_consumed_between_visits)
/// are kept; only absent fields are computed. Degenerate divisors are clamped
/// and flagged rather than producing non-finite values.
pub fn engineer_features(record: &TelemetryRecord) -> TelemetryRecord {
    let mut rec = record.clone();
    let days = rec.days_between_visits();
    let day_divisor = if days == 0 {
        rec.push_flag(QualityFlag::ZeroDaysClamped);
        1.0
    } else {
        days as f64
    };

    if rec.consumption_per_day_within_period.is_none() {
        rec.consumption_per_day_within_period = Some(rec.consumption_his / day_divisor);
    }
    if rec.running_time_per_day.is_none() {
        rec.running_time_per_day = Some(rec.running_time / day_divisor);
    }
    if rec.fuel_consumed_between_visits.is_none() {
        rec.fuel_consumed_between_visits =
            Some(rec.previous_fuel_qte + rec.qte_fuel_added - rec.qte_fuel_found);
    }
    if rec.fuel_consumed_between_visits_per_day.is_none() {
        rec.fuel_consumed_between_visits_per_day =
            Some(rec.fuel_consumed_between_visits.expect("just filled") / day_divisor);
    }
    if rec.consumption_rate.is_none() {
        let divisor = if rec.running_time < RATE_EPSILON_HOURS {
            rec.push_flag(QualityFlag::RateDivisorClamped);
            RATE_EPSILON_HOURS
        } else {
            rec.running_time
        };
        rec.consumption_rate = Some(rec.consumption_his / divisor);
    }
    rec
}

#[derive(Debug, Error, PartialEq)]
pub enum LabelError {
    #[error("record reaches the over-consumption rule but maximum_consumption_per_day is absent")]
    MissingThreshold,
    #[error("derived features missing; run engineer_features first")]
    NotEngineered,
}

/// Apply the labeling rules in fixed precedence order.
///
/// 1. consumption per day > 0 while runtime is exactly zero;
/// 2. runtime per day strictly above 24 h;
/// 3. consumption per day strictly above the generator's daily maximum;
/// otherwise normal. The first matching rule wins.
pub fn label_record(record: &TelemetryRecord) -> Result<AnomalyClass, LabelError> {
    let consumption_per_day = record
        .consumption_per_day_within_period
        .ok_or(LabelError::NotEngineered)?;
    let runtime_per_day = record.running_time_per_day.ok_or(LabelError::NotEngineered)?;

    if consumption_per_day > 0.0 && record.running_time == 0.0 {
        return Ok(AnomalyClass::ZeroRuntimeConsumption);
    }
    if runtime_per_day > 24.0 {
        return Ok(AnomalyClass::ExcessRuntime);
    }
    let max_per_day = record
        .maximum_consumption_per_day
        .ok_or(LabelError::MissingThreshold)?;
    if consumption_per_day > max_per_day {
        return Ok(AnomalyClass::OverConsumption);
    }
    Ok(AnomalyClass::Normal)
}

/// Rebuild a minimal engineered record from a feature row (used when
/// re-labeling exported labeled datasets). `features` must follow
/// [`crate::ingest::MODEL_FEATURES`] order.
pub fn record_from_features(features: &[f64], cluster: ClusterId) -> TelemetryRecord {
    let mut rec = TelemetryRecord::blank();
    rec.cluster = cluster;
    rec.number_of_days = Some(features[0].max(0.0).round() as u32);
    rec.generator_capacity_kva = features[1];
    rec.previous_fuel_qte = features[2];
    rec.qte_fuel_found = features[3];
    rec.qte_fuel_added = features[4];
    rec.total_qte_left = features[5];
    rec.consumption_his = features[6];
    rec.running_time = features[7];
    rec.consumption_rate = Some(features[8]);
    rec.running_time_per_day = Some(features[9]);
    rec.consumption_per_day_within_period = Some(features[10]);
    rec.fuel_consumed_between_visits = Some(features[11]);
    rec.fuel_consumed_between_visits_per_day = Some(features[12]);
    rec.maximum_consumption_per_day = Some(features[13]);
    rec
}
