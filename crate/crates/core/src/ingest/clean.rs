//! Record cleaning: a total function that drops or repairs bad rows and logs
//! every action.

use serde::{Deserialize, Serialize};

use super::record::TelemetryRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CleanAction {
    Drop,
    Repair,
}

/// One cleaning event: JSON-lines friendly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CleaningLogEntry {
    pub row: usize,
    pub field: String,
    pub action: CleanAction,
    pub reason: String,
}

pub type CleaningLog = Vec<CleaningLogEntry>;

/// Clean a batch of parsed records.
///
/// Drops rows with negative or non-finite quantities and inverted visit
/// dates, deduplicates on (site_name, effective_date_of_visit) keeping the
/// first occurrence, and repairs number_of_days from the visit dates when the
/// recorded value is missing or inconsistent.
pub fn clean(records: &[TelemetryRecord]) -> (Vec<TelemetryRecord>, CleaningLog) {
    let mut log = CleaningLog::new();
    let mut out: Vec<TelemetryRecord> = Vec::with_capacity(records.len());
    let mut seen_keys: std::collections::BTreeSet<(String, chrono::NaiveDate)> = Default::default();

    'rows: for (i, rec) in records.iter().enumerate() {
        let numeric_fields: [(&str, f64); 8] = [
            ("generator_capacity_kva", rec.generator_capacity_kva),
            ("current_hour_meter", rec.current_hour_meter),
            ("previous_hour_meter", rec.previous_hour_meter),
            ("previous_fuel_qte", rec.previous_fuel_qte),
            ("qte_fuel_found", rec.qte_fuel_found),
            ("qte_fuel_added", rec.qte_fuel_added),
            ("total_qte_left", rec.total_qte_left),
            ("consumption_his", rec.consumption_his),
        ];
        for (name, value) in numeric_fields {
            if !value.is_finite() {
                log.push(CleaningLogEntry {
                    row: i,
                    field: name.into(),
                    action: CleanAction::Drop,
                    reason: "non-finite quantity".into(),
                });
                continue 'rows;
            }
            if value < 0.0 {
                log.push(CleaningLogEntry {
                    row: i,
                    field: name.into(),
                    action: CleanAction::Drop,
                    reason: "negative quantity".into(),
                });
                continue 'rows;
            }
        }
        if !rec.running_time.is_finite() || rec.running_time < 0.0 {
            log.push(CleaningLogEntry {
                row: i,
                field: "running_time".into(),
                action: CleanAction::Drop,
                reason: if rec.running_time.is_finite() {
                    "negative quantity".into()
                } else {
                    "non-finite quantity".into()
                },
            });
            continue;
        }
        // Supplied derived fields must also be clean if present.
        let derived: [(&str, Option<f64>); 6] = [
            ("consumption_rate", rec.consumption_rate),
            ("running_time_per_day", rec.running_time_per_day),
            ("consumption_per_day_within_period", rec.consumption_per_day_within_period),
            ("fuel_consumed_between_visits", rec.fuel_consumed_between_visits),
            ("fuel_consumed_between_visits_per_day", rec.fuel_consumed_between_visits_per_day),
            ("maximum_consumption_per_day", rec.maximum_consumption_per_day),
        ];
        for (name, value) in derived {
            if let Some(v) = value {
                if !v.is_finite() || v < 0.0 {
                    log.push(CleaningLogEntry {
                        row: i,
                        field: name.into(),
                        action: CleanAction::Drop,
                        reason: "invalid derived quantity".into(),
                    });
                    continue 'rows;
                }
            }
        }
        if rec.effective_date_of_visit < rec.previous_date_of_visit {
            log.push(CleaningLogEntry {
                row: i,
                field: "effective_date_of_visit".into(),
                action: CleanAction::Drop,
                reason: "visit dates out of order".into(),
            });
            continue;
        }
        let key = (rec.site_name.clone(), rec.effective_date_of_visit);
        if !seen_keys.insert(key) {
            log.push(CleaningLogEntry {
                row: i,
                field: "site_name".into(),
                action: CleanAction::Drop,
                reason: "duplicate (site, effective_date) row".into(),
            });
            continue;
        }

        let mut rec = rec.clone();
        let date_days =
            (rec.effective_date_of_visit - rec.previous_date_of_visit).num_days() as u32;
        match rec.number_of_days {
            Some(d) if d == date_days => {}
            recorded => {
                rec.number_of_days = Some(date_days);
                rec.flags.push(super::record::QualityFlag::DaysImputed);
                log.push(CleaningLogEntry {
                    row: i,
                    field: "number_of_days".into(),
                    action: CleanAction::Repair,
                    reason: if recorded.is_none() {
                        "missing; recomputed from visit dates".into()
                    } else {
                        "inconsistent with visit dates; recomputed".into()
                    },
                });
            }
        }
        out.push(rec);
    }
    (out, log)
}
