//! Synthetic fleet generator: deterministic visit records with injected,
//! rule-recoverable anomalies and an optional per-cluster mean shift.

use chrono::NaiveDate;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::record::{AnomalyClass, ClusterId, TelemetryRecord};
use crate::util::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnomalyRates {
    pub zero_runtime_consumption: f64,
    pub excess_runtime: f64,
    pub over_consumption: f64,
}

impl Default for AnomalyRates {
    fn default() -> Self {
        // < 15% anomalies in total.
        AnomalyRates { zero_runtime_consumption: 0.03, excess_runtime: 0.05, over_consumption: 0.06 }
    }
}

impl AnomalyRates {
    pub fn total(&self) -> f64 {
        self.zero_runtime_consumption + self.excess_runtime + self.over_consumption
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FleetConfig {
    pub clusters: usize,
    pub sites_per_cluster: usize,
    pub visits_per_site: usize,
    pub anomaly_rates: AnomalyRates,
    /// Scales a per-cluster ladder of feature-mean offsets; 0 means all
    /// clusters share one distribution.
    pub shift_strength: f64,
    pub seed: u64,
}

impl Default for FleetConfig {
    fn default() -> Self {
        FleetConfig {
            clusters: 5,
            sites_per_cluster: 8,
            visits_per_site: 25,
            anomaly_rates: AnomalyRates::default(),
            shift_strength: 0.0,
            seed: 0,
        }
    }
}

impl FleetConfig {
    pub fn total_records(&self) -> usize {
        self.clusters * self.sites_per_cluster * self.visits_per_site
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum FleetConfigError {
    #[error("anomaly rates sum to {0}; must be < 0.5")]
    RatesTooHigh(f64),
    #[error("anomaly rates must be non-negative")]
    NegativeRate,
    #[error("clusters, sites_per_cluster and visits_per_site must all be positive")]
    EmptyFleet,
    #[error("shift_strength must be >= 0")]
    NegativeShift,
}

/// Generate a fleet of visit records.
///
/// Class quotas are exact (rounded per class) and shuffled across the fleet,
/// so labeling the output recovers the configured rates up to rounding.
/// Injected rows keep a margin to every rule boundary: normal runtime stays
/// at or below 22 h/day, excess-runtime rows start at 24.5 h/day, and
/// over-consumption rows exceed the per-site daily maximum by at least 15%.
pub fn generate_synthetic_fleet(
    config: &FleetConfig,
) -> Result<Vec<TelemetryRecord>, FleetConfigError> {
    let rates = &config.anomaly_rates;
    if rates.zero_runtime_consumption < 0.0 || rates.excess_runtime < 0.0 || rates.over_consumption < 0.0
    {
        return Err(FleetConfigError::NegativeRate);
    }
    if rates.total() >= 0.5 {
        return Err(FleetConfigError::RatesTooHigh(rates.total()));
    }
    if config.clusters == 0 || config.sites_per_cluster == 0 || config.visits_per_site == 0 {
        return Err(FleetConfigError::EmptyFleet);
    }
    if config.shift_strength < 0.0 {
        return Err(FleetConfigError::NegativeShift);
    }

    let n = config.total_records();
    let mut rng = rng_from_seed(config.seed);

    // Exact per-class quotas, shuffled over all visit slots.
    let mut classes: Vec<AnomalyClass> = Vec::with_capacity(n);
    let quota = |rate: f64| (rate * n as f64).round() as usize;
    classes.extend(std::iter::repeat(AnomalyClass::ZeroRuntimeConsumption).take(quota(rates.zero_runtime_consumption)));
    classes.extend(std::iter::repeat(AnomalyClass::ExcessRuntime).take(quota(rates.excess_runtime)));
    classes.extend(std::iter::repeat(AnomalyClass::OverConsumption).take(quota(rates.over_consumption)));
    while classes.len() < n {
        classes.push(AnomalyClass::Normal);
    }
    classes.truncate(n);
    classes.shuffle(&mut rng);

    let norm = |mean: f64, sd: f64| Normal::new(mean, sd).expect("valid normal");
    let mut records = Vec::with_capacity(n);
    let mut slot = 0usize;

    for ci in 0..config.clusters {
        let cluster = ClusterId::new(format!("C{ci:02}"));
        // Ladder of mean offsets: cluster ci drifts proportionally to its
        // index, scaled by shift_strength.
        let drift = config.shift_strength * ci as f64;
        let runtime_mean = 13.0 + 1.5 * drift;
        let rate_mean_cluster = 6.0 + 0.8 * drift;
        let capacity_mean = 30.0 + 5.0 * drift;
        let refill_mean = 120.0 + 12.0 * drift;

        for si in 0..config.sites_per_cluster {
            let site_name = format!("C{ci:02}-S{si:03}");
            let capacity = norm(capacity_mean, 6.0).sample(&mut rng).max(10.0);
            let site_rate_mean = norm(rate_mean_cluster, 0.8).sample(&mut rng).max(3.5);
            // Daily maximum the generator is capable of: comfortably above
            // normal daily consumption for this site.
            let max_per_day = site_rate_mean * 24.0 * 1.4;

            let mut cursor = NaiveDate::from_ymd_opt(2020, 1, 1).expect("valid date");
            let mut hour_meter = rng.gen_range(1_000.0..5_000.0_f64).floor();

            for _ in 0..config.visits_per_site {
                let class = classes[slot];
                slot += 1;
                let days = rng.gen_range(3..=9u32);
                let previous_date = cursor;
                let effective_date = cursor + chrono::Days::new(days as u64);
                cursor = effective_date;

                let rate = norm(site_rate_mean, 0.5)
                    .sample(&mut rng)
                    .clamp(1.5, site_rate_mean + 1.2);
                let (runtime_per_day, consumption_per_day) = match class {
                    AnomalyClass::Normal => {
                        let rtpd = norm(runtime_mean, 3.5).sample(&mut rng).clamp(4.0, 22.0);
                        (rtpd, rate * rtpd)
                    }
                    AnomalyClass::ZeroRuntimeConsumption => {
                        let cpd = rng.gen_range(0.3..0.9) * site_rate_mean * 13.0;
                        (0.0, cpd)
                    }
                    AnomalyClass::ExcessRuntime => {
                        let rtpd = rng.gen_range(24.5..30.0);
                        (rtpd, rate * rtpd)
                    }
                    AnomalyClass::OverConsumption => {
                        let rtpd = norm(runtime_mean, 3.5).sample(&mut rng).clamp(4.0, 22.0);
                        let cpd = max_per_day * rng.gen_range(1.15..1.6);
                        (rtpd, cpd)
                    }
                };
                let running_time = runtime_per_day * days as f64;
                let consumption = consumption_per_day * days as f64;

                let qte_fuel_found = rng.gen_range(5.0..60.0);
                let qte_fuel_added = (norm(refill_mean, 25.0).sample(&mut rng)).max(20.0);
                let previous_fuel_qte = qte_fuel_found + consumption;
                let total_qte_left = qte_fuel_found + qte_fuel_added;
                let previous_hour_meter = hour_meter;
                hour_meter += running_time;

                records.push(TelemetryRecord {
                    site_name: site_name.clone(),
                    cluster: cluster.clone(),
                    effective_date_of_visit: effective_date,
                    previous_date_of_visit: previous_date,
                    number_of_days: Some(days),
                    generator_capacity_kva: round2(capacity),
                    current_hour_meter: round2(hour_meter),
                    previous_hour_meter: round2(previous_hour_meter),
                    previous_fuel_qte: round2(previous_fuel_qte),
                    qte_fuel_found: round2(qte_fuel_found),
                    qte_fuel_added: round2(qte_fuel_added),
                    total_qte_left: round2(total_qte_left),
                    consumption_his: round2(consumption),
                    running_time: round2(running_time),
                    consumption_rate: None,
                    running_time_per_day: None,
                    consumption_per_day_within_period: None,
                    fuel_consumed_between_visits: None,
                    fuel_consumed_between_visits_per_day: None,
                    maximum_consumption_per_day: Some(round2(max_per_day)),
                    flags: Vec::new(),
                });
            }
        }
    }
    Ok(records)
}

/// Two-decimal rounding keeps exports tidy without touching label margins.
fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}
