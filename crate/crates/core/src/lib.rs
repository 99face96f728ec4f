//! Anomaly-detection toolkit for distributed generator telemetry.
//!
//! The pipeline mirrors how fleet telemetry is handled end to end: rule-based
//! labeling of raw visit records ([`ingest`]), hybrid rebalancing of the
//! training split ([`resample`]), a small family of classifiers with a uniform
//! probability contract ([`models`]), evaluation ([`metrics`]), Shapley
//! attributions ([`explain`]), and fairness / domain-shift audits ([`audit`]).

pub mod audit;
pub mod explain;
pub mod ingest;
pub mod metrics;
pub mod models;
pub mod pipeline;
pub mod resample;
pub mod util;

/// Crate version embedded in reports and persisted artifacts.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
