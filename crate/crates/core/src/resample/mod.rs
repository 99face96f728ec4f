//! Training-split rebalancing: SMOTE oversampling, Tomek-link and ENN
//! cleaning, and the two hybrids.

mod enn;
mod smote;
mod tomek;

pub use enn::enn;
pub use smote::smote;
pub use tomek::tomek_links;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{LabeledDataset, SplitTag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ResampleMethod {
    #[default]
    None,
    Smote,
    SmoteTomek,
    SmoteEnn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResampleConfig {
    pub method: ResampleMethod,
    pub smote_k: usize,
    pub enn_k: usize,
    pub seed: u64,
}

impl Default for ResampleConfig {
    fn default() -> Self {
        ResampleConfig { method: ResampleMethod::None, smote_k: 5, enn_k: 3, seed: 0 }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ResampleError {
    #[error("resampling is restricted to training data; got a dataset tagged {0:?}")]
    TestSplitGuard(SplitTag),
    #[error("dataset must have at least 2 rows")]
    TooSmall,
}

/// Non-fatal notes (k reductions, skipped single-row classes).
pub type ResampleWarnings = Vec<String>;

/// Resampling must never see a test split.
pub(crate) fn guard_train(ds: &LabeledDataset) -> Result<(), ResampleError> {
    match ds.split_tag {
        SplitTag::Test => Err(ResampleError::TestSplitGuard(ds.split_tag)),
        _ => Ok(()),
    }
}

/// SMOTE followed by Tomek-link cleaning.
pub fn smote_tomek(
    ds: &LabeledDataset,
    cfg: &ResampleConfig,
) -> Result<(LabeledDataset, ResampleWarnings), ResampleError> {
    let (oversampled, warnings) = smote(ds, cfg)?;
    Ok((tomek_links(&oversampled)?, warnings))
}

/// SMOTE followed by edited-nearest-neighbor cleaning.
pub fn smote_enn(
    ds: &LabeledDataset,
    cfg: &ResampleConfig,
) -> Result<(LabeledDataset, ResampleWarnings), ResampleError> {
    let (oversampled, warnings) = smote(ds, cfg)?;
    Ok((enn(&oversampled, cfg)?, warnings))
}

/// Dispatch on the configured method; `None` passes the data through.
pub fn apply(
    ds: &LabeledDataset,
    cfg: &ResampleConfig,
) -> Result<(LabeledDataset, ResampleWarnings), ResampleError> {
    match cfg.method {
        ResampleMethod::None => {
            guard_train(ds)?;
            Ok((ds.clone(), Vec::new()))
        }
        ResampleMethod::Smote => smote(ds, cfg),
        ResampleMethod::SmoteTomek => smote_tomek(ds, cfg),
        ResampleMethod::SmoteEnn => smote_enn(ds, cfg),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::ingest::{AnomalyClass, ClusterId};

    pub(crate) fn toy_ds(points: &[(f64, f64, AnomalyClass)]) -> LabeledDataset {
        LabeledDataset::new(
            vec!["x".into(), "y".into()],
            points.iter().map(|&(x, y, _)| vec![x, y]).collect(),
            points.iter().map(|&(_, _, c)| c).collect(),
            vec![ClusterId::new("c"); points.len()],
        )
        .with_tag(SplitTag::Train)
    }

    #[test]
    fn test_split_is_rejected() {
        let mut ds = toy_ds(&[
            (0.0, 0.0, AnomalyClass::Normal),
            (1.0, 1.0, AnomalyClass::ExcessRuntime),
        ]);
        ds.split_tag = SplitTag::Test;
        let err = apply(&ds, &ResampleConfig::default()).unwrap_err();
        assert_eq!(err, ResampleError::TestSplitGuard(SplitTag::Test));
        for method in [ResampleMethod::Smote, ResampleMethod::SmoteTomek, ResampleMethod::SmoteEnn]
        {
            let cfg = ResampleConfig { method, ..Default::default() };
            assert!(matches!(apply(&ds, &cfg), Err(ResampleError::TestSplitGuard(_))));
        }
    }

    #[test]
    fn hybrids_are_sequential_compositions() {
        use AnomalyClass::*;
        let ds = toy_ds(&[
            (0.0, 0.0, Normal),
            (0.2, 0.1, Normal),
            (1.0, 1.0, Normal),
            (1.2, 0.9, Normal),
            (5.0, 5.0, ExcessRuntime),
            (5.2, 5.1, ExcessRuntime),
        ]);
        let cfg = ResampleConfig {
            method: ResampleMethod::SmoteTomek,
            smote_k: 1,
            seed: 9,
            ..Default::default()
        };
        let (inner, _) = smote(&ds, &cfg).unwrap();

        let (hybrid, _) = smote_tomek(&ds, &cfg).unwrap();
        assert_eq!(hybrid, tomek_links(&inner).unwrap());

        let (hybrid, _) = smote_enn(&ds, &cfg).unwrap();
        assert_eq!(hybrid, enn(&inner, &cfg).unwrap());
    }
}
