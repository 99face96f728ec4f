//! Stratified train/test splitting and fold assignment.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::dataset::{LabeledDataset, SplitTag};
use super::record::AnomalyClass;
use crate::util::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum StratifyBy {
    #[default]
    Label,
    LabelAndCluster,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitSpec {
    pub test_fraction: f64,
    pub seed: u64,
    pub stratify_by: StratifyBy,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec { test_fraction: 0.25, seed: 0, stratify_by: StratifyBy::Label }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SplitError {
    #[error("dataset has {0} rows; at least 8 required")]
    TooFewRows(usize),
    #[error("test_fraction {0} outside (0, 1)")]
    BadFraction(f64),
}

/// Warnings emitted by [`split_stratified`]; singleton classes go to train.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SplitWarning {
    ClassSingleton(AnomalyClass),
}

/// Stratified split: per-stratum test share within one row of
/// `test_fraction`, deterministic under a fixed seed.
pub fn split_stratified(
    ds: &LabeledDataset,
    spec: &SplitSpec,
) -> Result<(LabeledDataset, LabeledDataset, Vec<SplitWarning>), SplitError> {
    if ds.n() < 8 {
        return Err(SplitError::TooFewRows(ds.n()));
    }
    if !(spec.test_fraction > 0.0 && spec.test_fraction < 1.0) {
        return Err(SplitError::BadFraction(spec.test_fraction));
    }

    let mut rng = rng_from_seed(spec.seed);
    let mut warnings = Vec::new();
    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();

    for stratum in strata(ds, spec.stratify_by) {
        let mut idx = stratum.clone();
        if idx.len() == 1 {
            warnings.push(SplitWarning::ClassSingleton(ds.labels[idx[0]]));
            train_idx.push(idx[0]);
            continue;
        }
        idx.shuffle(&mut rng);
        let mut n_test = (spec.test_fraction * idx.len() as f64).round() as usize;
        // Keep at least one row on each side; guarantee a test row for
        // strata of at least 4.
        n_test = n_test.min(idx.len() - 1);
        if idx.len() >= 4 {
            n_test = n_test.max(1);
        }
        test_idx.extend_from_slice(&idx[..n_test]);
        train_idx.extend_from_slice(&idx[n_test..]);
    }

    train_idx.sort_unstable();
    test_idx.sort_unstable();
    let train = ds.subset(&train_idx).with_tag(SplitTag::Train);
    let test = ds.subset(&test_idx).with_tag(SplitTag::Test);
    Ok((train, test, warnings))
}

/// Group row indices by the stratification key, in deterministic key order.
fn strata(ds: &LabeledDataset, by: StratifyBy) -> Vec<Vec<usize>> {
    let mut groups: std::collections::BTreeMap<(usize, String), Vec<usize>> = Default::default();
    for i in 0..ds.n() {
        let key = match by {
            StratifyBy::Label => (ds.labels[i].index(), String::new()),
            StratifyBy::LabelAndCluster => {
                (ds.labels[i].index(), ds.clusters[i].as_str().to_string())
            }
        };
        groups.entry(key).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Assign a fold index in `0..folds` to every row, stratified by label and
/// seed-deterministic. Used by cross-validation and grid search.
pub fn stratified_fold_assignment(ds: &LabeledDataset, folds: usize, seed: u64) -> Vec<usize> {
    assert!(folds >= 2, "at least 2 folds");
    let mut rng = rng_from_seed(seed);
    let mut assignment = vec![0usize; ds.n()];
    let mut offset = 0usize;
    for stratum in strata(ds, StratifyBy::Label) {
        let mut idx = stratum;
        idx.shuffle(&mut rng);
        for (pos, &row) in idx.iter().enumerate() {
            assignment[row] = (offset + pos) % folds;
        }
        // Stagger the next stratum so small strata do not pile into fold 0.
        offset += idx.len();
    }
    assignment
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::record::ClusterId;

    fn ds_with_hist(counts: &[(AnomalyClass, usize)]) -> LabeledDataset {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for &(class, n) in counts {
            for i in 0..n {
                rows.push(vec![i as f64, class.index() as f64]);
                labels.push(class);
            }
        }
        let n = rows.len();
        LabeledDataset::new(
            vec!["a".into(), "b".into()],
            rows,
            labels,
            vec![ClusterId::new("c"); n],
        )
    }

    #[test]
    fn per_class_share_within_one_row() {
        let ds = ds_with_hist(&[(AnomalyClass::Normal, 80), (AnomalyClass::ExcessRuntime, 20)]);
        let (train, test, warnings) =
            split_stratified(&ds, &SplitSpec { test_fraction: 0.25, ..Default::default() })
                .unwrap();
        assert!(warnings.is_empty());
        let test_hist = test.class_histogram();
        assert!((test_hist[0] as i64 - 20).abs() <= 1);
        assert!((test_hist[2] as i64 - 5).abs() <= 1);
        assert_eq!(train.n() + test.n(), 100);
        assert_eq!(train.split_tag, SplitTag::Train);
        assert_eq!(test.split_tag, SplitTag::Test);
    }

    #[test]
    fn deterministic_under_seed() {
        let ds = ds_with_hist(&[(AnomalyClass::Normal, 30), (AnomalyClass::OverConsumption, 10)]);
        let spec = SplitSpec { test_fraction: 0.25, seed: 77, ..Default::default() };
        let (tr1, te1, _) = split_stratified(&ds, &spec).unwrap();
        let (tr2, te2, _) = split_stratified(&ds, &spec).unwrap();
        assert_eq!(tr1, tr2);
        assert_eq!(te1, te2);
    }

    #[test]
    fn disjoint_and_complete() {
        let ds = ds_with_hist(&[(AnomalyClass::Normal, 40), (AnomalyClass::ExcessRuntime, 8)]);
        let (train, test, _) = split_stratified(&ds, &SplitSpec::default()).unwrap();
        let mut all: Vec<Vec<f64>> = train.rows.iter().chain(test.rows.iter()).cloned().collect();
        all.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut orig = ds.rows.clone();
        orig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(all, orig);
    }

    #[test]
    fn half_split_of_four_balanced_rows() {
        let ds = ds_with_hist(&[(AnomalyClass::Normal, 4), (AnomalyClass::ExcessRuntime, 4)]);
        let spec = SplitSpec { test_fraction: 0.5, ..Default::default() };
        let (train, test, _) = split_stratified(&ds, &spec).unwrap();
        assert_eq!(train.class_histogram()[0], 2);
        assert_eq!(train.class_histogram()[2], 2);
        assert_eq!(test.class_histogram()[0], 2);
        assert_eq!(test.class_histogram()[2], 2);
    }

    #[test]
    fn singleton_class_goes_to_train_with_warning() {
        let ds = ds_with_hist(&[(AnomalyClass::Normal, 10), (AnomalyClass::OverConsumption, 1)]);
        let (train, _, warnings) = split_stratified(&ds, &SplitSpec::default()).unwrap();
        assert_eq!(warnings, vec![SplitWarning::ClassSingleton(AnomalyClass::OverConsumption)]);
        assert_eq!(train.class_histogram()[3], 1);
    }

    #[test]
    fn too_few_rows_rejected() {
        let ds = ds_with_hist(&[(AnomalyClass::Normal, 7)]);
        assert_eq!(
            split_stratified(&ds, &SplitSpec::default()).unwrap_err(),
            SplitError::TooFewRows(7)
        );
    }

    #[test]
    fn fold_assignment_is_stratified() {
        let ds = ds_with_hist(&[(AnomalyClass::Normal, 50), (AnomalyClass::ExcessRuntime, 10)]);
        let assignment = stratified_fold_assignment(&ds, 5, 3);
        for fold in 0..5 {
            let minority_in_fold = (0..ds.n())
                .filter(|&i| assignment[i] == fold && ds.labels[i] == AnomalyClass::ExcessRuntime)
                .count();
            assert_eq!(minority_in_fold, 2);
        }
    }
}
