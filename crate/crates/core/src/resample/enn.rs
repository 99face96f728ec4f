//! Edited-nearest-neighbor cleaning.

use super::{ResampleConfig, ResampleError};
use crate::ingest::LabeledDataset;
use crate::util::k_nearest;

/// Remove every row whose label disagrees with the plurality label of its
/// `enn_k` nearest neighbors (self excluded).
///
/// Votes are counted against the original dataset and removals applied once,
/// no cascading. A tie at the top of the vote keeps the row.
pub fn enn(ds: &LabeledDataset, cfg: &ResampleConfig) -> Result<LabeledDataset, ResampleError> {
    super::guard_train(ds)?;
    let n = ds.n();
    let k = cfg.enn_k.max(1);
    if n <= k {
        return Err(ResampleError::TooSmall);
    }

    let keep: Vec<usize> = (0..n)
        .filter(|&i| {
            let neighbors = k_nearest(&ds.rows, &ds.rows[i], k, Some(i));
            let mut votes = [0usize; 4];
            for &j in &neighbors {
                votes[ds.labels[j].index()] += 1;
            }
            let top = *votes.iter().max().unwrap();
            let winners: Vec<usize> =
                (0..4).filter(|&c| votes[c] == top).collect();
            // Unique plurality different from the row's label -> remove.
            !(winners.len() == 1 && winners[0] != ds.labels[i].index())
        })
        .collect();
    Ok(ds.subset(&keep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::AnomalyClass::*;
    use crate::resample::tests::toy_ds;

    #[test]
    fn lone_point_in_foreign_cloud_is_removed() {
        let mut points = Vec::new();
        for i in 0..10 {
            points.push((i as f64 * 0.01, 0.0, Normal));
        }
        points.push((0.05, 0.001, ExcessRuntime));
        let ds = toy_ds(&points);
        let out = enn(&ds, &ResampleConfig { enn_k: 3, ..Default::default() }).unwrap();
        assert_eq!(out.n(), 10);
        assert!(out.labels.iter().all(|&l| l == Normal));
    }

    #[test]
    fn separated_classes_unchanged() {
        let ds = toy_ds(&[
            (0.0, 0.0, Normal),
            (0.1, 0.0, Normal),
            (0.2, 0.0, Normal),
            (0.3, 0.0, Normal),
            (9.0, 9.0, OverConsumption),
            (9.1, 9.0, OverConsumption),
            (9.2, 9.0, OverConsumption),
            (9.3, 9.0, OverConsumption),
        ]);
        let out = enn(&ds, &ResampleConfig { enn_k: 3, ..Default::default() }).unwrap();
        assert_eq!(out, ds);
    }

    #[test]
    fn tie_keeps_the_row_and_removal_does_not_cascade() {
        // Alternating labels on a line with k=2: the end points see one
        // neighbor of each class (tie -> kept), the middle points are
        // outvoted (removed). Both middle removals are computed against the
        // original data, not sequentially.
        let ds = toy_ds(&[
            (0.0, 0.0, Normal),
            (1.0, 0.0, ExcessRuntime),
            (2.0, 0.0, Normal),
            (3.0, 0.0, ExcessRuntime),
        ]);
        let out = enn(&ds, &ResampleConfig { enn_k: 2, ..Default::default() }).unwrap();
        assert_eq!(out.n(), 2);
        assert_eq!(out.rows[0], vec![0.0, 0.0]);
        assert_eq!(out.rows[1], vec![3.0, 0.0]);
    }
}
