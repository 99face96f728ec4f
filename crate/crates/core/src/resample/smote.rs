//! Synthetic minority oversampling by convex interpolation between
//! same-class nearest neighbors.

use rand::Rng;

use super::{guard_train, ResampleConfig, ResampleError, ResampleWarnings};
use crate::ingest::{LabeledDataset, RowOrigin};
use crate::util::{k_nearest, rng_from_seed};

/// Oversample every non-majority class up to the majority count.
///
/// Each synthetic row is `x_i + u * (x_nn - x_i)` with `u ~ U[0,1]` and
/// `x_nn` one of the `smote_k` nearest same-class neighbors of `x_i`.
/// Original rows are preserved verbatim and synthetic rows are flagged in
/// `origins`. Classes with a single row cannot be interpolated and are
/// skipped with a warning; `smote_k` is reduced when a class is smaller
/// than `k + 1`.
pub fn smote(
    ds: &LabeledDataset,
    cfg: &ResampleConfig,
) -> Result<(LabeledDataset, ResampleWarnings), ResampleError> {
    guard_train(ds)?;
    if ds.n() < 2 {
        return Err(ResampleError::TooSmall);
    }

    let hist = ds.class_histogram();
    let majority = hist.iter().copied().max().unwrap_or(0);
    let mut rng = rng_from_seed(cfg.seed);
    let mut warnings = Vec::new();

    let mut out = ds.clone();
    for class in crate::ingest::AnomalyClass::ALL {
        let count = hist[class.index()];
        if count == 0 || count == majority {
            continue;
        }
        if count == 1 {
            warnings.push(format!(
                "class {class} has a single row; skipped by SMOTE"
            ));
            continue;
        }
        let member_idx: Vec<usize> =
            (0..ds.n()).filter(|&i| ds.labels[i] == class).collect();
        let members: Vec<Vec<f64>> = member_idx.iter().map(|&i| ds.rows[i].clone()).collect();
        let mut k = cfg.smote_k.max(1);
        if k >= count {
            k = count - 1;
            warnings.push(format!(
                "smote_k reduced to {k} for class {class} (class size {count})"
            ));
        }

        let deficit = majority - count;
        for s in 0..deficit {
            // Cycle through the class members so every row seeds synthetics.
            let base = s % members.len();
            let neighbors = k_nearest(&members, &members[base], k, Some(base));
            let pick = neighbors[rng.gen_range(0..neighbors.len())];
            let u: f64 = rng.gen_range(0.0..1.0);
            let row: Vec<f64> = members[base]
                .iter()
                .zip(&members[pick])
                .map(|(a, b)| a + u * (b - a))
                .collect();
            out.rows.push(row);
            out.labels.push(class);
            out.clusters.push(ds.clusters[member_idx[base]].clone());
            out.origins.push(RowOrigin::Synthetic);
        }
    }
    out.assert_consistent();
    Ok((out, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::AnomalyClass::{self, *};
    use crate::resample::tests::toy_ds;

    #[test]
    fn synthetic_point_lies_on_segment() {
        let ds = toy_ds(&[
            (0.0, 0.0, OverConsumption),
            (1.0, 1.0, OverConsumption),
            (5.0, 5.0, Normal),
            (6.0, 5.0, Normal),
            (7.0, 5.0, Normal),
        ]);
        let cfg = ResampleConfig { smote_k: 1, seed: 4, ..Default::default() };
        let (out, _) = smote(&ds, &cfg).unwrap();
        assert_eq!(out.class_histogram()[3], 3);
        let synthetic: Vec<&Vec<f64>> = out
            .rows
            .iter()
            .zip(&out.origins)
            .filter(|(_, &o)| o == RowOrigin::Synthetic)
            .map(|(r, _)| r)
            .collect();
        for row in synthetic {
            // On the segment between (0,0) and (1,1): both coordinates equal
            // and inside [0,1].
            assert!((row[0] - row[1]).abs() < 1e-12);
            assert!((0.0..=1.0).contains(&row[0]));
        }
    }

    #[test]
    fn balanced_input_is_unchanged() {
        let ds = toy_ds(&[
            (0.0, 0.0, Normal),
            (1.0, 0.0, Normal),
            (5.0, 5.0, ExcessRuntime),
            (6.0, 5.0, ExcessRuntime),
        ]);
        let (out, warnings) = smote(&ds, &ResampleConfig::default()).unwrap();
        assert_eq!(out, ds);
        assert!(warnings.is_empty());
    }

    #[test]
    fn oversamples_to_majority_count() {
        let mut points = Vec::new();
        for i in 0..100 {
            points.push((i as f64, 0.0, Normal));
        }
        for i in 0..10 {
            points.push((i as f64, 50.0, OverConsumption));
        }
        let ds = toy_ds(&points);
        let (out, _) = smote(&ds, &ResampleConfig { seed: 1, ..Default::default() }).unwrap();
        assert_eq!(out.class_histogram(), [100, 0, 0, 100]);
        // Originals preserved verbatim, in order.
        for i in 0..110 {
            assert_eq!(out.rows[i], ds.rows[i]);
        }
    }

    #[test]
    fn singleton_class_skipped_with_warning() {
        let ds = toy_ds(&[
            (0.0, 0.0, Normal),
            (1.0, 0.0, Normal),
            (9.0, 9.0, ZeroRuntimeConsumption),
        ]);
        let (out, warnings) = smote(&ds, &ResampleConfig::default()).unwrap();
        assert_eq!(out.class_histogram()[1], 1);
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("single row"));
    }

    #[test]
    fn deterministic_under_seed() {
        let mut points = vec![(0.0, 0.0, Normal); 20];
        for i in 0..20 {
            points[i] = (i as f64, (i * i) as f64 / 10.0, Normal);
        }
        points.push((3.0, 40.0, ExcessRuntime));
        points.push((4.0, 41.0, ExcessRuntime));
        points.push((5.0, 39.0, ExcessRuntime));
        let ds = toy_ds(&points);
        let cfg = ResampleConfig { smote_k: 2, seed: 123, ..Default::default() };
        let (a, _) = smote(&ds, &cfg).unwrap();
        let (b, _) = smote(&ds, &cfg).unwrap();
        assert_eq!(a, b);
    }

    /// Interpolated rows never leave the bounding box (a superset of the
    /// convex hull check per coordinate).
    #[test]
    fn synthetic_rows_stay_in_class_bounding_box() {
        use AnomalyClass::*;
        let mut points = Vec::new();
        for i in 0..30 {
            points.push(((i % 6) as f64, (i / 6) as f64, Normal));
        }
        points.extend_from_slice(&[
            (10.0, 10.0, OverConsumption),
            (12.0, 11.0, OverConsumption),
            (11.0, 13.0, OverConsumption),
            (10.5, 11.5, OverConsumption),
        ]);
        let ds = toy_ds(&points);
        let (out, _) =
            smote(&ds, &ResampleConfig { smote_k: 3, seed: 7, ..Default::default() }).unwrap();
        for (row, origin) in out.rows.iter().zip(&out.origins) {
            if *origin == RowOrigin::Synthetic {
                assert!((10.0..=12.0).contains(&row[0]));
                assert!((10.0..=13.0).contains(&row[1]));
            }
        }
    }
}
