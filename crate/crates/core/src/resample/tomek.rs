//! Tomek-link cleaning: remove the majority-class member of each
//! mutual-nearest-neighbor pair with differing labels.

use super::ResampleError;
use crate::ingest::LabeledDataset;
use crate::util::sq_dist;

/// Remove the locally-majority member of every Tomek link.
///
/// Nearest neighbors break distance ties by lower row index. Links are
/// detected against the original dataset, then removals applied at once.
/// When the two linked classes have equal counts neither member is removed.
pub fn tomek_links(ds: &LabeledDataset) -> Result<LabeledDataset, ResampleError> {
    super::guard_train(ds)?;
    let n = ds.n();
    if n < 2 {
        return Err(ResampleError::TooSmall);
    }

    let nn: Vec<usize> = (0..n).map(|i| nearest(ds, i)).collect();
    let hist = ds.class_histogram();

    let mut remove = vec![false; n];
    for a in 0..n {
        let b = nn[a];
        if b > a && nn[b] == a && ds.labels[a] != ds.labels[b] {
            let (ca, cb) = (hist[ds.labels[a].index()], hist[ds.labels[b].index()]);
            if ca > cb {
                remove[a] = true;
            } else if cb > ca {
                remove[b] = true;
            }
        }
    }

    let keep: Vec<usize> = (0..n).filter(|&i| !remove[i]).collect();
    Ok(ds.subset(&keep))
}

fn nearest(ds: &LabeledDataset, i: usize) -> usize {
    let mut best = usize::MAX;
    let mut best_d = f64::INFINITY;
    for j in 0..ds.n() {
        if j == i {
            continue;
        }
        let d = sq_dist(&ds.rows[i], &ds.rows[j]);
        if d < best_d || (d == best_d && j < best) {
            best_d = d;
            best = j;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::AnomalyClass::*;
    use crate::resample::tests::toy_ds;

    #[test]
    fn majority_member_of_link_is_removed() {
        // (0.0, C0) and (0.1, C2) are mutual nearest neighbors; C0 is the
        // majority of the pair, so the point at 0.0 goes.
        let ds = toy_ds(&[
            (0.0, 0.0, Normal),
            (0.1, 0.0, ExcessRuntime),
            (5.0, 0.0, Normal),
        ]);
        let out = tomek_links(&ds).unwrap();
        assert_eq!(out.n(), 2);
        assert_eq!(out.rows[0], vec![0.1, 0.0]);
        assert_eq!(out.rows[1], vec![5.0, 0.0]);
    }

    #[test]
    fn single_class_unchanged() {
        let ds = toy_ds(&[(0.0, 0.0, Normal), (0.1, 0.0, Normal), (5.0, 0.0, Normal)]);
        let out = tomek_links(&ds).unwrap();
        assert_eq!(out, ds);
    }

    #[test]
    fn separated_classes_have_no_links() {
        let ds = toy_ds(&[
            (0.0, 0.0, Normal),
            (0.5, 0.0, Normal),
            (10.0, 0.0, ExcessRuntime),
            (10.5, 0.0, ExcessRuntime),
        ]);
        let out = tomek_links(&ds).unwrap();
        assert_eq!(out, ds);
    }

    #[test]
    fn equal_class_counts_remove_neither() {
        let ds = toy_ds(&[(0.0, 0.0, Normal), (0.1, 0.0, ExcessRuntime)]);
        let out = tomek_links(&ds).unwrap();
        assert_eq!(out.n(), 2);
    }
}
