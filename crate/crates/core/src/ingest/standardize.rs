//! Column standardization fitted on training rows only.

use serde::{Deserialize, Serialize};

use super::dataset::LabeledDataset;

const CONSTANT_STD_FLOOR: f64 = 1e-12;

/// Per-column mean/std transform. Constant columns are flagged and map to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub std_devs: Vec<f64>,
    pub constant: Vec<bool>,
}

impl Standardizer {
    /// Fit on the given (training) rows; population standard deviation.
    pub fn fit(train: &LabeledDataset) -> Standardizer {
        let d = train.d();
        let n = train.n().max(1) as f64;
        let mut means = vec![0.0; d];
        for row in &train.rows {
            for (j, v) in row.iter().enumerate() {
                means[j] += v;
            }
        }
        for m in &mut means {
            *m /= n;
        }
        let mut vars = vec![0.0; d];
        for row in &train.rows {
            for (j, v) in row.iter().enumerate() {
                let dev = v - means[j];
                vars[j] += dev * dev;
            }
        }
        let mut std_devs = vec![0.0; d];
        let mut constant = vec![false; d];
        for j in 0..d {
            let s = (vars[j] / n).sqrt();
            if s < CONSTANT_STD_FLOOR {
                constant[j] = true;
                std_devs[j] = 1.0; // divisor unused; column maps to 0
            } else {
                std_devs[j] = s;
            }
        }
        Standardizer { means, std_devs, constant }
    }

    /// Indices of columns flagged constant during fit.
    pub fn constant_columns(&self) -> Vec<usize> {
        self.constant
            .iter()
            .enumerate()
            .filter_map(|(j, &c)| c.then_some(j))
            .collect()
    }

    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        assert_eq!(row.len(), self.means.len(), "feature width mismatch");
        row.iter()
            .enumerate()
            .map(|(j, v)| {
                if self.constant[j] {
                    0.0
                } else {
                    (v - self.means[j]) / self.std_devs[j]
                }
            })
            .collect()
    }

    /// Transform a whole dataset (any split; the parameters came from train).
    pub fn apply(&self, ds: &LabeledDataset) -> LabeledDataset {
        let mut out = ds.clone();
        out.rows = ds.rows.iter().map(|r| self.transform_row(r)).collect();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::record::{AnomalyClass, ClusterId};

    fn one_column(vals: &[f64]) -> LabeledDataset {
        LabeledDataset::new(
            vec!["x".into()],
            vals.iter().map(|&v| vec![v]).collect(),
            vec![AnomalyClass::Normal; vals.len()],
            vec![ClusterId::new("c"); vals.len()],
        )
    }

    #[test]
    fn population_std_example() {
        let ds = one_column(&[1.0, 2.0, 3.0]);
        let s = Standardizer::fit(&ds);
        let t = s.apply(&ds);
        let expect = 1.0 / (2.0f64 / 3.0).sqrt();
        assert!((t.rows[0][0] + expect).abs() < 1e-12);
        assert!(t.rows[1][0].abs() < 1e-12);
        assert!((t.rows[2][0] - expect).abs() < 1e-12);
        // expect ~= 1.2247
        assert!((expect - 1.224_744_871_391_589).abs() < 1e-12);
    }

    #[test]
    fn constant_column_maps_to_zero_with_warning() {
        let ds = one_column(&[5.0, 5.0, 5.0]);
        let s = Standardizer::fit(&ds);
        assert_eq!(s.constant_columns(), vec![0]);
        let t = s.apply(&ds);
        assert!(t.rows.iter().all(|r| r[0] == 0.0));
    }

    #[test]
    fn apply_to_unseen_value() {
        let ds = one_column(&[1.0, 3.0]);
        let s = Standardizer::fit(&ds);
        // mean 2, population std 1
        assert_eq!(s.transform_row(&[4.0]), vec![2.0]);
    }

    #[test]
    fn transformed_train_columns_are_centered_unit() {
        let ds = one_column(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        let s = Standardizer::fit(&ds);
        let t = s.apply(&ds);
        let col: Vec<f64> = t.rows.iter().map(|r| r[0]).collect();
        assert!(crate::util::mean(&col).abs() < 1e-9);
        assert!((crate::util::std_pop(&col) - 1.0).abs() < 1e-9);
    }
}
